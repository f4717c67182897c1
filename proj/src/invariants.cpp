#include "zdsq/invariants.hpp"

#include <algorithm>

namespace zdsq {

NatSet NatSet::finite(std::set<Nat> members) {
  NatSet s;
  s.cofinite_ = false;
  s.data_ = std::move(members);
  return s;
}

NatSet NatSet::cofinite(std::set<Nat> complement) {
  NatSet s;
  s.cofinite_ = true;
  s.data_ = std::move(complement);
  return s;
}

NatSet NatSet::all() { return cofinite({}); }

bool NatSet::contains(Nat n) const {
  return cofinite_ ? data_.count(n) == 0 : data_.count(n) > 0;
}

NatSet sumset(const NatSet& a, const NatSet& b) {
  if (!a.cofinite_ && a.data_.empty()) return a;
  if (!b.cofinite_ && b.data_.empty()) return b;
  if (!a.cofinite_ && !b.cofinite_) {
    std::set<Nat> out;
    for (Nat x : a.data_) {
      for (Nat y : b.data_) out.insert(x + y);
    }
    return NatSet::finite(std::move(out));
  }
  // At least one side cofinite: the sum is cofinite. Beyond
  // min(a) + min(b) + t, where t bounds both complements, everything is
  // reachable; compute the complement below that bound exactly.
  auto min_of = [](const NatSet& s) -> Nat {
    if (!s.cofinite_) return *s.data_.begin();
    Nat n = 0;
    while (s.data_.count(n) > 0) ++n;
    return n;
  };
  Nat ta = a.cofinite_ && !a.data_.empty() ? *a.data_.rbegin() + 1 : 0;
  Nat tb = b.cofinite_ && !b.data_.empty() ? *b.data_.rbegin() + 1 : 0;
  Nat bound = min_of(a) + min_of(b) + std::max(ta, tb) +
              (a.cofinite_ ? 0 : min_of(a)) + (b.cofinite_ ? 0 : min_of(b)) + 2;
  auto in = [&](const NatSet& s, Nat n) { return s.contains(n); };
  std::set<Nat> complement;
  for (Nat n = 0; n <= bound; ++n) {
    bool hit = false;
    for (Nat x = 0; x <= n && !hit; ++x) {
      if (in(a, x) && in(b, n - x)) hit = true;
    }
    if (!hit) complement.insert(n);
  }
  return NatSet::cofinite(std::move(complement));
}

std::optional<Nat> NatSet::separating(const NatSet& a, const NatSet& b) {
  if (a == b) return std::nullopt;
  Nat bound = 1;
  if (!a.data_.empty()) bound = std::max(bound, *a.data_.rbegin() + 2);
  if (!b.data_.empty()) bound = std::max(bound, *b.data_.rbegin() + 2);
  for (Nat n = 0; n <= bound; ++n) {
    if (a.contains(n) && !b.contains(n)) return n;
  }
  for (Nat n = 0; n <= bound; ++n) {
    if (b.contains(n) && !a.contains(n)) return n;
  }
  return std::nullopt;  // only when one is cofinite and one finite but equal: impossible
}

std::string NatSet::to_string() const {
  std::string inner;
  bool first = true;
  for (Nat n : data_) {
    if (!first) inner += ",";
    first = false;
    inner += std::to_string(n);
  }
  if (cofinite_) return "all\\{" + inner + "}";
  return "{" + inner + "}";
}

std::string Cardinality::to_string() const {
  switch (kind) {
    case Kind::Finite:
      return "finite(" + std::to_string(count) + ")";
    case Kind::CountablyInfinite:
      return "countably-infinite";
    case Kind::Continuum:
      return "continuum";
  }
  return "?";
}

std::string OpenZ::to_string() const {
  switch (kind) {
    case Kind::Unknown:
      return "unknown";
    case Kind::Periodic:
      return "{" + ep->to_string() + "}";
    case Kind::Finite: {
      std::string out = "{";
      bool first = true;
      for (Nat n : finite) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(n);
      }
      return out + "}";
    }
  }
  return "?";
}

std::optional<Nat> OpenZ::separating(const OpenZ& other) const {
  if (!known() || !other.known()) return std::nullopt;
  if (kind == Kind::Periodic && other.kind == Kind::Periodic) {
    return ep->separating_element(*other.ep);
  }
  auto member = [](const OpenZ& s, Nat n) {
    return s.kind == Kind::Finite ? s.finite.count(n) > 0 : s.ep->contains(n);
  };
  // At least one side is a finite set here, so a difference element lies
  // within the finite data plus one period of the other side.
  Nat bound = 2;
  for (const OpenZ* s : {this, &other}) {
    if (s->kind == Kind::Finite && !s->finite.empty()) {
      bound = std::max(bound, *s->finite.rbegin() + 1);
    }
    if (s->kind == Kind::Periodic) {
      bound = std::max(bound, s->ep->threshold() + s->ep->period() + 1);
    }
  }
  for (Nat n = 1; n <= bound; ++n) {
    if (member(*this, n) && !member(other, n)) return n;
  }
  for (Nat n = 1; n <= bound; ++n) {
    if (member(other, n) && !member(*this, n)) return n;
  }
  return std::nullopt;
}

namespace {

NatSet spectrum_of_countable(const ScatteredForm& f) {
  std::set<Nat> s;
  Nat r = f.rank.is_finite() ? f.rank.finite_value() : 0;
  if (f.rank.is_finite()) {
    for (Nat k = 0; k <= r; ++k) s.insert(k);
    return NatSet::finite(std::move(s));
  }
  // Symbolic ranks beyond the finite range are outside the finite-spectrum
  // calculus; report only the guaranteed finite part {0}.
  s.insert(0);
  return NatSet::finite(std::move(s));
}

}  // namespace

Invariants compute_invariants(const NormalForm& nf) {
  Invariants inv;
  if (nf.cantor) {
    inv.cardinality = {Cardinality::Kind::Continuum, 0};
    inv.spectrum = NatSet::empty();  // no non-kernel points
    inv.open_z = {OpenZ::Kind::Finite, {}, std::nullopt};
    return inv;
  }

  bool uncountable = !nf.z_atoms.empty() || !nf.x_atoms.empty();
  if (!uncountable) {
    if (nf.countable.rank.is_zero()) {
      inv.cardinality = {Cardinality::Kind::Finite, nf.countable.mult};
    } else {
      inv.cardinality = {Cardinality::Kind::CountablyInfinite, 0};
    }
    inv.countable_form = nf.countable;
  } else {
    inv.cardinality = {Cardinality::Kind::Continuum, 0};
  }

  // Rank spectrum: sumset over the factors. Countable part first.
  NatSet spec = spectrum_of_countable(nf.countable);
  for (Nat z : nf.z_atoms) {
    std::set<Nat> s;
    for (Nat k = 0; k < z; ++k) s.insert(k);
    spec = sumset(spec, NatSet::finite(std::move(s)));
  }
  for (size_t i = 0; i < nf.x_atoms.size(); ++i) {
    spec = sumset(spec, NatSet::all());  // every rank occurs in X{M}
  }
  inv.spectrum = spec;

  // Open-subset Z indices; known only with at most one uncountable
  // non-Cantor factor.
  size_t u = nf.uncountable_non_cantor_atoms();
  if (u == 0) {
    inv.open_z = {OpenZ::Kind::Finite, {}, std::nullopt};
  } else if (u == 1) {
    if (!nf.z_atoms.empty()) {
      inv.open_z = {OpenZ::Kind::Finite, {nf.z_atoms[0]}, std::nullopt};
    } else {
      inv.open_z = {OpenZ::Kind::Periodic, {}, nf.x_atoms[0]};
    }
  } else {
    inv.open_z = {OpenZ::Kind::Unknown, {}, std::nullopt};
  }
  return inv;
}

Invariants compute_invariants(const SpaceExpr& e) {
  return compute_invariants(normalize(e).form);
}

Verdict decide_homeo(const SpaceExpr& e1, const SpaceExpr& e2) {
  NormalizeResult n1 = normalize(e1);
  NormalizeResult n2 = normalize(e2);
  Verdict v;
  if (n1.form == n2.form) {
    v.kind = Verdict::Kind::Homeo;
    for (const auto& t : n1.trace) v.trace.push_back("lhs " + t);
    for (const auto& t : n2.trace) v.trace.push_back("rhs " + t);
    v.trace.push_back("equal normal forms: " + n1.form.to_string());
    return v;
  }

  Invariants i1 = compute_invariants(n1.form);
  Invariants i2 = compute_invariants(n2.form);

  if (!(i1.cardinality == i2.cardinality)) {
    v.kind = Verdict::Kind::NotHomeo;
    v.certificate = Certificate{"cardinality", i1.cardinality.to_string(),
                                i2.cardinality.to_string(), std::nullopt};
    return v;
  }
  if (i1.countable_form.has_value() && i2.countable_form.has_value() &&
      !(*i1.countable_form == *i2.countable_form)) {
    v.kind = Verdict::Kind::NotHomeo;
    v.certificate =
        Certificate{"countable-form", i1.countable_form->to_string(),
                    i2.countable_form->to_string(), std::nullopt};
    return v;
  }
  if (!(i1.spectrum == i2.spectrum)) {
    v.kind = Verdict::Kind::NotHomeo;
    v.certificate = Certificate{"rank-spectrum", i1.spectrum.to_string(),
                                i2.spectrum.to_string(),
                                NatSet::separating(i1.spectrum, i2.spectrum)};
    return v;
  }
  if (i1.open_z.known() && i2.open_z.known() && !(i1.open_z == i2.open_z)) {
    auto w = i1.open_z.separating(i2.open_z);
    if (w.has_value()) {
      v.kind = Verdict::Kind::NotHomeo;
      v.certificate = Certificate{"open-z", i1.open_z.to_string(),
                                  i2.open_z.to_string(), w};
      return v;
    }
  }
  v.kind = Verdict::Kind::Unknown;
  v.reason = "no applicable rewrite rule or separating invariant";
  return v;
}

Family family_generate(Nat count) {
  if (count < 2) {
    throw std::invalid_argument("family_generate: at least two members needed");
  }
  Family fam;
  for (Nat i = 0; i < count; ++i) {
    // The i-th member adjoins the odd number 2i+1 to the even tail.
    fam.members.push_back(EPSet::arithmetic(2, 2, {2 * i + 1}));
  }
  for (size_t i = 0; i < fam.members.size(); ++i) {
    for (size_t j = i + 1; j < fam.members.size(); ++j) {
      auto w = fam.members[i].min_difference(fam.members[j]);
      if (!w.has_value()) w = fam.members[j].min_difference(fam.members[i]);
      if (!w.has_value()) {
        throw std::logic_error("family_generate: members not distinct");
      }
      fam.certificates.push_back({i, j, *w});
    }
  }
  return fam;
}

}  // namespace zdsq
