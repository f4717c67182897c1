#pragma once

// Rewrite normalization of space expressions. The rules:
//   R1  countable atoms merge through the product law for scattered forms;
//   R2  X{M}*X{M} collapses to X{M};
//   R3  a Cantor factor absorbs the whole product (the product is compact,
//       metrizable, zero-dimensional and has no isolated points);
//   R4  Z(1)*Z(1) collapses to Z(1), guarded by an explicit hypothesis
//       check; the rule is not applied to any other Z index.
// The result is independent of the order of the factors.

#include <optional>
#include <string>
#include <vector>

#include "zdsq/expr.hpp"

namespace zdsq {

struct NormalForm {
  ScatteredForm countable{Ordinal(), 1};  // unit: one point
  std::vector<Nat> z_atoms;               // sorted multiset of Z indices
  std::vector<EPSet> x_atoms;             // sorted, duplicate-free
  bool cantor = false;                    // when set, all else is trivial

  bool is_countable() const {
    return z_atoms.empty() && x_atoms.empty() && !cantor;
  }
  bool is_unit() const {
    return is_countable() && countable == ScatteredForm(Ordinal(), 1);
  }
  size_t uncountable_non_cantor_atoms() const {
    return z_atoms.size() + x_atoms.size();
  }

  friend bool operator==(const NormalForm&, const NormalForm&) = default;
  bool operator<(const NormalForm& o) const;

  /// Canonical expression-like rendering, e.g. "Fin(2)*O(3)*Z(2)".
  std::string to_string() const;
};

struct NormalizeResult {
  NormalForm form;
  std::vector<std::string> trace;  // applied rules in application order
};

NormalizeResult normalize(const SpaceExpr& e);

/// Checks the hypotheses under which the square of a space whose non-kernel
/// points are all isolated (and dense toward the kernel) is again such a
/// space with a Cantor kernel. In this algebra exactly the Z(1) atom
/// qualifies; the check refuses every other index.
bool idempotent_square_hypotheses(Nat z_index);

/// The normal form of a single atom.
NormalForm atom_normal_form(const Atom& a);

/// Product of two normal forms (applies R1-R4 again).
NormalForm product_normal_form(const NormalForm& a, const NormalForm& b,
                               std::vector<std::string>* trace = nullptr);

}  // namespace zdsq
