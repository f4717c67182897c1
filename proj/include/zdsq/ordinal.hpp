#pragma once

// Exact ordinal arithmetic below w^w (Cantor normal form with finite
// exponents) and the (rank, multiplicity) classification of countable
// compact metrizable spaces.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zdsq {

using Nat = std::uint64_t;

/// Ordinal below w^w in Cantor normal form.
/// Terms are (exponent, coefficient) pairs with exponents strictly
/// decreasing and coefficients >= 1. The empty term list is 0.
class Ordinal {
 public:
  struct Term {
    Nat exponent = 0;
    Nat coefficient = 0;
    friend bool operator==(const Term&, const Term&) = default;
  };

  Ordinal() = default;

  /// Finite ordinal n.
  static Ordinal finite(Nat n);

  /// w^e * c  (c >= 1).
  static Ordinal omega_pow(Nat e, Nat c = 1);

  /// Builds from arbitrary (exponent, coefficient) pairs, merging and
  /// sorting into canonical form. Zero coefficients are dropped.
  static Ordinal from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent == 0);
  }
  /// Value of a finite ordinal; throws for infinite ones.
  Nat finite_value() const;

  /// True when the ordinal is a limit ordinal (no w^0 term, nonzero).
  bool is_limit() const {
    return !terms_.empty() && terms_.back().exponent > 0;
  }

  /// Least exponent present in the normal form; requires nonzero.
  Nat least_exponent() const;
  /// Largest exponent present (the degree); 0 for finite ordinals.
  Nat degree() const { return terms_.empty() ? 0 : terms_[0].exponent; }

  /// True when this is a (positive) multiple of w^e.
  bool divisible_by_omega_pow(Nat e) const {
    return !terms_.empty() && least_exponent() >= e;
  }

  friend bool operator==(const Ordinal&, const Ordinal&) = default;

  std::string to_string() const;
  /// Parses the rendering produced by to_string, e.g. "w^3*2+w*1+4".
  static Ordinal parse(const std::string& text);

 private:
  std::vector<Term> terms_;
};

enum class Cmp { LT, EQ, GT };

/// Total order on ordinals: lexicographic on the CNF term lists.
Cmp compare(const Ordinal& a, const Ordinal& b);

inline bool operator<(const Ordinal& a, const Ordinal& b) {
  return compare(a, b) == Cmp::LT;
}
inline bool operator<=(const Ordinal& a, const Ordinal& b) {
  return compare(a, b) != Cmp::GT;
}

/// Hessenberg (natural) sum: coefficientwise addition of the normal forms.
/// Commutative, associative and strictly monotone in each argument.
Ordinal natural_sum(const Ordinal& a, const Ordinal& b);

/// Classification key of a nonempty countable compact metrizable space:
/// rank 0 with mult k is the k-point discrete space, rank a > 0 with
/// mult k is the ordinal w^a * k + 1.
struct ScatteredForm {
  Ordinal rank;
  Nat mult = 1;

  ScatteredForm() = default;
  ScatteredForm(Ordinal r, Nat m);
  ScatteredForm(Nat finite_rank, Nat m)
      : ScatteredForm(Ordinal::finite(finite_rank), m) {}

  bool rank_is_finite() const { return rank.is_finite(); }
  Nat finite_rank() const { return rank.finite_value(); }

  friend bool operator==(const ScatteredForm&, const ScatteredForm&) = default;

  std::string to_string() const;
};

bool operator<(const ScatteredForm& a, const ScatteredForm& b);

/// Homeomorphism class of a binary product: ranks add naturally,
/// multiplicities multiply. (0,1) is the unit.
ScatteredForm product_form(const ScatteredForm& p, const ScatteredForm& q);

/// Homeomorphism class of a finite disjoint union: the rank is the
/// maximal rank and the multiplicity is the sum over maximal-rank parts.
ScatteredForm sum_form(const std::vector<ScatteredForm>& parts);

}  // namespace zdsq
