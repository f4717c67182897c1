#pragma once

// Brute-force Cantor-Bendixson calculus on finite products of ordinal
// intervals. Subsets are kept in an exactly closed form: finite unions of
// rectangles whose sides are either {0} or the positive multiples of w^e
// inside the factor interval. Iterated derivatives stay in this language,
// which makes ranks and final-stage cardinalities exactly computable.
//
// This module is an oracle: it never uses the natural-sum product law, only
// the one-dimensional multiples rule and the Leibniz rule for derivatives
// of products, so agreement with product_form is a real cross-check.

#include <optional>
#include <string>
#include <vector>

#include "zdsq/ordinal.hpp"

namespace zdsq {

/// One side of a rectangle inside a single ordinal interval:
/// either the singleton {0} or the positive multiples of w^exp.
struct RectAtom {
  bool singleton = false;  // true: {0}; false: PMult(exp)
  Nat exp = 0;

  static RectAtom zero() { return {true, 0}; }
  static RectAtom pmult(Nat e) { return {false, e}; }

  friend bool operator==(const RectAtom&, const RectAtom&) = default;
  std::string to_string() const;
};

bool operator<(const RectAtom& a, const RectAtom& b);

using Rect = std::vector<RectAtom>;

/// A point of a product of ordinal intervals.
using OrdinalPoint = std::vector<Ordinal>;

/// Finite union of rectangles inside an ambient product of ordinal
/// intervals. The ambient factor (a, j) is [0, w^a * j] for a > 0 and the
/// j-point discrete space {0, ..., j-1} for a = 0.
class RectSet {
 public:
  RectSet(std::vector<ScatteredForm> ambient, std::vector<Rect> rects);

  /// The whole ambient space as a RectSet.
  static RectSet full_space(std::vector<ScatteredForm> ambient);

  const std::vector<ScatteredForm>& ambient() const { return ambient_; }
  const std::vector<Rect>& rects() const { return rects_; }
  bool empty() const { return rects_.empty(); }

  bool contains(const OrdinalPoint& p) const;

  /// Exact cardinality when finite; nullopt when infinite.
  std::optional<Nat> finite_cardinality() const;

  /// All points, provided the set is finite.
  std::vector<OrdinalPoint> enumerate_finite() const;

  std::string to_string() const;

 private:
  std::vector<ScatteredForm> ambient_;
  std::vector<Rect> rects_;  // canonical: sorted, deduped, absorbed
};

/// Number of points of the atom within ambient factor f; nullopt = infinite.
std::optional<Nat> atom_cardinality(const RectAtom& a, const ScatteredForm& f);
bool atom_empty(const RectAtom& a, const ScatteredForm& f);
bool atom_contains(const RectAtom& a, const ScatteredForm& f, const Ordinal& x);

/// Set of limit points, computed with D(PMult(e)) = PMult(e+1),
/// D({0}) = {} and the product rule (A x B)' = (A' x B) u (A x B').
RectSet derive(const RectSet& s);

/// Iterates derive until empty. Returns the number of iterations minus one
/// (as an Ordinal) together with the exact cardinality of the last nonempty
/// stage. Requires every factor rank to be finite.
std::pair<Ordinal, Nat> rank_and_mult(const std::vector<ScatteredForm>& space);

/// All derivative stages, from the full space down to the last nonempty one.
std::vector<RectSet> derivative_stages(const std::vector<ScatteredForm>& space);

/// Least n such that x is not in the (n+1)-st derivative of the full space.
/// Throws if x lies outside the ambient product.
Ordinal point_rank(const OrdinalPoint& x,
                   const std::vector<ScatteredForm>& space);

bool point_in_ambient(const OrdinalPoint& x,
                      const std::vector<ScatteredForm>& space);

}  // namespace zdsq
