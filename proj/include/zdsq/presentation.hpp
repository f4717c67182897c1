#pragma once

// Finite-stage metric models with exact rational coordinates.
//
// A presentation truncates a space to a finite point set in [0,1]^d with
// the sup metric. Countable scattered forms are laid out recursively on a
// line; compactification-type spaces (Z(n), X{M}, Cantor) get a Cantor
// base on the first axis and catalog pieces in dyadic strips above it;
// products concatenate coordinates. Every stage embeds isometrically into
// the next, so the stage is the only approximation knob.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zdsq/invariants.hpp"
#include "zdsq/normal_form.hpp"

namespace zdsq {

using Q = mpq_class;

std::string q_to_string(const Q& q);
Q q_parse(const std::string& s);
/// 2^(-n) as an exact rational.
Q q_pow2_neg(Nat n);
/// 3^(-n) as an exact rational.
Q q_pow3_neg(Nat n);

/// Strip boundaries t_n = 2^(-n) of the piece schedule.
Q schedule_t(Nat n);
/// Net radii eps_n = 2^(-n).
Q schedule_eps(Nat n);
/// The k-th Cantor base abscissa: bit i of k contributes 2/3^(i+1).
/// For k < 2^s these are exactly the level-s triadic left endpoints.
Q schedule_q(Nat k);

Q linf_dist(const std::vector<Q>& a, const std::vector<Q>& b);
/// Sup-metric diameter of a finite point set (componentwise spread).
Q linf_diameter(const std::vector<std::vector<Q>>& pts);

/// Exact Hausdorff distance between nonempty finite point sets.
Q hausdorff_distance(const std::vector<std::vector<Q>>& a,
                     const std::vector<std::vector<Q>>& b);

/// Max member diameter of a family of point sets.
Q mesh(const std::vector<std::vector<std::vector<Q>>>& cells);

/// Catalog of normal forms a compactification is built over, together
/// with its deterministic enumeration. member_at(n) follows the ruler
/// sequence, so every member appears at infinitely many indices.
class Catalog {
 public:
  /// Explicit finite catalog (used for Z(n): members 1, w+1, ..., w^(n-1)+1).
  static Catalog finite_list(std::vector<NormalForm> members);
  /// All finite products of 1, the w^n+1 and the Z(m) for m in the set.
  static Catalog products_over(const EPSet& m);
  /// For Z(n): the catalog {gamma_b : b < n}.
  static Catalog gamma_below(Nat n);
  static Catalog empty() { return finite_list({}); }

  bool is_empty() const;
  /// r-th catalog member in the canonical member order.
  NormalForm member(Nat r) const;
  /// n-th entry of the enumeration sequence (ruler over members).
  NormalForm member_at(Nat n) const;
  /// Index of the member used at sequence position n.
  Nat member_index_at(Nat n) const;

  std::string to_string() const;
  friend bool operator==(const Catalog&, const Catalog&) = default;

 private:
  bool finite_ = true;
  std::vector<NormalForm> members_;
  std::optional<EPSet> m_;
};

struct PresPoint {
  std::vector<Q> x;
  int cell = 0;
  bool kernel = false;
  std::optional<Ordinal> iso_rank;
  std::string addr;
};

struct PresCell {
  int id = 0;
  NormalForm label;
  std::vector<int> members;
};

class Presentation;
using PresPtr = std::shared_ptr<const Presentation>;

/// A catalog piece of a compactification presentation: a scaled copy of a
/// member presentation placed in a strip over one base abscissa.
struct Piece {
  Nat strip = 0;
  Nat col = 0;
  NormalForm label;
  int cell_id = 0;
  PresPtr content;             // standalone presentation of the label
  std::vector<int> point_ids;  // global ids, in content point order
  Q y0, sigma;                 // placement: y = y0 + sigma*c0, z = sigma*ci
};

/// Layout tree of a countable presentation. A node with mult > 1 has one
/// block child per copy; a node with rank > 0 and mult 1 has the limit
/// point plus one child per truncated sequence element.
struct CtblNode {
  ScatteredForm form{Ordinal(), 1};
  int top_point = -1;  // the point carried by this node (rank>0: the limit)
  std::vector<CtblNode> blocks;
  std::vector<CtblNode> children;  // index i is the (i+1)-st sequence element
  std::vector<int> point_ids;      // all points below this node
};

class Presentation {
 public:
  enum class Kind { Countable, Compactification, Product };

  Kind kind = Kind::Countable;
  Nat stage = 1;
  size_t dim = 1;
  std::vector<PresPoint> points;
  std::vector<PresCell> cells;
  std::vector<int> base;  // structural base point ids (empty for countable)

  // Countable metadata.
  ScatteredForm form{Ordinal(), 1};
  std::shared_ptr<CtblNode> tree;

  // Compactification metadata.
  Catalog catalog = Catalog::empty();
  std::vector<Piece> pieces;

  // Product metadata.
  PresPtr left, right;
  std::vector<std::pair<int, int>> pair_index;  // per point: factor ids

  NormalForm label;  // what the whole presentation presents

  std::vector<Q> coords(int id) const { return points[id].x; }
  Q dist(int a, int b) const;
  Q dist_to_set(int id, const std::vector<int>& set) const;
  Q diameter(const std::vector<int>& ids) const;
  /// Nearest base point to a point set, ties broken by coordinate order.
  int nearest_base(const std::vector<int>& ids) const;
  /// Distance from a point set to the structural base.
  Q depth(const std::vector<int>& ids) const;
  /// Max over base points of the distance to the non-kernel part;
  /// nullopt when there are no non-kernel points.
  std::optional<Q> density_radius() const;

  std::vector<int> non_kernel_points() const;
  /// Separation margin: min inter-cell distance minus max cell diameter
  /// must be positive whenever there are two or more cells.
  bool cells_separated() const;
};

/// Recursive line layout of a countable scattered form. Requires a finite
/// rank and stage >= 1.
PresPtr present_countable(const ScatteredForm& f, Nat stage);

/// Compactification layout: 2^stage base points, catalog pieces at strips
/// n < stage and columns k <= n, each piece presented at stage-1 (stage 1
/// is therefore base-only).
PresPtr present_K(const Catalog& catalog, Nat stage,
                  std::optional<NormalForm> label = std::nullopt);

/// Presentation of an arbitrary expression (products fold pairwise).
PresPtr present_expr(const SpaceExpr& e, Nat stage);

/// Presentation of a normal form.
PresPtr present_nf(const NormalForm& nf, Nat stage);

/// Product of two presentations: coordinates concatenate, cell labels
/// multiply, a point is kernel when either factor point is.
PresPtr present_product(PresPtr a, PresPtr b);

}  // namespace zdsq
