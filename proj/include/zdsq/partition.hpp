#pragma once

// Executable clopen partitions at finite stage. Cells are point sets of a
// presentation together with a label (the homeomorphism type of the piece
// of the underlying space the cell truncates) and a splitter that refines
// the cell to any finer mesh along the construction structure.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zdsq/presentation.hpp"

namespace zdsq {

struct PCell {
  NormalForm label;
  std::vector<int> members;  // point ids into the presentation
  Q diameter = 0;
  std::string provenance;
  /// Splits this cell into subcells of diameter < eps; labels stay inside
  /// the same catalog and one subcell keeps this cell's label.
  std::function<std::vector<PCell>(const Q&)> split;
};

struct CellFamily {
  std::vector<PCell> cells;
  std::string provenance;

  Q mesh() const;
  bool pairwise_disjoint() const;
  std::vector<int> support() const;  // sorted union of members
};

class StageTooCoarse : public std::runtime_error {
 public:
  explicit StageTooCoarse(const std::string& msg) : std::runtime_error(msg) {}
};

/// Condition failure in the rank-targeted construction; `clause` numbers
/// the violated construction condition (1..6).
class PartitionConditionError : public std::runtime_error {
 public:
  PartitionConditionError(Nat level, int clause, const std::string& msg)
      : std::runtime_error(msg), level_(level), clause_(clause) {}
  Nat level() const { return level_; }
  int clause() const { return clause_; }

 private:
  Nat level_;
  int clause_;
};

/// Finite clopen partition of a countable presentation with mesh < eps.
/// Every label is 1 or w^n+1; when the presented form has multiplicity
/// one, some cell keeps the input label; the labels recombine to the
/// input form under the disjoint-union law.
CellFamily partition_O(const ScatteredForm& f, const Q& eps, PresPtr p);

/// Finite clopen partition of a compactification presentation of Z(n):
/// kernel blocks (with their deep strips) labeled Z(n), peeled shallow
/// pieces partitioned into catalog labels. Throws StageTooCoarse when eps
/// is at or below the base resolution 3^(-stage).
CellFamily partition_Z(Nat n, const Q& eps, PresPtr p);

/// Factorwise partition of a finite product of countable and Z factors;
/// cells are products of factor cells. The label must stay inside the
/// product catalog: no X atoms, no Cantor factor.
CellFamily partition_member(const NormalForm& s, const Q& eps, PresPtr p);

/// Refines a disjoint family so that the n-th input cell is split to mesh
/// < 2^(-n): same union, refinement, a same-labeled subcell inside every
/// input cell, labels unchanged as a set of catalog labels.
CellFamily refine_null(const CellFamily& family, PresPtr p);

/// Null partition of a union of whole catalog pieces (a countable open
/// region) with labels among 1, w+1, ..., w^(alpha-1)+1 and the n-th cell
/// of diameter < 2^(-n). The region's points must be non-kernel with
/// rank below alpha.
CellFamily partition_countable_open(PresPtr p, const std::vector<int>& region,
                                    Nat alpha);

struct NetLevel {
  Nat n = 0;          // schedule level
  Nat beta = 0;       // target rank of this level
  Nat net_level = 0;  // dyadic level of the net
  std::vector<int> net_points;
  Q eps;              // 2^(-n)
  Q covering_radius;  // exact, over all base points
  std::vector<size_t> piece_indices;  // chosen pieces, one per net point
  Q max_dist_to_net;  // clause 6 quantity
  Q max_diameter;     // clause 4 quantity
  Q max_dist_to_kernel;  // clause 5 quantity
};

struct NetFamily {
  std::vector<NetLevel> levels;
};

struct AllRanksResult {
  CellFamily family;
  NetFamily nets;
  Nat levels_built = 0;  // levels 0..levels_built-1 satisfy all conditions
  /// For every rank b < alpha: the distance bound within which a cell of
  /// that rank sits near every net point of its strongest level.
  std::vector<Q> coverage_bounds;
};

/// Rank-targeted decomposition of a presentation of a Z(alpha)-type
/// space: builds nets F_n and per-level piece families V_n with the
/// six construction conditions checked exactly, then assembles the full
/// partition of the non-kernel part. Requires stage >= alpha + 2; throws
/// PartitionConditionError naming the violated clause when the stage is
/// too coarse to realize every rank below alpha.
AllRanksResult partition_all_ranks(PresPtr p, Nat alpha);

}  // namespace zdsq
