#pragma once

// Finite-stage homeomorphism witnesses: the alternating color-preserving
// matching of catalog pieces over a kernel correspondence, its cell-level
// lift with quantitative distortion, isolated-point removal shifts, and
// the driver certifying that the square of a compactification re-embeds
// into the compactification's own piece structure.
//
// Quantities are displacements, not absolute distances: a matched pair
// (a, b) is charged |dist(b, kappa(p)) - dist(a, p)| where p is a nearest
// kernel point of a. An identity self-match therefore has distortion 0,
// and the bound certifies that matched pieces sit at the same depth over
// corresponding kernel locations.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zdsq/partition.hpp"
#include "zdsq/presentation.hpp"

namespace zdsq {

/// Correspondence between the structural kernels of two presentations.
/// Forward maps side-1 base ids to side-2 base ids; reverse is a section
/// used by the odd steps (the inverse when the map is a bijection).
struct KernelMap {
  std::map<int, int> forward;
  std::map<int, int> reverse;
  bool bijective = true;
  std::string description;
};

/// Identity on the base of a presentation matched with itself.
KernelMap identity_kernel_map(PresPtr p);
/// Base-order bijection between presentations with equal base sizes.
KernelMap order_kernel_map(PresPtr p1, PresPtr p2);

/// An object to be matched: a cell of a presentation with a color key.
struct WObj {
  int cell_id = -1;
  std::vector<int> members;
  std::string color;
  NormalForm label;
};

/// Color assignment for the matchable (non-base) cells.
struct ColorMap {
  std::map<int, std::string> by_cell;
};

class StarConditionViolated : public std::runtime_error {
 public:
  StarConditionViolated(std::string color, int kernel_point, std::string radius)
      : std::runtime_error("star condition fails for color '" + color +
                           "' near kernel point " +
                           std::to_string(kernel_point) + " (radius " +
                           radius + ")"),
        color_(std::move(color)),
        kernel_point_(kernel_point) {}
  const std::string& color() const { return color_; }
  int kernel_point() const { return kernel_point_; }

 private:
  std::string color_;
  int kernel_point_;
};

class ColorCountMismatch : public std::runtime_error {
 public:
  ColorCountMismatch(std::string color, size_t n1, size_t n2)
      : std::runtime_error("color '" + color + "' has " + std::to_string(n1) +
                           " objects on one side and " + std::to_string(n2) +
                           " on the other"),
        color_(std::move(color)) {}
  const std::string& color() const { return color_; }

 private:
  std::string color_;
};

struct TracePair {
  int a_cell = -1;
  int b_cell = -1;
  std::string color;
  Q bound;           // recorded displacement of this step
  bool achieved;     // bound <= 2^-n for this step index
  bool even_step;    // which side moved first
};

struct WitnessTrace {
  std::vector<TracePair> pairs;
  std::string kernel_map_description;
  /// Worst kernel coverage radius per color and side, recorded for audit.
  std::vector<std::string> density_report;
};

/// Alternating greedy matching of the two object families over the kernel
/// correspondence. Counts per color must agree; every color must be
/// realized on both sides.
WitnessTrace color_backforth(PresPtr p1, PresPtr p2, const ColorMap& mu1,
                             const ColorMap& mu2, const KernelMap& kernel_map);

struct SubWitness {
  int a_cell = -1;
  int b_cell = -1;
  bool recursive = false;  // false: certified by label equality only
  size_t matched = 0;      // object pairs matched inside, when recursive
};

struct StageWitness {
  WitnessTrace trace;
  bool labels_preserved = true;
  Q distortion;  // max recorded displacement
  std::vector<SubWitness> sub_witnesses;
};

/// Cell-level lift: colors are the cell labels, hypotheses are checked at
/// stage (perfect-at-stage kernels, every shared label realized on both
/// sides), and matched non-singleton cells receive recursive or
/// label-equality sub-witnesses up to the stage recursion cap.
StageWitness extend_homeo(PresPtr p1, PresPtr p2,
                          const KernelMap& kernel_map);
/// Variant with explicit object families (used by the square driver).
/// Precomputed side-1 depths and kernel anchors may be supplied when the
/// caller derives them structurally.
StageWitness extend_homeo_families(PresPtr p1, PresPtr p2,
                                   std::vector<WObj> fam1,
                                   std::vector<WObj> fam2,
                                   const KernelMap& kernel_map, Nat stage,
                                   const std::vector<Q>* depth1 = nullptr,
                                   const std::vector<int>* anchor1 = nullptr);

/// Shift description removing one isolated point: a label-preserving
/// index shift along the converging sequence the point belongs to. The
/// deepest stage element has no successor at stage and is recorded as the
/// overflow of the truncation.
struct RemovalWitness {
  int removed = -1;
  std::vector<int> sequence;                // ids along the shifted sequence
  std::vector<std::pair<int, int>> shift;   // from -> to
  std::optional<int> overflow_from;         // last element, shifts beyond stage
  std::string note;
};

RemovalWitness remove_isolated_witness(PresPtr p, int z);

/// The square driver: presents the square of the compactification over M,
/// assembles the product cell family (isolated-point splittings of the
/// factor pieces, paired across the factors), transports its demands into
/// a piece layout of the compactification itself, and runs the cell-level
/// matching. Valid output certifies that every product label lands back
/// in the catalog and that the matching respects depth over the kernel
/// interleaving within the stated distortion.
struct SquareWitnessResult {
  StageWitness witness;
  PresPtr square;        // presentation of the product
  PresPtr target;        // demand-built presentation of the space itself
  size_t family_size = 0;
  std::vector<std::string> labels;  // distinct labels of the family
};

SquareWitnessResult square_witness(const EPSet& m, Nat stage);

}  // namespace zdsq
