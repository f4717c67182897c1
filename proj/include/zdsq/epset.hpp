#pragma once

// Canonical eventually periodic subsets of the positive naturals. These
// stand in for arbitrary infinite index sets M: membership is decidable,
// equality is syntactic on the canonical record, and set differences can
// be searched exactly.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zdsq/ordinal.hpp"

namespace zdsq {

/// Infinite subset of {1, 2, 3, ...}: below `threshold` membership is
/// given by the finite exception set, from `threshold` on by residues
/// modulo `period`. Canonical: minimal period first, then minimal
/// threshold; equal sets have equal records.
class EPSet {
 public:
  /// Builds the canonical record denoting
  ///   exceptions  u  { n >= threshold : n mod period in residues }.
  /// Throws if the set would contain 0 or be ill-formed (empty residues).
  static EPSet make(Nat threshold, Nat period, std::set<Nat> residues,
                    std::set<Nat> exceptions);

  /// { first + step*k : k >= 0 }  u  extra. Throws when step = 0 (finite
  /// set), when first = 0, or when any listed element is 0.
  static EPSet arithmetic(Nat first, Nat step, const std::vector<Nat>& extra);

  Nat threshold() const { return threshold_; }
  Nat period() const { return period_; }
  const std::set<Nat>& residues() const { return residues_; }
  const std::set<Nat>& exceptions() const { return exceptions_; }

  bool contains(Nat n) const;

  /// Least element of this \ other; nullopt when this is a subset of other.
  std::optional<Nat> min_difference(const EPSet& other) const;

  /// Least element of the symmetric difference, preferring this \ other.
  std::optional<Nat> separating_element(const EPSet& other) const;

  Nat min_element() const;

  friend bool operator==(const EPSet&, const EPSet&) = default;
  bool operator<(const EPSet& o) const;

  /// Renders in the expression-grammar form, e.g. "1,5;2+2k".
  std::string to_string() const;

 private:
  EPSet() = default;
  Nat threshold_ = 1;
  Nat period_ = 1;
  std::set<Nat> residues_;
  std::set<Nat> exceptions_;
};

}  // namespace zdsq
