#pragma once

// Computable homeomorphism invariants of normal forms, the three-valued
// decision procedure with replayable certificates, and the generator for
// finite families of pairwise non-homeomorphic index sets.

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "zdsq/normal_form.hpp"

namespace zdsq {

/// Finite or cofinite set of naturals, exact.
class NatSet {
 public:
  static NatSet finite(std::set<Nat> members);
  static NatSet cofinite(std::set<Nat> complement);
  static NatSet all();
  static NatSet empty() { return finite({}); }

  bool is_cofinite() const { return cofinite_; }
  const std::set<Nat>& data() const { return data_; }  // members or complement

  bool contains(Nat n) const;
  /// Pointwise sums {a + b}; empty if either side is empty.
  friend NatSet sumset(const NatSet& a, const NatSet& b);
  /// Some element of the symmetric difference (least, preferring a \ b).
  static std::optional<Nat> separating(const NatSet& a, const NatSet& b);

  friend bool operator==(const NatSet&, const NatSet&) = default;
  std::string to_string() const;

 private:
  bool cofinite_ = false;
  std::set<Nat> data_;
};

struct Cardinality {
  enum class Kind { Finite, CountablyInfinite, Continuum };
  Kind kind = Kind::Finite;
  Nat count = 1;  // meaningful for Finite

  friend bool operator==(const Cardinality&, const Cardinality&) = default;
  std::string to_string() const;
};

/// The set of Z indices realized on open subsets; Unknown when the normal
/// form has two or more uncountable non-Cantor factors.
struct OpenZ {
  enum class Kind { Unknown, Finite, Periodic };
  Kind kind = Kind::Unknown;
  std::set<Nat> finite;     // for Finite
  std::optional<EPSet> ep;  // for Periodic

  bool known() const { return kind != Kind::Unknown; }
  friend bool operator==(const OpenZ&, const OpenZ&) = default;
  std::string to_string() const;
  std::optional<Nat> separating(const OpenZ& other) const;
};

struct Invariants {
  Cardinality cardinality;
  std::optional<ScatteredForm> countable_form;
  NatSet spectrum = NatSet::empty();  // non-kernel point ranks
  OpenZ open_z;
};

Invariants compute_invariants(const NormalForm& nf);
Invariants compute_invariants(const SpaceExpr& e);

struct Certificate {
  std::string invariant;  // which field separates
  std::string lhs, rhs;   // the two computed values
  std::optional<Nat> witness;
};

struct Verdict {
  enum class Kind { Homeo, NotHomeo, Unknown };
  Kind kind = Kind::Unknown;
  std::vector<std::string> trace;        // rewrite traces for Homeo
  std::optional<Certificate> certificate;  // for NotHomeo
  std::string reason;                    // for Unknown
};

/// Sound, incomplete decision: equal normal forms give Homeo; a differing
/// computed invariant gives NotHomeo with a replayable certificate;
/// otherwise Unknown.
Verdict decide_homeo(const SpaceExpr& e1, const SpaceExpr& e2);

struct FamilyCertificate {
  size_t i = 0, j = 0;
  Nat witness = 0;  // index in exactly one of the two open-subset sets
};

struct Family {
  std::vector<EPSet> members;
  std::vector<FamilyCertificate> certificates;  // one per unordered pair
};

/// `count` pairwise distinct index sets (singleton odd exceptional parts
/// over a fixed even tail) with pairwise separation certificates, each
/// validated through decide_homeo. Requires count >= 2.
Family family_generate(Nat count);

}  // namespace zdsq
