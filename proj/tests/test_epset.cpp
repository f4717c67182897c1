#include "zdsq/epset.hpp"

#include <random>

#include "doctest.h"

using namespace zdsq;

TEST_CASE("arithmetic progressions canonicalize to minimal records") {
  EPSet evens = EPSet::arithmetic(2, 2, {});
  CHECK(evens.threshold() == 1);
  CHECK(evens.period() == 2);
  CHECK(evens.residues() == std::set<Nat>{0});
  CHECK(evens.exceptions().empty());
  CHECK(evens.contains(2));
  CHECK_FALSE(evens.contains(3));
  CHECK_FALSE(evens.contains(0));

  EPSet odds = EPSet::arithmetic(1, 2, {});
  CHECK(odds.period() == 2);
  CHECK(odds.residues() == std::set<Nat>{1});

  EPSet one_evens = EPSet::arithmetic(2, 2, {1});
  CHECK(one_evens.contains(1));
  CHECK(one_evens.contains(2));
  CHECK_FALSE(one_evens.contains(3));
  CHECK(one_evens.threshold() == 2);
  CHECK(one_evens.exceptions() == std::set<Nat>{1});
}

TEST_CASE("redundant representations collapse to the same record") {
  // Evens written with period 4 and both even residues.
  EPSet a = EPSet::make(1, 4, {0, 2}, {});
  EPSet b = EPSet::arithmetic(2, 2, {});
  CHECK(a == b);
  // A pointless high threshold disappears.
  EPSet c = EPSet::make(9, 2, {0}, {2, 4, 6, 8});
  CHECK(c == b);
  // A listed element already on the progression is no exception.
  EPSet d = EPSet::arithmetic(2, 2, {6});
  CHECK(d == b);
}

TEST_CASE("rejections: finite or zero-containing sets") {
  CHECK_THROWS_AS(EPSet::arithmetic(2, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(EPSet::arithmetic(0, 2, {}), std::invalid_argument);
  CHECK_THROWS_AS(EPSet::arithmetic(3, 2, {0}), std::invalid_argument);
  CHECK_THROWS_AS(EPSet::make(1, 3, {}, {}), std::invalid_argument);
}

TEST_CASE("canonical records are unique: same set, same record") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    Nat period = 1 + rng() % 6;
    std::set<Nat> residues;
    for (Nat r = 0; r < period; ++r) {
      if (rng() % 2) residues.insert(r);
    }
    if (residues.empty()) residues.insert(rng() % period);
    Nat threshold = 1 + rng() % 8;
    std::set<Nat> exceptions;
    for (Nat e = 1; e < threshold; ++e) {
      if (rng() % 2) exceptions.insert(e);
    }
    EPSet s = EPSet::make(threshold, period, residues, exceptions);

    // Membership agrees with the raw description.
    for (Nat n = 0; n <= threshold + 3 * period; ++n) {
      bool raw = n == 0 ? false
                 : n < threshold ? exceptions.count(n) > 0
                                 : residues.count(n % period) > 0;
      CHECK(s.contains(n) == raw);
    }

    // Idempotent: re-canonicalizing the record changes nothing.
    EPSet again = EPSet::make(s.threshold(), s.period(), s.residues(),
                              s.exceptions());
    CHECK(again == s);

    // Minimality of the period: no proper divisor works as eventual period.
    for (Nat d = 1; d < s.period(); ++d) {
      if (s.period() % d != 0) continue;
      bool periodic = true;
      for (Nat n = s.threshold(); n <= s.threshold() + 2 * s.period(); ++n) {
        if (s.contains(n) != s.contains(n + d)) {
          periodic = false;
          break;
        }
      }
      CHECK_FALSE(periodic);
    }

    // Minimality of the threshold: membership at threshold-1 must disagree
    // with the periodic pattern.
    if (s.threshold() > 1) {
      Nat n = s.threshold() - 1;
      bool pattern = s.residues().count(n % s.period()) > 0;
      CHECK(s.contains(n) != pattern);
    }
  }
}

TEST_CASE("difference search finds least separating elements") {
  EPSet evens = EPSet::arithmetic(2, 2, {});
  EPSet odds = EPSet::arithmetic(1, 2, {});
  CHECK(evens.min_difference(odds) == 2);
  CHECK(odds.min_difference(evens) == 1);
  CHECK(evens.separating_element(odds) == 2);

  EPSet m1 = EPSet::arithmetic(2, 2, {1});
  EPSet m2 = EPSet::arithmetic(2, 2, {3});
  CHECK(m1.min_difference(m2) == 1);
  CHECK(m2.min_difference(m1) == 3);

  // Subset: evens inside all positive naturals.
  EPSet all = EPSet::arithmetic(1, 1, {});
  CHECK(evens.min_difference(all) == std::nullopt);
  CHECK(all.min_difference(evens) == 1);

  CHECK(evens.min_difference(evens) == std::nullopt);
}

TEST_CASE("grammar rendering round trips through arithmetic sets") {
  CHECK(EPSet::arithmetic(2, 2, {}).to_string() == ";2+2k");
  CHECK(EPSet::arithmetic(2, 2, {1}).to_string() == "1;2+2k");
  CHECK(EPSet::arithmetic(6, 2, {1, 5}).to_string() == "1,5;6+2k");
  CHECK(EPSet::arithmetic(3, 3, {}).to_string() == ";3+3k");
}

TEST_CASE("doubling the period never changes the canonical record") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 200; ++iter) {
    Nat period = 1 + rng() % 5;
    std::set<Nat> residues;
    for (Nat r = 0; r < period; ++r) {
      if (rng() % 2) residues.insert(r);
    }
    if (residues.empty()) residues.insert(rng() % period);
    Nat threshold = 1 + rng() % 6;
    std::set<Nat> exceptions;
    for (Nat e = 1; e < threshold; ++e) {
      if (rng() % 2) exceptions.insert(e);
    }
    EPSet a = EPSet::make(threshold, period, residues, exceptions);
    std::set<Nat> doubled;
    for (Nat r : residues) {
      doubled.insert(r);
      doubled.insert(r + period);
    }
    EPSet b = EPSet::make(threshold, 2 * period, doubled, exceptions);
    CHECK(a == b);
  }
}
