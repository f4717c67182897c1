#include "zdsq/ordinal.hpp"

#include <vector>

#include "doctest.h"
#include "zdsq/rectset.hpp"

using namespace zdsq;

namespace {

Ordinal w(Nat e, Nat c = 1) { return Ordinal::omega_pow(e, c); }
Ordinal fin(Nat n) { return Ordinal::finite(n); }

// Ordinals with at most two CNF terms, exponents <= emax, coefficients
// <= cmax. Small enough for exhaustive algebra checks.
std::vector<Ordinal> grid(Nat emax, Nat cmax) {
  std::vector<Ordinal> out;
  out.push_back(Ordinal());
  for (Nat e = 0; e <= emax; ++e) {
    for (Nat c = 1; c <= cmax; ++c) {
      out.push_back(w(e, c));
      for (Nat e2 = 0; e2 < e; ++e2) {
        for (Nat c2 = 1; c2 <= cmax; ++c2) {
          out.push_back(natural_sum(w(e, c), w(e2, c2)));
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("natural sum basic identities") {
  // (w^2+w) (+) w = w^2 + w*2
  Ordinal lhs = natural_sum(natural_sum(w(2), w(1)), w(1));
  CHECK(lhs == Ordinal::from_terms({{2, 1}, {1, 2}}));
  // a (+) 0 = a
  Ordinal a = natural_sum(w(3, 2), fin(4));
  CHECK(natural_sum(a, Ordinal()) == a);
  // w (+) 3 = w + 3 (disjoint exponents concatenate)
  CHECK(natural_sum(w(1), fin(3)) == Ordinal::from_terms({{1, 1}, {0, 3}}));
}

TEST_CASE("compare is the CNF lexicographic order") {
  CHECK(compare(w(1), fin(5)) == Cmp::GT);
  CHECK(compare(natural_sum(w(1), fin(1)), natural_sum(w(1), fin(1))) ==
        Cmp::EQ);
  CHECK(compare(w(1, 2), w(2)) == Cmp::LT);
  CHECK(compare(Ordinal(), fin(1)) == Cmp::LT);
  CHECK(compare(natural_sum(w(2), fin(1)), w(2)) == Cmp::GT);
}

TEST_CASE("natural sum is commutative and associative on the grid") {
  auto g3 = grid(3, 3);
  for (const auto& a : g3) {
    for (const auto& b : g3) {
      CHECK(natural_sum(a, b) == natural_sum(b, a));
    }
  }
  auto g2 = grid(2, 2);
  for (const auto& a : g2) {
    for (const auto& b : g2) {
      for (const auto& c : g2) {
        CHECK(natural_sum(natural_sum(a, b), c) ==
              natural_sum(a, natural_sum(b, c)));
      }
    }
  }
}

TEST_CASE("natural sum is strictly monotone in each argument") {
  auto g = grid(3, 3);
  for (const auto& a : g) {
    for (const auto& b : g) {
      if (compare(a, b) == Cmp::LT) {
        CHECK(compare(natural_sum(a, fin(7)), natural_sum(b, fin(7))) ==
              Cmp::LT);
        CHECK(compare(natural_sum(w(2), a), natural_sum(w(2), b)) == Cmp::LT);
      }
    }
  }
}

TEST_CASE("ordinal rendering round trips") {
  Ordinal o = Ordinal::from_terms({{3, 2}, {1, 1}, {0, 4}});
  CHECK(o.to_string() == "w^3*2+w*1+4");
  CHECK(Ordinal::parse("w^3*2+w*1+4") == o);
  CHECK(Ordinal::parse("0") == Ordinal());
  CHECK(Ordinal::parse("w^2") == w(2));
  CHECK_THROWS_AS(Ordinal::parse("1+w"), std::invalid_argument);
}

TEST_CASE("product law on scattered forms") {
  // (w+1)^2 is w^2+1; expected value from the derivative oracle.
  auto oracle = rank_and_mult({{1, 1}, {1, 1}});
  CHECK(oracle.first == fin(2));
  CHECK(oracle.second == 1);
  ScatteredForm p = product_form({1, 1}, {1, 1});
  CHECK(p == ScatteredForm(2, 1));

  CHECK(product_form({0, 2}, {0, 3}) == ScatteredForm(0, 6));

  auto oracle2 = rank_and_mult({{2, 2}, {1, 3}});
  CHECK(oracle2.first == fin(3));
  CHECK(oracle2.second == 6);
  CHECK(product_form({2, 2}, {1, 3}) == ScatteredForm(3, 6));
}

TEST_CASE("product law rejects the empty space") {
  CHECK_THROWS_AS(ScatteredForm(Ordinal::finite(1), 0), std::invalid_argument);
}

TEST_CASE("unit law for the product of forms") {
  for (Nat r = 0; r <= 3; ++r) {
    for (Nat m = 1; m <= 3; ++m) {
      ScatteredForm q(r, m);
      CHECK(product_form(ScatteredForm(Nat(0), 1), q) == q);
      CHECK(product_form(q, ScatteredForm(Nat(0), 1)) == q);
    }
  }
}

TEST_CASE("product law is commutative") {
  for (Nat r1 = 0; r1 <= 3; ++r1) {
    for (Nat m1 = 1; m1 <= 3; ++m1) {
      for (Nat r2 = 0; r2 <= 3; ++r2) {
        for (Nat m2 = 1; m2 <= 3; ++m2) {
          CHECK(product_form({r1, m1}, {r2, m2}) ==
                product_form({r2, m2}, {r1, m1}));
        }
      }
    }
  }
}

TEST_CASE("sum law picks the top rank and adds multiplicities there") {
  CHECK(sum_form({{2, 1}, {1, 3}, {2, 1}}) == ScatteredForm(2, 2));
  CHECK(sum_form({{0, 2}, {0, 3}}) == ScatteredForm(0, 5));
  CHECK_THROWS_AS(sum_form({}), std::invalid_argument);
}
