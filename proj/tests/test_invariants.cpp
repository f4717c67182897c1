#include "zdsq/invariants.hpp"

#include <random>
#include <set>

#include "doctest.h"
#include "zdsq/rectset.hpp"

using namespace zdsq;

namespace {

NatSet fset(std::set<Nat> s) { return NatSet::finite(std::move(s)); }

Verdict decide(const std::string& a, const std::string& b) {
  return decide_homeo(parse_expr(a), parse_expr(b));
}

}  // namespace

TEST_CASE("finite-or-cofinite sumsets") {
  CHECK(sumset(fset({0, 1}), fset({0, 1})) == fset({0, 1, 2}));
  CHECK(sumset(fset({}), fset({0, 1})) == fset({}));
  CHECK(sumset(fset({0}), NatSet::all()) == NatSet::all());
  CHECK(sumset(fset({2}), NatSet::all()) == NatSet::cofinite({0, 1}));
  CHECK(sumset(NatSet::all(), NatSet::all()) == NatSet::all());
  CHECK(sumset(NatSet::cofinite({0}), fset({0})) == NatSet::cofinite({0}));
}

TEST_CASE("invariants of single atoms") {
  Invariants z3 = compute_invariants(parse_expr("Z(3)"));
  CHECK(z3.spectrum == fset({0, 1, 2}));
  CHECK(z3.cardinality.kind == Cardinality::Kind::Continuum);
  CHECK(z3.open_z.kind == OpenZ::Kind::Finite);
  CHECK(z3.open_z.finite == std::set<Nat>{3});
  CHECK_FALSE(z3.countable_form.has_value());

  Invariants o2 = compute_invariants(parse_expr("O(2)"));
  CHECK(o2.spectrum == fset({0, 1, 2}));
  CHECK(o2.cardinality.kind == Cardinality::Kind::CountablyInfinite);
  CHECK(o2.countable_form == ScatteredForm(2, 1));
  // Independent check of the spectrum: point ranks over [0, w^2].
  std::set<Nat> ranks;
  std::vector<Ordinal> samples = {
      Ordinal::finite(0), Ordinal::finite(7), Ordinal::omega_pow(1),
      natural_sum(Ordinal::omega_pow(1), Ordinal::finite(3)),
      Ordinal::omega_pow(1, 5), Ordinal::omega_pow(2)};
  for (const auto& x : samples) {
    ranks.insert(point_rank({x}, {{2, 1}}).finite_value());
  }
  CHECK(ranks == std::set<Nat>{0, 1, 2});

  Invariants f4 = compute_invariants(parse_expr("Fin(4)"));
  CHECK(f4.spectrum == fset({0}));
  CHECK(f4.cardinality == Cardinality{Cardinality::Kind::Finite, 4});

  Invariants cantor = compute_invariants(parse_expr("Cantor"));
  CHECK(cantor.spectrum == fset({}));
  CHECK(cantor.cardinality.kind == Cardinality::Kind::Continuum);
  CHECK(cantor.open_z.kind == OpenZ::Kind::Finite);
  CHECK(cantor.open_z.finite.empty());

  Invariants xm = compute_invariants(parse_expr("X{2+2k}"));
  CHECK(xm.spectrum == NatSet::all());
  CHECK(xm.open_z.kind == OpenZ::Kind::Periodic);
  CHECK(*xm.open_z.ep == EPSet::arithmetic(2, 2, {}));
}

TEST_CASE("spectra multiply as sumsets") {
  CHECK(compute_invariants(parse_expr("Z(2)*Z(2)")).spectrum ==
        fset({0, 1, 2}));
  CHECK(compute_invariants(parse_expr("Z(2)*Z(3)")).spectrum ==
        fset({0, 1, 2, 3}));
  CHECK(compute_invariants(parse_expr("O(1)*Z(2)")).spectrum ==
        fset({0, 1, 2}));
  CHECK(compute_invariants(parse_expr("X{2+2k}*Z(2)")).spectrum ==
        NatSet::all());
}

TEST_CASE("openZ is unknown with two or more uncountable factors") {
  CHECK(compute_invariants(parse_expr("Z(2)*Z(3)")).open_z.kind ==
        OpenZ::Kind::Unknown);
  CHECK(compute_invariants(parse_expr("X{2+2k}*Z(2)")).open_z.kind ==
        OpenZ::Kind::Unknown);
  CHECK(compute_invariants(parse_expr("O(2)*Z(3)")).open_z.finite ==
        std::set<Nat>{3});
  CHECK(compute_invariants(parse_expr("O(2)*X{2+2k}")).open_z.kind ==
        OpenZ::Kind::Periodic);
}

TEST_CASE("decision procedure: the five contract examples") {
  Verdict v1 = decide("X{2+2k}*X{2+2k}", "X{2+2k}");
  CHECK(v1.kind == Verdict::Kind::Homeo);

  Verdict v2 = decide("X{2+2k}", "X{1+2k}");
  REQUIRE(v2.kind == Verdict::Kind::NotHomeo);
  REQUIRE(v2.certificate.has_value());
  CHECK(v2.certificate->invariant == "open-z");
  CHECK(v2.certificate->witness == 2);

  Verdict v3 = decide("O(1)*O(1)", "O(2)");
  CHECK(v3.kind == Verdict::Kind::Homeo);

  Verdict v4 = decide("Z(2)*Z(2)", "Z(2)");
  REQUIRE(v4.kind == Verdict::Kind::NotHomeo);
  CHECK(v4.certificate->invariant == "rank-spectrum");
  CHECK(v4.certificate->witness == 2);

  Verdict v5 = decide("Z(2)*Z(3)", "Z(4)");
  CHECK(v5.kind == Verdict::Kind::Unknown);
}

TEST_CASE("certificates replay against recomputed invariants") {
  auto replay = [](const std::string& a, const std::string& b) {
    Verdict v = decide(a, b);
    REQUIRE(v.kind == Verdict::Kind::NotHomeo);
    Invariants ia = compute_invariants(parse_expr(a));
    Invariants ib = compute_invariants(parse_expr(b));
    const Certificate& c = *v.certificate;
    if (c.invariant == "cardinality") {
      CHECK(ia.cardinality.to_string() == c.lhs);
      CHECK(ib.cardinality.to_string() == c.rhs);
      CHECK_FALSE(ia.cardinality == ib.cardinality);
    } else if (c.invariant == "rank-spectrum") {
      CHECK(ia.spectrum.contains(*c.witness) !=
            ib.spectrum.contains(*c.witness));
    } else if (c.invariant == "open-z") {
      auto member = [](const OpenZ& s, Nat n) {
        return s.kind == OpenZ::Kind::Finite ? s.finite.count(n) > 0
                                             : s.ep->contains(n);
      };
      CHECK(member(ia.open_z, *c.witness) != member(ib.open_z, *c.witness));
    }
  };
  replay("Z(2)*Z(2)", "Z(2)");
  replay("X{2+2k}", "X{1+2k}");
  replay("X{2+2k}", "X{3+3k}");
  replay("Z(2)", "Z(3)");
  replay("O(2)", "Z(2)");
}

TEST_CASE("decision is reflexive and symmetric in verdict kind") {
  std::vector<std::string> exprs = {"Fin(3)", "O(2)",          "Z(2)",
                                    "P",      "X{1;2+2k}",     "Cantor",
                                    "Z(2)*Z(3)", "O(1)*X{2+2k}"};
  for (const auto& a : exprs) {
    CHECK(decide(a, a).kind == Verdict::Kind::Homeo);
    for (const auto& b : exprs) {
      CHECK(decide(a, b).kind == decide(b, a).kind);
    }
  }
}

TEST_CASE("countable expressions decide exactly by the oracle") {
  std::vector<ScatteredForm> forms;
  for (Nat r = 0; r <= 3; ++r) {
    for (Nat m = 1; m <= 3; ++m) forms.push_back({r, m});
  }
  auto to_expr = [](const std::vector<ScatteredForm>& fs) {
    std::string s;
    for (size_t i = 0; i < fs.size(); ++i) {
      if (i) s += "*";
      if (fs[i].rank.is_zero()) {
        s += "Fin(" + std::to_string(fs[i].mult) + ")";
      } else {
        s += "Fin(" + std::to_string(fs[i].mult) + ")*O(" +
             std::to_string(fs[i].finite_rank()) + ")";
      }
    }
    return s;
  };
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 400; ++iter) {
    std::vector<ScatteredForm> fa, fb;
    size_t na = 1 + rng() % 3, nb = 1 + rng() % 3;
    for (size_t i = 0; i < na; ++i) fa.push_back(forms[rng() % forms.size()]);
    for (size_t i = 0; i < nb; ++i) fb.push_back(forms[rng() % forms.size()]);
    auto ra = rank_and_mult(fa);
    auto rb = rank_and_mult(fb);
    Verdict v = decide(to_expr(fa), to_expr(fb));
    if (ra == rb) {
      CHECK(v.kind == Verdict::Kind::Homeo);
    } else {
      CHECK(v.kind == Verdict::Kind::NotHomeo);
    }
  }
}

TEST_CASE("family generation emits distinct sets and valid certificates") {
  CHECK_THROWS_AS(family_generate(1), std::invalid_argument);

  Family f2 = family_generate(2);
  REQUIRE(f2.members.size() == 2);
  CHECK(f2.members[0] == EPSet::arithmetic(2, 2, {1}));
  CHECK(f2.members[1] == EPSet::arithmetic(2, 2, {3}));
  REQUIRE(f2.certificates.size() == 1);
  CHECK(f2.certificates[0].witness == 1);

  Family f8 = family_generate(8);
  CHECK(f8.certificates.size() == 28);
  for (const auto& c : f8.certificates) {
    const EPSet& mi = f8.members[c.i];
    const EPSet& mj = f8.members[c.j];
    CHECK(mi.contains(c.witness) != mj.contains(c.witness));
    SpaceExpr ei, ej;
    ei.atoms.push_back({Atom::Kind::X, 0, mi, 0});
    ej.atoms.push_back({Atom::Kind::X, 0, mj, 0});
    Verdict v = decide_homeo(ei, ej);
    CHECK(v.kind == Verdict::Kind::NotHomeo);
    CHECK(v.certificate->invariant == "open-z");
  }
}

TEST_CASE("sumset membership agrees with direct enumeration") {
  std::mt19937_64 rng(2718);
  auto random_set = [&]() {
    std::set<Nat> data;
    size_t n = rng() % 4;
    for (size_t i = 0; i < n; ++i) data.insert(rng() % 8);
    bool cof = rng() % 2 == 0;
    if (!cof && data.empty()) data.insert(rng() % 8);
    return cof ? NatSet::cofinite(std::move(data))
               : NatSet::finite(std::move(data));
  };
  for (int iter = 0; iter < 200; ++iter) {
    NatSet a = random_set();
    NatSet b = random_set();
    NatSet s = sumset(a, b);
    for (Nat n = 0; n <= 40; ++n) {
      bool direct = false;
      for (Nat x = 0; x <= n && !direct; ++x) {
        direct = a.contains(x) && b.contains(n - x);
      }
      CHECK(s.contains(n) == direct);
    }
  }
}

TEST_CASE("equal index sets in different clothes give equal forms") {
  // The evens written three ways.
  Verdict v1 = decide(std::string("X{;2+2k}"), std::string("X{2,4;6+2k}"));
  CHECK(v1.kind == Verdict::Kind::Homeo);
  Verdict v2 = decide(std::string("X{2+2k}"), std::string("X{;2+2k}"));
  CHECK(v2.kind == Verdict::Kind::Homeo);
}

TEST_CASE("random decisions are sound: every certificate replays") {
  std::mt19937_64 rng(5150);
  std::vector<std::string> pool = {
      "Fin(3)",  "O(1)",      "O(2)",        "Z(2)",   "Z(3)",
      "P",       "X{2+2k}",   "X{1;2+2k}",   "Cantor", "Fin(2)*O(1)"};
  auto member_openz = [](const OpenZ& s, Nat n) {
    return s.kind == OpenZ::Kind::Finite ? s.finite.count(n) > 0
                                         : s.ep->contains(n);
  };
  for (int iter = 0; iter < 300; ++iter) {
    std::string ea, eb;
    size_t na = 1 + rng() % 3, nbt = 1 + rng() % 3;
    for (size_t i = 0; i < na; ++i) {
      ea += (i ? "*" : "") + pool[rng() % pool.size()];
    }
    for (size_t i = 0; i < nbt; ++i) {
      eb += (i ? "*" : "") + pool[rng() % pool.size()];
    }
    Verdict v = decide(ea, eb);
    if (v.kind == Verdict::Kind::Homeo) {
      CHECK(normalize(parse_expr(ea)).form == normalize(parse_expr(eb)).form);
    } else if (v.kind == Verdict::Kind::NotHomeo) {
      Invariants ia = compute_invariants(parse_expr(ea));
      Invariants ib = compute_invariants(parse_expr(eb));
      const Certificate& c = *v.certificate;
      if (c.invariant == "cardinality") {
        CHECK_FALSE(ia.cardinality == ib.cardinality);
      } else if (c.invariant == "countable-form") {
        CHECK_FALSE(*ia.countable_form == *ib.countable_form);
      } else if (c.invariant == "rank-spectrum") {
        REQUIRE(c.witness.has_value());
        CHECK(ia.spectrum.contains(*c.witness) !=
              ib.spectrum.contains(*c.witness));
      } else if (c.invariant == "open-z") {
        REQUIRE(c.witness.has_value());
        CHECK(member_openz(ia.open_z, *c.witness) !=
              member_openz(ib.open_z, *c.witness));
      } else {
        CHECK(false);  // unnamed invariant
      }
    }
  }
}

TEST_CASE("a countable compactum matches its square only when it is a point") {
  for (Nat r = 0; r <= 3; ++r) {
    for (Nat m = 1; m <= 3; ++m) {
      std::string base = "Fin(" + std::to_string(m) + ")" +
                         (r > 0 ? "*O(" + std::to_string(r) + ")" : "");
      Verdict v = decide(base + "*" + base, base);
      if (r == 0 && m == 1) {
        CHECK(v.kind == Verdict::Kind::Homeo);
      } else {
        CHECK(v.kind == Verdict::Kind::NotHomeo);
      }
    }
  }
}
