#include <doctest.h>

#include <array>
#include <cmath>

#include "dnfkit/bias.hpp"
#include "dnfkit/dnf_io.hpp"
#include "dnfkit/exact.hpp"
#include "dnfkit/formula.hpp"
#include "dnfkit/random.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace dnfkit;
using testing_util::dnf;

TEST_CASE("canonicalize drops contradictory and subsumed terms") {
  CanonicalizeReport rep;
  DnfFormula f = canonicalize(dnf(2, {{1, -1}, {2}}), &rep);
  CHECK(f == dnf(2, {{2}}));
  CHECK(rep.contradictory == 1);

  f = canonicalize(dnf(2, {{1}, {1, 2}}), &rep);
  CHECK(f == dnf(2, {{1}}));
  CHECK(rep.subsumed == 1);

  const DnfFormula minimal = dnf(3, {{1, 2}, {1, 3}});
  CHECK(canonicalize(minimal) == minimal);
  CHECK(minimal.is_canonical());
}

TEST_CASE("an empty term makes the formula constant true") {
  CanonicalizeReport rep;
  const DnfFormula f = canonicalize(DnfFormula(3, {Term(3), Term::from_dimacs(3, std::vector<int>{1})}), &rep);
  CHECK(f.is_constant_true());
  CHECK(f.size() == 0);
  CHECK(rep.became_constant_true);
}

TEST_CASE("duplicates and order") {
  const DnfFormula f = canonicalize(dnf(4, {{3, 4}, {1}, {3, 4}, {1, 2}, {-2}}));
  CHECK(f == dnf(4, {{3, 4}, {1}, {-2}}));
}

TEST_CASE("evaluate") {
  const DnfFormula f = dnf(2, {{1}, {2}});
  CHECK_FALSE(f.evaluate(std::array<bool, 2>{false, false}));
  CHECK(f.evaluate(std::array<bool, 2>{true, false}));
  const DnfFormula g = dnf(3, {{1, 2}, {-1, 3}});
  CHECK(g.evaluate(std::array<bool, 3>{false, true, true}));
  CHECK_THROWS_AS(g.evaluate(std::array<bool, 2>{true, true}), std::invalid_argument);
  CHECK_THROWS_AS(g.evaluate(VarSet(4)), std::invalid_argument);
}

TEST_CASE("exact_bias examples") {
  CHECK(exact_bias(dnf(1, {{1}})) == Dyadic(1, 1));
  CHECK(exact_bias(dnf(2, {{1}, {2}})) == Dyadic(3, 2));
  CHECK(exact_bias(dnf(3, {{1, 2}, {-1, 3}})) == Dyadic(1, 1));
  CHECK(exact_bias(DnfFormula::constant(5, true)) == Dyadic::one());
  CHECK(exact_bias(DnfFormula::constant(5, false)) == Dyadic::zero());
}

TEST_CASE("exact_bias ignores variables outside the support and enforces its cap") {
  std::vector<Term> ts;
  ts.push_back(Term::from_dimacs(100, std::vector<int>{1, 100}));
  ts.push_back(Term::from_dimacs(100, std::vector<int>{-50}));
  CHECK(exact_bias(DnfFormula(100, ts)) == Dyadic(5, 3));

  std::vector<Term> wide;
  for (int i = 1; i <= 30; i += 2) wide.push_back(Term::from_dimacs(40, std::vector<int>{i, i + 1}));
  const DnfFormula big(40, wide);
  CHECK_THROWS_AS(exact_bias(big, 20), SupportTooLarge);
  CHECK_NOTHROW(exact_bias(big, 30));
}

TEST_CASE("exact_bias and truth tables agree with enumeration") {
  CounterRng rng(11);
  for (int rep = 0; rep < 150; ++rep) {
    RandomDnfSpec spec;
    spec.n = 2 + rng.below(15);
    spec.width = 1 + rng.below(std::min<std::uint64_t>(spec.n, 5));
    spec.terms = 1 + rng.below(30);
    const DnfFormula f = random_dnf(spec, rng);
    const std::uint64_t c = oracle::count(f);
    CHECK(exact_bias(f) == Dyadic(c, static_cast<unsigned>(f.num_vars())));
    CHECK(TruthTable(f).count() == c);
  }
}

TEST_CASE("restrict examples") {
  const DnfFormula f = dnf(2, {{1, 2}});
  CHECK(restrict(f, Restriction::parse("1*")) == dnf(1, {{1}}));
  CHECK(restrict(f, Restriction::parse("0*")).is_constant_false());
  const DnfFormula g = dnf(2, {{1}, {2}});
  CHECK(restrict(g, Restriction(2)) == g);
}

TEST_CASE("dt_depth examples and oracle") {
  CHECK(dt_depth(DnfFormula::constant(3, false)) == 0);
  CHECK(dt_depth(dnf(1, {{1}})) == 1);
  CHECK(dt_depth(dnf(2, {{1, -2}, {-1, 2}})) == 2);
  CHECK(dt_depth(dnf(3, {{1, 2, 3}})) == 3);

  CounterRng rng(12);
  for (int rep = 0; rep < 60; ++rep) {
    RandomDnfSpec spec;
    spec.n = 2 + rng.below(6);
    spec.width = 1 + rng.below(std::min<std::uint64_t>(spec.n, 3));
    spec.terms = 1 + rng.below(8);
    const DnfFormula f = random_dnf(spec, rng);
    CHECK(dt_depth(f) == oracle::dt_depth(f));
  }
}

TEST_CASE("dt_depth cap") {
  std::vector<Term> ts;
  for (int i = 1; i <= 17; ++i) ts.push_back(Term::from_dimacs(17, std::vector<int>{i}));
  CHECK_THROWS_AS(dt_depth(DnfFormula(17, ts)), SupportTooLarge);
}

TEST_CASE("sandwich_check examples") {
  const DnfFormula f = dnf(3, {{1, 2}, {-1, 3}});
  const SandwichCheck trivial = sandwich_check(DnfFormula::constant(3, false), f, DnfFormula::constant(3, true));
  CHECK(trivial.ordered);
  CHECK(trivial.lower_err == exact_bias(f));
  CHECK(trivial.upper_err == exact_bias(f).complement());

  const SandwichCheck same = sandwich_check(f, f, f);
  CHECK(same.ordered);
  CHECK(same.lower_err.is_zero());
  CHECK(same.upper_err.is_zero());

  // Dropping (-1 & 3): error is Pr[-1 & 3 & not(1 & 2)] = 1/4.
  const SandwichCheck drop = sandwich_check(dnf(3, {{1, 2}}), f, f);
  CHECK(drop.ordered);
  CHECK(drop.lower_err == Dyadic(1, 2));

  const SandwichCheck bad = sandwich_check(f, dnf(3, {{1, 2}}), f);
  CHECK_FALSE(bad.ordered);
  REQUIRE(bad.witness);
  CHECK(bad.witness_violates_lower);
  CHECK(oracle::eval(f, *bad.witness));
}

TEST_CASE("property: canonicalize is idempotent and preserves the truth table") {
  CounterRng rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.below(15);
    std::vector<Term> raw;
    const std::size_t m = 1 + rng.below(25);
    for (std::size_t i = 0; i < m; ++i) {
      Term t(n);
      const std::size_t w = 1 + rng.below(4);
      for (std::size_t j = 0; j < w; ++j) t.add({static_cast<std::uint32_t>(rng.below(n)), rng.coin()});
      raw.push_back(t);
    }
    const DnfFormula f(n, raw);
    const DnfFormula c = canonicalize(f);
    CHECK(c.is_canonical());
    CHECK(canonicalize(c) == c);
    CHECK(c.size() <= f.size());
    CHECK(oracle::table(c) == oracle::table(f));
  }
}

TEST_CASE("property: single canonical terms have bias 2^-width <= 1/2") {
  CounterRng rng(22);
  for (int rep = 0; rep < 100; ++rep) {
    RandomDnfSpec spec{20, 1 + rng.below(8), 1, false, false};
    const DnfFormula f = random_dnf(spec, rng);
    const Term& t = f.term(0);
    CHECK(exact_bias(f) == Dyadic::pow2(static_cast<unsigned>(t.width())));
    CHECK(exact_bias(f) <= Dyadic(1, 1));
  }
}

TEST_CASE("property: restriction commutes with evaluation") {
  CounterRng rng(23);
  for (int rep = 0; rep < 60; ++rep) {
    RandomDnfSpec spec{2 + rng.below(11), 3, 1 + rng.below(15), false, false};
    spec.width = std::min(spec.width, spec.n);
    const DnfFormula f = random_dnf(spec, rng);
    std::vector<Assign> vals(spec.n);
    for (auto& v : vals) v = static_cast<Assign>(rng.below(3));
    const Restriction rho{std::span<const Assign>(vals)};
    const DnfFormula fr = restrict(f, rho);
    CHECK(fr.num_vars() == rho.num_live());
    CHECK(fr.is_canonical());
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << rho.num_live()); ++y) {
      std::uint64_t x = 0;
      std::size_t j = 0;
      for (std::size_t i = 0; i < spec.n; ++i) {
        const Assign a = rho[i];
        const bool bit = a == Assign::Star ? ((y >> j++) & 1U) : a == Assign::One;
        x |= static_cast<std::uint64_t>(bit) << i;
      }
      CHECK(oracle::eval(fr, y) == oracle::eval(f, x));
    }
  }
}

TEST_CASE("property: averaging restricted biases over all fixings recovers the bias") {
  CounterRng rng(24);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 3 + rng.below(8);
    RandomDnfSpec spec{n, std::min<std::size_t>(3, n), 1 + rng.below(12), false, false};
    const DnfFormula f = random_dnf(spec, rng);
    std::vector<std::size_t> fixed;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.coin()) fixed.push_back(i);
    double sum = 0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << fixed.size()); ++v) {
      std::vector<Assign> vals(n, Assign::Star);
      for (std::size_t j = 0; j < fixed.size(); ++j) vals[fixed[j]] = ((v >> j) & 1U) ? Assign::One : Assign::Zero;
      sum += exact_bias(restrict(f, Restriction(std::span<const Assign>(vals)))).value();
    }
    CHECK(std::ldexp(sum, -static_cast<int>(fixed.size())) == doctest::Approx(oracle::bias(f)).epsilon(1e-12));
  }
}

TEST_CASE("property: Kleitman inequality for unate formulas") {
  CounterRng rng(25);
  for (int rep = 0; rep < 80; ++rep) {
    const std::size_t n = 3 + rng.below(10);
    RandomDnfSpec spec{n, std::min<std::size_t>(3, n), 2 + rng.below(10), false, true};
    DnfFormula f = random_dnf(spec, rng);
    if (f.size() < 2) continue;
    // Flip a random subset of variables to get a general unate formula.
    VarSet flip(n);
    for (std::size_t i = 0; i < n; ++i) flip.set(i, rng.coin());
    std::vector<Term> ts;
    for (const Term& t : f.terms()) ts.emplace_back(t.positive() - flip, t.positive() & flip);
    f = DnfFormula(n, ts);
    REQUIRE(f.is_unate());
    std::uint64_t lhs = 0, rhs = 0;
    const auto first = oracle::Lits{f.term(0).dimacs()};
    oracle::Lits rest;
    for (std::size_t i = 1; i < f.size(); ++i) rest.push_back(f.term(i).dimacs());
    const auto all = oracle::lits_of(f);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      lhs += oracle::eval(first, false, x) && !oracle::eval(rest, false, x);
      rhs += !oracle::eval(all, false, x);
    }
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("Dyadic arithmetic") {
  CHECK(Dyadic(2, 2) == Dyadic(1, 1));
  CHECK(Dyadic(1, 1) + Dyadic(1, 2) == Dyadic(3, 2));
  CHECK(Dyadic(3, 2) - Dyadic(1, 1) == Dyadic(1, 2));
  CHECK_THROWS(Dyadic(1, 2) - Dyadic(1, 1));
  CHECK(Dyadic(1, 3).complement() == Dyadic(7, 3));
  CHECK(Dyadic(1, 62) < Dyadic(1, 61));
  CHECK(Dyadic(3, 2).halved() == Dyadic(3, 3));
  CHECK(abs_difference(Dyadic(1, 2), Dyadic(3, 2)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Dyadic(1, 63), std::overflow_error);
}

TEST_CASE("parse_dnf examples") {
  ParsedDnf p = parse_dnf("p dnf 2 1\n1 2 0\n");
  CHECK(p.formula == dnf(2, {{1, 2}}));
  CHECK(p.warnings.empty());

  p = parse_dnf("p dnf 2 1\n1 -1 0\n");
  CHECK(p.formula.is_constant_false());
  CHECK(p.warnings.size() == 1);

  CHECK_THROWS_AS(parse_dnf("p dnf 2 3\n1 0\n"), ParseError);
}

TEST_CASE("parse_dnf errors and layout") {
  CHECK_THROWS_AS(parse_dnf("p cnf 2 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dnf("p dnf 2\n"), ParseError);
  CHECK_THROWS_AS(parse_dnf("1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dnf("p dnf 2 1\np dnf 2 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dnf("p dnf 2 1\n3 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dnf("p dnf 2 1\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_dnf("p dnf 2 1\n1 x 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dnf("p dnf 2 1\n1 0 2 0\n"), ParseError);
  try {
    parse_dnf("c hi\np dnf 2 1\n\n-3 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  // Terms may span lines.
  const ParsedDnf p = parse_dnf("c a\np dnf 3 2\n1\nc mid\n-2 0\n3 0\n");
  CHECK(p.formula == dnf(3, {{1, -2}, {3}}));
  // A bare 0 is the always-true term.
  CHECK(parse_dnf("p dnf 3 2\n0\n1 2 0\n").formula.is_constant_true());
}

TEST_CASE("DNF text round trip") {
  CounterRng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    RandomDnfSpec spec{1 + rng.below(70), 1, 1 + rng.below(20), false, false};
    spec.width = 1 + rng.below(std::min<std::uint64_t>(spec.n, 6));
    const DnfFormula f = random_dnf(spec, rng);
    const ParsedDnf back = parse_dnf(to_dnf_string(f, {"round trip"}));
    CHECK(back.formula == f);
    CHECK(back.raw == f);
  }
  const DnfFormula one = DnfFormula::constant(4, true);
  CHECK(parse_dnf(to_dnf_string(one)).formula == one);
  const DnfFormula zero = DnfFormula::constant(4, false);
  CHECK(parse_dnf(to_dnf_string(zero)).formula == zero);
}

TEST_CASE("VarSet beyond one word") {
  VarSet a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(129);
  CHECK(a.count() == 3);
  CHECK(b.is_subset_of(a));
  CHECK((a - b).count() == 2);
  std::vector<std::size_t> seen;
  a.for_each([&](std::size_t i) { seen.push_back(i); });
  CHECK(seen == std::vector<std::size_t>{0, 64, 129});
  CHECK(VarSet::full(130).count() == 130);
}

TEST_CASE("Restriction parse and accessors") {
  const Restriction r = Restriction::parse("01*1*");
  CHECK(r.num_live() == 2);
  CHECK(r.live_indices() == std::vector<std::uint32_t>{2, 4});
  CHECK(r.to_string() == "01*1*");
  CHECK(r.fixed_zeros().count() == 1);
  CHECK_THROWS(Restriction::parse("01x"));
}
