#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dnfkit/random.hpp"
#include "dnfkit/sunflower.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace dnfkit;
using testing_util::dnf;

namespace {

// Pr[every petal T \ core is false], by enumeration over all 2^n inputs.
double petal_zero_oracle(const DnfFormula& f, const std::vector<std::size_t>& idx, const Term& core) {
  oracle::Lits petals;
  for (std::size_t i : idx) petals.push_back(f.term(i).minus(core).dimacs());
  std::uint64_t zero = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << f.num_vars()); ++x) zero += !oracle::eval(petals, false, x);
  return std::ldexp(static_cast<double>(zero), -static_cast<int>(f.num_vars()));
}

DnfFormula random_unate(CounterRng& rng, std::size_t n, std::size_t w, std::size_t m) {
  DnfFormula f = random_dnf({n, w, m, false, true}, rng);
  VarSet flip(n);
  for (std::size_t i = 0; i < n; ++i) flip.set(i, rng.coin());
  std::vector<Term> ts;
  for (const Term& t : f.terms()) ts.emplace_back(t.positive() - flip, t.positive() & flip);
  return DnfFormula(n, ts);
}

}  // namespace

TEST_CASE("gamma_bound examples") {
  CHECK(gamma_bound(10, 1) == doctest::Approx(2.0));
  CHECK(gamma_bound(1, 1) == doctest::Approx(0.2));
  CHECK(gamma_bound(8, 2) == doctest::Approx(0.4));
  CHECK_THROWS_AS(gamma_bound(0, 1), std::invalid_argument);
}

TEST_CASE("find_sunflower examples") {
  auto s = find_sunflower(dnf(4, {{1, 2}, {1, 3}, {1, 4}}), 3);
  REQUIRE(s);
  CHECK(s->core.count() == 1);
  CHECK(s->core.test(0));

  s = find_sunflower(dnf(6, {{1, 2}, {3, 4}, {5, 6}}), 3);
  REQUIRE(s);
  CHECK(s->core.none());

  CHECK_FALSE(find_sunflower(dnf(3, {{1, 2}, {2, 3}, {1, 3}}), 3));
  CHECK_THROWS_AS(find_sunflower(dnf(3, {{1, 2}, {2, 3}}), 2), std::invalid_argument);
  CHECK_THROWS_AS(find_sunflower(dnf(3, {{1, 2}, {-1, 3}}), 3), std::invalid_argument);
}

TEST_CASE("find_quasi_sunflower examples") {
  auto q = find_quasi_sunflower(dnf(4, {{1, 2}, {1, 3}, {1, 4}}), 0.5);
  REQUIRE(q);
  CHECK(q->core == Term::from_dimacs(4, std::vector<int>{1}));
  CHECK(q->petal_zero_prob == Dyadic(1, 3));
  CHECK(q->gamma == doctest::Approx(3 * std::log(2.0)));
  CHECK(q->meets_goal);

  q = find_quasi_sunflower(dnf(2, {{1}, {2}}), 0.1);
  REQUIRE(q);
  CHECK(q->core.empty());
  CHECK(q->gamma == doctest::Approx(2 * std::log(2.0)));

  q = find_quasi_sunflower(dnf(4, {{1, 2}, {3, 4}}), 10);
  REQUIRE(q);
  CHECK_FALSE(q->meets_goal);
  CHECK(q->k() == 2);
  CHECK(q->petal_zero_prob == Dyadic(9, 4));

  CHECK_FALSE(find_quasi_sunflower(dnf(2, {{1, 2}}), 0));
}

TEST_CASE("width-1 unate formulas give gamma m ln 2 on the empty core") {
  for (int m = 2; m <= 12; ++m) {
    std::vector<Term> ts;
    for (int i = 1; i <= m; ++i) ts.push_back(Term::from_dimacs(m, std::vector<int>{i % 2 ? i : -i}));
    const auto q = best_quasi_sunflower(DnfFormula(m, ts));
    REQUIRE(q);
    CHECK(q->core.empty());
    CHECK(q->k() == static_cast<std::size_t>(m));
    CHECK(q->gamma == doctest::Approx(m * std::log(2.0)));
  }
}

TEST_CASE("candidate cores include the empty core and pairwise intersections") {
  const DnfFormula f = dnf(5, {{1, 2, 3}, {1, 2, 4}, {1, 5}});
  const auto cores = candidate_cores(f);
  CHECK(cores.front().empty());
  auto has = [&](std::vector<int> lits) {
    const Term t = Term::from_dimacs(5, lits);
    return std::find(cores.begin(), cores.end(), t) != cores.end();
  };
  CHECK(has({1, 2}));
  CHECK(has({1}));
  for (std::size_t i = 1; i < cores.size(); ++i) CHECK(cores[i - 1].width() <= cores[i].width());
}

TEST_CASE("property: returned quasi-sunflowers verify against enumeration") {
  CounterRng rng(41);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 4 + rng.below(9);
    const DnfFormula f = random_unate(rng, n, std::min<std::size_t>(3, n), 2 + rng.below(12));
    const auto q = best_quasi_sunflower(f);
    if (f.size() < 2) {
      CHECK_FALSE(q);
      continue;
    }
    REQUIRE(q);
    CHECK(q->k() >= 2);
    CHECK(verify_quasi_sunflower(f, *q));
    Term core = f.term(q->term_indices[0]);
    for (std::size_t i : q->term_indices) core = core.intersect(f.term(i));
    CHECK(core == q->core);
    CHECK(q->petal_zero_prob.value() == petal_zero_oracle(f, q->term_indices, q->core));
    CHECK(q->gamma == doctest::Approx(-std::log(q->petal_zero_prob.value())));
    // Set-system reading: the petals are hit exactly when some petal is satisfied.
    CHECK(set_system_hit_probability(f, q->term_indices, q->core) == q->petal_zero_prob.complement());
  }
}

TEST_CASE("property: candidate-core search matches brute force over subfamilies") {
  CounterRng rng(42);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 4 + rng.below(7);
    const DnfFormula f = random_unate(rng, n, 3, 2 + rng.below(9));
    if (f.size() < 2) continue;
    const std::size_t m = f.size();
    double best = 2;
    for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
      if (std::popcount(mask) < 2) continue;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < m; ++i)
        if ((mask >> i) & 1U) idx.push_back(i);
      Term core = f.term(idx[0]);
      for (std::size_t i : idx) core = core.intersect(f.term(i));
      best = std::min(best, petal_zero_oracle(f, idx, core));
    }
    const auto q = best_quasi_sunflower(f);
    REQUIRE(q);
    CHECK(q->petal_zero_prob.value() == best);
  }
}

TEST_CASE("property: sunflowers exist above the Erdos-Rado bound") {
  CounterRng rng(43);
  for (std::size_t w = 1; w <= 3; ++w) {
    const double bound = std::tgamma(static_cast<double>(w) + 1) * std::pow(2.0, static_cast<double>(w));
    for (int rep = 0; rep < 15; ++rep) {
      const std::size_t n = 8 + rng.below(6);
      DnfFormula f = random_dnf({n, w, static_cast<std::size_t>(bound) + 1 + rng.below(20), true, true}, rng);
      if (static_cast<double>(f.size()) <= bound) continue;
      const auto s = find_sunflower(f, 3);
      REQUIRE(s);
      CHECK(s->term_indices.size() >= 3);
      CHECK(verify_sunflower(f, *s));
      for (std::size_t a = 0; a < s->term_indices.size(); ++a)
        for (std::size_t b = a + 1; b < s->term_indices.size(); ++b)
          CHECK((f.term(s->term_indices[a]).variables() & f.term(s->term_indices[b]).variables()) == s->core);
    }
  }
}

TEST_CASE("quasi-sunflower search enforces the support cap") {
  std::vector<Term> ts;
  for (int i = 1; i <= 30; ++i) ts.push_back(Term::from_dimacs(30, std::vector<int>{i}));
  CHECK_THROWS_AS(best_quasi_sunflower(DnfFormula(30, ts), 20), SupportTooLarge);
}
