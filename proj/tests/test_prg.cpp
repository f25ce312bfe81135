#include <doctest.h>

#include <cmath>
#include <map>

#include "dnfkit/exact.hpp"
#include "dnfkit/gf2.hpp"
#include "dnfkit/prg.hpp"
#include "dnfkit/random.hpp"
#include "dnfkit/sparsify.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace dnfkit;
using testing_util::dnf;

TEST_CASE("field table polynomials are irreducible of the right degree") {
  for (unsigned d = 1; d <= GF2Field::kMaxDegree; ++d) {
    const std::uint64_t p = irreducible_polynomial(d);
    CHECK(oracle::degree(p) == static_cast<int>(d));
    CHECK(oracle::irreducible(p));
  }
  CHECK_THROWS(irreducible_polynomial(0));
  CHECK_THROWS(irreducible_polynomial(33));
}

TEST_CASE("field multiplication matches the carry-less oracle") {
  CounterRng rng(61);
  for (unsigned d : {1U, 2U, 5U, 8U, 13U, 24U, 32U}) {
    const GF2Field f(d);
    for (int rep = 0; rep < 300; ++rep) {
      const std::uint64_t a = rng.bits(d), b = rng.bits(d);
      CHECK(f.mul(a, b) == oracle::field_mul(a, b, f.modulus()));
    }
    CHECK(f.pow(3, 0) == 1);
    const std::uint64_t a = rng.bits(d) | 1;
    CHECK(f.pow(a, 3) == f.mul(a, f.mul(a, a)));
  }
  // Every nonzero element of GF(2^5) has order dividing 31.
  const GF2Field g(5);
  for (std::uint64_t a = 1; a < 32; ++a) CHECK(g.pow(a, 31) == 1);
}

TEST_CASE("small-bias generator examples") {
  const SmallBiasGenerator gen(8, 5);
  for (std::uint64_t y = 0; y < 32; ++y) CHECK(gen.generate(y << 5) == 0);
  for (std::uint64_t x = 0; x < 32; ++x) CHECK(gen.generate(x) == 0);
  const SmallBiasGenerator chosen = SmallBiasGenerator::for_bias(8, 0.25);
  CHECK(chosen.field_log() == 5);
  CHECK(chosen.seed_bits() == 10);
  CHECK(chosen.epsilon_guarantee() == doctest::Approx(0.25));
  CHECK(chosen.epsilon_guarantee_exact() == Dyadic(1, 2));
  CHECK(gen.spec()["construction"].is_string());
}

TEST_CASE("small-bias output bits are inner products of powers") {
  const SmallBiasGenerator gen(6, 4);
  const GF2Field field(4);
  for (std::uint64_t seed = 0; seed < 256; ++seed) {
    const std::uint64_t x = seed & 15, y = seed >> 4;
    std::uint64_t expect = 0, power = 1;
    for (int i = 0; i < 6; ++i) {
      power = oracle::field_mul(power, x, field.modulus());
      expect |= static_cast<std::uint64_t>(std::popcount(power & y) & 1) << i;
    }
    CHECK(gen.generate(seed) == expect);
  }
  std::vector<std::uint64_t> streamed;
  gen.for_each_output([&](std::uint64_t o) { streamed.push_back(o); });
  std::vector<std::uint64_t> direct;
  for (std::uint64_t s = 0; s < 256; ++s) direct.push_back(gen.generate(s));
  std::sort(streamed.begin(), streamed.end());
  std::sort(direct.begin(), direct.end());
  CHECK(streamed == direct);
}

TEST_CASE("measure_parity_bias examples") {
  const SmallBiasGenerator gen(8, 5);
  for (int i = 0; i < 8; ++i) CHECK(measure_parity_bias(gen, std::uint64_t{1} << i).value() <= 8.0 / 32);
  const UniformGenerator uni(8);
  for (std::uint64_t s = 1; s < 256; ++s) CHECK(measure_parity_bias(uni, s).is_zero());
  CHECK_THROWS_AS(measure_parity_bias(gen, 0), std::invalid_argument);
  CHECK_THROWS_AS(measure_parity_bias(SmallBiasGenerator(8, 13), 1), SeedSpaceTooLarge);
}

TEST_CASE("Walsh transform maximum agrees with per-subset measurement") {
  const SmallBiasGenerator gen(7, 4);
  const ParityReport rep = max_parity_bias(gen);
  Dyadic best;
  std::uint64_t arg = 0;
  for (std::uint64_t s = 1; s < 128; ++s) {
    const Dyadic b = measure_parity_bias(gen, s);
    if (b > best) best = b, arg = s;
  }
  CHECK(rep.max_bias == best);
  CHECK(rep.argmax == arg);
  CHECK(best.value() <= gen.epsilon_guarantee());
}

TEST_CASE("hash family examples") {
  const KwiseHashFamily fam(2, 8, 4);
  CHECK(fam.field_log() == 3);
  CHECK(fam.family_size() == 64);
  for (std::uint64_t i = 0; i < 8; ++i) CHECK(fam.eval(0, i) == 0);
  const KwiseHashFamily one(1, 8, 4);
  for (std::uint64_t c = 0; c < one.family_size(); ++c)
    for (std::uint64_t i = 0; i < 8; ++i) CHECK(one.eval(c, i) == (c & 3));
  CHECK_THROWS_AS(KwiseHashFamily(2, 8, 3), std::invalid_argument);
  CHECK(fam.buckets(5).size() == 8);
}

TEST_CASE("hash family: q=4, k=2, t=2 is pairwise uniform") {
  const KwiseHashFamily fam(2, 4, 2);
  REQUIRE(fam.family_size() == 16);
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      std::map<std::pair<std::uint64_t, std::uint64_t>, int> hist;
      for (std::uint64_t s = 0; s < 16; ++s) ++hist[{fam.eval(s, a), fam.eval(s, b)}];
      CHECK(hist.size() == 4);
      for (const auto& [key, c] : hist) CHECK(c == 4);
    }
}

TEST_CASE("hash family: full k-wise uniformity at small scale") {
  for (std::size_t q : {4, 8, 16})
    for (std::size_t k : {2, 3})
      for (std::uint64_t t : {2, 4}) {
        const KwiseHashFamily fam(k, q, t);
        std::vector<std::uint64_t> pts(k);
        bool uniform = true;
        // Every k-tuple of distinct points in increasing order.
        std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t depth, std::uint64_t from) {
          if (depth == k) {
            std::vector<std::uint64_t> hist(std::size_t{1} << (k * std::bit_width(t - 1)), 0);
            for (std::uint64_t s = 0; s < fam.family_size(); ++s) {
              std::uint64_t key = 0;
              for (std::size_t j = 0; j < k; ++j) key = key * t + fam.eval(s, pts[j]);
              ++hist[key];
            }
            const std::uint64_t cells = static_cast<std::uint64_t>(std::pow(t, k));
            for (std::uint64_t c = 0; c < cells; ++c) uniform &= hist[c] * cells == fam.family_size();
            return;
          }
          for (std::uint64_t p = from; p < q; ++p) {
            pts[depth] = p;
            rec(depth + 1, p + 1);
          }
        };
        rec(0, 0);
        CHECK_MESSAGE(uniform, "q=" << q << " k=" << k << " t=" << t);
      }
}

TEST_CASE("fooling_error examples") {
  const SmallBiasGenerator gen(6, 4);
  const FoolingReport one = fooling_error(DnfFormula::constant(6, true), gen);
  CHECK(one.error == 0);
  for (int v = 1; v <= 6; ++v) {
    const FoolingReport lit = fooling_error(dnf(6, {{v}}), gen);
    CHECK(lit.error <= gen.epsilon_guarantee());
    CHECK(lit.bias == Dyadic(1, 1));
  }
  const FoolingReport uni = fooling_error(dnf(6, {{1, 2}, {-3, 4, 5}}), UniformGenerator(6));
  CHECK(uni.error == 0);
}

TEST_CASE("generator_expectation matches direct enumeration") {
  CounterRng rng(62);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 4 + rng.below(9);
    const DnfFormula f = random_dnf({n, 3, 1 + rng.below(8), false, false}, rng);
    const SmallBiasGenerator gen(n, 3 + static_cast<unsigned>(rng.below(4)));
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << gen.seed_bits()); ++s) hits += oracle::eval(f, gen.generate(s));
    CHECK(generator_expectation(f, gen) == Dyadic(hits, gen.seed_bits()));
  }
}

TEST_CASE("property: the power construction is n/2^l biased") {
  for (std::size_t n = 2; n <= 10; n += 2)
    for (unsigned l = 4; l <= 6; ++l) {
      const SmallBiasGenerator gen(n, l);
      CHECK(max_parity_bias(gen).max_bias <= gen.epsilon_guarantee_exact());
    }
}

TEST_CASE("property: sandwiches plus fooled approximators bound the fooling error") {
  CounterRng rng(63);
  for (int rep = 0; rep < 15; ++rep) {
    const std::size_t n = 8 + rng.below(5);
    const DnfFormula f = random_dnf({n, 2, 4 + rng.below(12), false, false}, rng);
    SparsifyOptions opts;
    opts.size_target = 2;
    const SandwichPair p = sparsify(f, 0.25, opts);
    const SandwichCheck c = sandwich_check(p.lower, f, p.upper);
    REQUIRE(c.ordered);
    const SmallBiasGenerator gen(n, 5 + static_cast<unsigned>(rng.below(3)));
    const double eps = std::max(c.lower_err.value(), c.upper_err.value());
    const double delta = std::max(fooling_error(p.lower, gen).error, fooling_error(p.upper, gen).error);
    CHECK(fooling_error(f, gen).error <= eps + delta + 1e-15);
  }
}

TEST_CASE("recipes") {
  const GeneratorRecipe r = recipe_for_size(8, 2, 4, 0.25);
  CHECK(r.k == 8);  // ceil(2 * log2 16)
  CHECK(r.log2_inv_eps == doctest::Approx(8));
  CHECK(r.field_log == 11);
  CHECK(r.seed_bits == 22);
  CHECK(r.feasible);
  const GeneratorRecipe one = recipe_for_size(8, 1, 4, 0.25);
  CHECK(one.log2_inv_eps == doctest::Approx(4));
  const GeneratorRecipe wide = recipe_for_width(20, 3, 0.1);
  CHECK_FALSE(wide.feasible);
  nlohmann::json j = r;
  CHECK(j["field_log"] == 11);
  RecipeKnobs knobs;
  knobs.c_eps = 0.5;
  CHECK(recipe_for_size(8, 2, 4, 0.25, knobs).log2_inv_eps == doctest::Approx(4));
}
