#include "dnfkit/prg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "dnfkit/exact.hpp"
#include "dnfkit/sparsify.hpp"

namespace dnfkit {

SeedSpaceTooLarge::SeedSpaceTooLarge(unsigned seed_bits, unsigned cap)
    : std::runtime_error("seed space of 2^" + std::to_string(seed_bits) + " exceeds enumeration cap 2^" +
                         std::to_string(cap)) {}

void BitGenerator::for_each_output(const std::function<void(std::uint64_t)>& fn) const {
  const std::uint64_t total = std::uint64_t{1} << seed_bits();
  for (std::uint64_t s = 0; s < total; ++s) fn(generate(s));
}

namespace {

void check_seed_cap(const BitGenerator& gen, unsigned cap) {
  if (gen.seed_bits() > cap || gen.seed_bits() > 62) throw SeedSpaceTooLarge(gen.seed_bits(), cap);
}

unsigned ceil_log2(double x) { return x <= 1 ? 0U : static_cast<unsigned>(std::ceil(std::log2(x) - 1e-12)); }

}  // namespace

SmallBiasGenerator::SmallBiasGenerator(std::size_t n, unsigned field_log) : n_(n), field_(field_log) {
  if (n < 1 || n > 64) throw std::invalid_argument("small-bias generator needs 1 <= n <= 64");
}

SmallBiasGenerator SmallBiasGenerator::for_bias(std::size_t n, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("bias must be positive");
  return SmallBiasGenerator(n, std::max(1U, ceil_log2(static_cast<double>(n) / eps)));
}

double SmallBiasGenerator::epsilon_guarantee() const { return std::ldexp(static_cast<double>(n_), -static_cast<int>(field_log())); }

Dyadic SmallBiasGenerator::epsilon_guarantee_exact() const { return Dyadic(n_, field_log()).reduced(); }

std::uint64_t SmallBiasGenerator::generate(std::uint64_t seed) const {
  const std::uint64_t x = seed & field_.mask();
  const std::uint64_t y = (seed >> field_.degree()) & field_.mask();
  std::uint64_t out = 0;
  std::uint64_t p = x;
  for (std::size_t i = 0; i < n_; ++i) {
    out |= static_cast<std::uint64_t>(std::popcount(p & y) & 1) << i;
    p = field_.mul(p, x);
  }
  return out;
}

void SmallBiasGenerator::for_each_output(const std::function<void(std::uint64_t)>& fn) const {
  // For fixed x the output is linear in y: walk y in Gray-code order and
  // toggle one column per step.
  const unsigned l = field_.degree();
  std::vector<std::uint64_t> column(l);
  for (std::uint64_t x = 0; x < field_.size(); ++x) {
    std::fill(column.begin(), column.end(), 0);
    std::uint64_t p = x;
    for (std::size_t i = 0; i < n_; ++i) {
      for (unsigned j = 0; j < l; ++j)
        if ((p >> j) & 1) column[j] |= std::uint64_t{1} << i;
      p = field_.mul(p, x);
    }
    std::uint64_t out = 0;
    fn(out);
    for (std::uint64_t g = 1; g < field_.size(); ++g) {
      out ^= column[std::countr_zero(g)];
      fn(out);
    }
  }
}

nlohmann::json SmallBiasGenerator::spec() const {
  return {{"construction", "small-bias-power"},
          {"n", n_},
          {"field_log", field_log()},
          {"modulus", field_.modulus()},
          {"seed_bits", seed_bits()},
          {"epsilon_guarantee", epsilon_guarantee_exact()}};
}

UniformGenerator::UniformGenerator(std::size_t n) : n_(n) {
  if (n < 1 || n > 62) throw std::invalid_argument("uniform generator needs 1 <= n <= 62");
}

nlohmann::json UniformGenerator::spec() const { return {{"construction", "uniform"}, {"n", n_}}; }

Dyadic measure_parity_bias(const BitGenerator& gen, std::uint64_t subset, unsigned seed_cap) {
  if (subset == 0) throw std::invalid_argument("parity over an empty index set");
  if (gen.output_bits() < 64 && (subset >> gen.output_bits()) != 0)
    throw std::out_of_range("parity index outside generator output");
  check_seed_cap(gen, seed_cap);
  std::uint64_t odd = 0;
  gen.for_each_output([&](std::uint64_t x) { odd += std::popcount(x & subset) & 1; });
  const std::uint64_t total = std::uint64_t{1} << gen.seed_bits();
  const std::uint64_t dev = 2 * odd > total ? 2 * odd - total : total - 2 * odd;
  return Dyadic(dev, gen.seed_bits() + 1).reduced();
}

ParityReport max_parity_bias(const BitGenerator& gen, unsigned seed_cap) {
  const std::size_t n = gen.output_bits();
  if (n > 24) throw std::invalid_argument("max_parity_bias needs at most 24 output bits");
  check_seed_cap(gen, seed_cap);
  std::vector<std::int64_t> h(std::size_t{1} << n, 0);
  gen.for_each_output([&](std::uint64_t x) { ++h[x]; });
  for (std::size_t len = 1; len < h.size(); len <<= 1)
    for (std::size_t i = 0; i < h.size(); i += 2 * len)
      for (std::size_t j = i; j < i + len; ++j) {
        const std::int64_t a = h[j], b = h[j + len];
        h[j] = a + b;
        h[j + len] = a - b;
      }
  ParityReport r;
  std::uint64_t best = 0;
  for (std::size_t s = 1; s < h.size(); ++s) {
    const std::uint64_t v = static_cast<std::uint64_t>(std::llabs(h[s]));
    if (v > best) {
      best = v;
      r.argmax = s;
    }
  }
  if (r.argmax == 0) r.argmax = 1;
  r.max_bias = Dyadic(best, gen.seed_bits() + 1).reduced();
  return r;
}

KwiseHashFamily::KwiseHashFamily(std::size_t k, std::size_t n, std::uint64_t t, unsigned field_log)
    : k_(k), n_(n), t_(t), field_(std::max({1U, field_log, ceil_log2(static_cast<double>(std::max<std::uint64_t>(n, t)))})) {
  if (k < 1) throw std::invalid_argument("hash family needs k >= 1");
  if (t < 1 || !std::has_single_bit(t)) throw std::invalid_argument("hash range must be a power of two");
  if (n > field_.size()) throw std::invalid_argument("hash domain larger than the field");
}

std::uint64_t KwiseHashFamily::family_size() const {
  if (seed_bits() > 62) throw std::overflow_error("hash family too large to enumerate");
  return std::uint64_t{1} << seed_bits();
}

std::uint64_t KwiseHashFamily::field_value(std::uint64_t seed, std::uint64_t point) const {
  const unsigned b = field_.degree();
  const std::uint64_t mask = field_.mask();
  std::uint64_t v = (seed >> ((k_ - 1) * b)) & mask;
  for (std::size_t j = k_ - 1; j-- > 0;) v = field_.mul(v, point) ^ ((seed >> (j * b)) & mask);
  return v;
}

std::vector<std::uint32_t> KwiseHashFamily::buckets(std::uint64_t seed) const {
  std::vector<std::uint32_t> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = static_cast<std::uint32_t>(eval(seed, i));
  return out;
}

nlohmann::json KwiseHashFamily::spec() const {
  return {{"construction", "polynomial-hash"}, {"k", k_}, {"n", n_}, {"t", t_}, {"field_log", field_log()},
          {"seed_bits", seed_bits()}};
}

Dyadic generator_expectation(const DnfFormula& f, const BitGenerator& gen, unsigned seed_cap) {
  if (f.num_vars() != gen.output_bits()) throw std::invalid_argument("generator output length differs from formula");
  check_seed_cap(gen, seed_cap);
  std::uint64_t hits = 0;
  gen.for_each_output([&](std::uint64_t x) { hits += f.evaluate_word(x); });
  return Dyadic(hits, gen.seed_bits()).reduced();
}

FoolingReport fooling_error(const DnfFormula& f, const BitGenerator& gen, unsigned seed_cap) {
  FoolingReport r;
  r.expectation = generator_expectation(f, gen, seed_cap);
  r.bias = exact_bias(f);
  r.error = abs_difference(r.expectation, r.bias);
  return r;
}

GeneratorRecipe recipe_for_size(std::size_t n, std::size_t w, double m, double delta, const RecipeKnobs& knobs) {
  if (w < 1 || n < 1) throw std::invalid_argument("recipe needs n, w >= 1");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("recipe needs 0 < delta < 1");
  GeneratorRecipe r;
  r.n = n;
  r.width = w;
  r.size = std::max(1.0, m);
  r.delta = delta;
  const double wd = static_cast<double>(w);
  const double lm = std::log2(r.size / delta);
  r.k = static_cast<std::size_t>(std::ceil(knobs.c_k * wd * lm));
  r.log2_inv_eps = knobs.c_eps * wd * std::max(1.0, std::log2(wd)) * lm;
  const double l = std::ceil(std::log2(static_cast<double>(n)) + r.log2_inv_eps - 1e-12);
  r.feasible = l <= GF2Field::kMaxDegree;
  r.field_log = static_cast<unsigned>(std::clamp(l, 1.0, 4096.0));
  r.seed_bits = 2 * r.field_log;
  return r;
}

GeneratorRecipe recipe_for_width(std::size_t n, std::size_t w, double delta, const RecipeKnobs& knobs) {
  return recipe_for_size(n, w, size_target(w, std::min(delta / 2, 0.25)).value, delta, knobs);
}

void to_json(nlohmann::json& j, const GeneratorRecipe& r) {
  j = {{"n", r.n},         {"width", r.width},         {"size", r.size},
       {"delta", r.delta}, {"k", r.k},                 {"log2_inv_eps", r.log2_inv_eps},
       {"field_log", r.field_log}, {"seed_bits", r.seed_bits}, {"feasible", r.feasible}};
}

}  // namespace dnfkit
