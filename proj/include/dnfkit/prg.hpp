#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "dnfkit/bias.hpp"
#include "dnfkit/formula.hpp"
#include "dnfkit/gf2.hpp"

namespace dnfkit {

inline constexpr unsigned kDefaultSeedEnumerationCap = 24;

class SeedSpaceTooLarge : public std::runtime_error {
 public:
  SeedSpaceTooLarge(unsigned seed_bits, unsigned cap);
};

/// Deterministic map from seed_bits()-bit seeds to output_bits() <= 64 bits;
/// output bit i is bit i of the returned word.
class BitGenerator {
 public:
  virtual ~BitGenerator() = default;
  virtual unsigned seed_bits() const = 0;
  virtual std::size_t output_bits() const = 0;
  virtual std::uint64_t generate(std::uint64_t seed) const = 0;
  virtual nlohmann::json spec() const = 0;

  /// Calls fn(output) once per seed.
  virtual void for_each_output(const std::function<void(std::uint64_t)>& fn) const;
};

/// Power construction over GF(2^l): seed (x, y) with x the low l bits, output
/// bit i = <x^{i+1}, y>. The 2^{2l} outputs are (n, n/2^l)-biased.
class SmallBiasGenerator : public BitGenerator {
 public:
  SmallBiasGenerator(std::size_t n, unsigned field_log);
  /// Smallest l with n / 2^l <= eps.
  static SmallBiasGenerator for_bias(std::size_t n, double eps);

  unsigned field_log() const { return field_.degree(); }
  double epsilon_guarantee() const;
  Dyadic epsilon_guarantee_exact() const;

  unsigned seed_bits() const override { return 2 * field_.degree(); }
  std::size_t output_bits() const override { return n_; }
  std::uint64_t generate(std::uint64_t seed) const override;
  nlohmann::json spec() const override;
  void for_each_output(const std::function<void(std::uint64_t)>& fn) const override;

 private:
  std::size_t n_;
  GF2Field field_;
};

/// The identity on n-bit seeds (truly uniform outputs).
class UniformGenerator : public BitGenerator {
 public:
  explicit UniformGenerator(std::size_t n);
  unsigned seed_bits() const override { return static_cast<unsigned>(n_); }
  std::size_t output_bits() const override { return n_; }
  std::uint64_t generate(std::uint64_t seed) const override { return seed; }
  nlohmann::json spec() const override;

 private:
  std::size_t n_;
};

/// |Pr[XOR_{i in I} x_i = 1] - 1/2| over all seeds; I is a non-empty bit mask.
Dyadic measure_parity_bias(const BitGenerator& gen, std::uint64_t subset,
                           unsigned seed_cap = kDefaultSeedEnumerationCap);

struct ParityReport {
  Dyadic max_bias;
  std::uint64_t argmax = 0;  // smallest maximizing subset
};

/// Largest parity bias over all non-empty subsets of the outputs (Walsh
/// transform of the output histogram). Needs output_bits() <= 24.
ParityReport max_parity_bias(const BitGenerator& gen, unsigned seed_cap = kDefaultSeedEnumerationCap);

/// Degree-(k-1) polynomials over GF(2^b) restricted to the domain [n] and
/// truncated to the low log2(t) bits; b = ceil(log2 max(n, t)) unless a
/// larger field is requested.
class KwiseHashFamily {
 public:
  KwiseHashFamily(std::size_t k, std::size_t n, std::uint64_t t, unsigned field_log = 0);

  std::size_t k() const { return k_; }
  std::size_t domain() const { return n_; }
  std::uint64_t range() const { return t_; }
  unsigned field_log() const { return field_.degree(); }
  unsigned seed_bits() const { return static_cast<unsigned>(k_) * field_.degree(); }
  /// 2^{seed_bits}; throws if it does not fit in 63 bits.
  std::uint64_t family_size() const;

  std::uint64_t field_value(std::uint64_t seed, std::uint64_t point) const;
  std::uint64_t eval(std::uint64_t seed, std::uint64_t point) const { return field_value(seed, point) & (t_ - 1); }
  /// Buckets of 0..n-1 under one function.
  std::vector<std::uint32_t> buckets(std::uint64_t seed) const;

  nlohmann::json spec() const;

 private:
  std::size_t k_;
  std::size_t n_;
  std::uint64_t t_;
  GF2Field field_;
};

struct FoolingReport {
  Dyadic expectation;  // E_seed[f(G(seed))]
  Dyadic bias;         // exact bias(f)
  double error = 0;    // |expectation - bias|
};

FoolingReport fooling_error(const DnfFormula& f, const BitGenerator& gen,
                            unsigned seed_cap = kDefaultSeedEnumerationCap);

/// Exact E_seed[f(G(seed))].
Dyadic generator_expectation(const DnfFormula& f, const BitGenerator& gen,
                             unsigned seed_cap = kDefaultSeedEnumerationCap);

struct RecipeKnobs {
  double c_k = 1.0;
  double c_eps = 1.0;
};

/// Parameters for a small-bias space that fools width-w DNFs of size m with
/// error delta: k = ceil(c_k w log2(m/delta)), log2(1/eps) = c_eps w
/// max(1, log2 w) log2(m/delta), field l = ceil(log2 n + log2(1/eps)).
struct GeneratorRecipe {
  std::size_t n = 0;
  std::size_t width = 0;
  double size = 0;  // m
  double delta = 0;
  std::size_t k = 0;
  double log2_inv_eps = 0;
  unsigned field_log = 0;
  unsigned seed_bits = 0;
  bool feasible = true;  // field_log within the field table
};

GeneratorRecipe recipe_for_size(std::size_t n, std::size_t w, double m, double delta, const RecipeKnobs& knobs = {});
/// Width-only recipe: m is the size target W(w, delta/2).
GeneratorRecipe recipe_for_width(std::size_t n, std::size_t w, double delta, const RecipeKnobs& knobs = {});

void to_json(nlohmann::json& j, const GeneratorRecipe& r);

}  // namespace dnfkit
