#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnfkit/bias.hpp"
#include "dnfkit/formula.hpp"
#include "dnfkit/prg.hpp"

namespace dnfkit {

struct Truncation {
  DnfFormula formula;
  std::size_t threshold = 0;  // ceil(log2(m / eps))
  std::size_t dropped = 0;
  BiasValue err;  // sum of 2^-width over dropped terms
};

/// Drops terms wider than ceil(log2(m/eps)).
Truncation truncate_width(const DnfFormula& f, double eps);

enum class CountMethod { Auto, LubyVelickovic, BruteForce };
const char* to_string(CountMethod m);

struct CountOptions {
  CountMethod mode = CountMethod::Auto;
  /// Work limit in formula-evaluation units (terms x generated points).
  double budget = 1e9;
  RecipeKnobs knobs;
  /// Overrides the recipe's per-bucket field size (the guarantee is then not certified).
  std::optional<unsigned> field_log;
  /// Overrides the hashing independence, range and bad-term cap for experiments.
  std::optional<std::size_t> hash_k;
  std::optional<std::uint64_t> hash_range;
  std::optional<std::size_t> w_prime;
  unsigned threads = 1;
  bool keep_per_hash = false;
};

struct CountPlan {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t w = 0;
  double eps = 0;
  std::size_t k = 0;              // ceil(log2(w/eps))
  std::size_t t_raw = 0;          // max(1, floor(w/k))
  std::uint64_t t = 1;            // t_raw rounded up to a power of two
  std::size_t w_prime = 0;        // 6k
  std::size_t bucket_width = 0;   // min(w, w'): width of each bucket formula
  double delta = 0;               // eps / t
  GeneratorRecipe recipe;         // per-bucket generator
  unsigned field_log = 0;         // used per-bucket field (recipe or override)
  bool certified = true;          // false when the field size was overridden
  unsigned seed_bits_per_bucket = 0;
  unsigned total_seed_bits = 0;
  unsigned hash_k = 0;
  unsigned hash_seed_bits = 0;
  double hash_family_size = 0;
  double lv_work = 0;             // |H| * 2^{rt} * m
  double brute_work = 0;          // 2^n * m
  bool lv_feasible = true;
  std::string gate;               // why the method was chosen
  CountMethod method = CountMethod::BruteForce;
};

CountPlan plan_parameters(std::size_t n, std::size_t m, std::size_t w, double eps, const CountOptions& opts = {});

/// Removes every term with more than w' variables in one bucket.
DnfFormula drop_bad_terms(const DnfFormula& f, const std::vector<std::uint32_t>& bucket_of, std::size_t w_prime);

/// x restricted to bucket j is the first |B_j| output bits of G on the j-th
/// r-bit slice of the seed, placed on B_j in increasing order.
class ComposedGenerator : public BitGenerator {
 public:
  ComposedGenerator(std::vector<std::uint32_t> bucket_of, std::uint64_t t, std::shared_ptr<const BitGenerator> base);

  unsigned seed_bits() const override { return static_cast<unsigned>(t_) * base_->seed_bits(); }
  std::size_t output_bits() const override { return bucket_of_.size(); }
  std::uint64_t generate(std::uint64_t seed) const override;
  nlohmann::json spec() const override;
  void for_each_output(const std::function<void(std::uint64_t)>& fn) const override;

 private:
  std::vector<std::uint32_t> bucket_of_;
  std::uint64_t t_;
  std::shared_ptr<const BitGenerator> base_;
  std::vector<std::vector<std::uint32_t>> positions_;
};

struct ErrorComponents {
  BiasValue truncation;
  double generator = 0;
  double hashing = 0;
  double total() const { return truncation.value() + generator + hashing; }
};

struct PerHash {
  std::uint64_t seed = 0;
  std::size_t kept_terms = 0;
  Dyadic p;
};

struct CountResult {
  Dyadic estimate;
  double claimed_error = 0;
  ErrorComponents components;
  CountMethod method = CountMethod::BruteForce;
  unsigned seed_bits = 0;
  double seconds = 0;
  CountPlan plan;
  Truncation truncation;
  std::uint64_t best_hash = 0;
  std::vector<PerHash> per_hash;
};

class CountAborted : public std::runtime_error {
 public:
  CountAborted(const std::string& what, nlohmann::json partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const nlohmann::json& partial() const { return partial_; }

 private:
  nlohmann::json partial_;
};

CountResult dnf_count(const DnfFormula& f, double eps, const CountOptions& opts = {});

nlohmann::json plan_json(const CountPlan& p);
nlohmann::json result_json(const CountResult& r, bool timing = false);

}  // namespace dnfkit
