#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

#include "dnfkit/formula.hpp"

namespace dnfkit {

/// Counter-based deterministic stream: output i is splitmix64(key, i).
/// Streams forked with distinct ids are independent of each other and of the
/// order in which they are consumed, so parallel trials stay reproducible.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next();
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform `bits`-bit value.
  std::uint64_t bits(unsigned count);
  bool coin() { return next() >> 63; }

  CounterRng fork(std::uint64_t stream) const { return CounterRng(key_, stream); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct RandomDnfSpec {
  std::size_t n = 8;
  std::size_t width = 3;
  std::size_t terms = 10;
  bool exact_width = false;  // otherwise widths uniform in [1, width]
  bool monotone = false;
};

/// Random canonical DNF; canonicalization may leave fewer than spec.terms terms.
DnfFormula random_dnf(const RandomDnfSpec& spec, CounterRng& rng);

}  // namespace dnfkit
