#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dnfkit/bias.hpp"
#include "dnfkit/formula.hpp"

namespace dnfkit {

inline constexpr std::size_t kDefaultBiasSupportCap = 26;
inline constexpr std::size_t kDefaultDepthSupportCap = 16;
inline constexpr std::size_t kDefaultExhaustiveCap = 20;
/// Largest universe a dense truth table is built for.
inline constexpr std::size_t kTruthTableCap = 26;

class SupportTooLarge : public std::runtime_error {
 public:
  SupportTooLarge(std::size_t support, std::size_t cap);
  std::size_t support() const { return support_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t support_;
  std::size_t cap_;
};

/// Dense truth table: bit x of the table is f(x), variable i being bit i of x.
class TruthTable {
 public:
  explicit TruthTable(const DnfFormula& f);

  std::size_t num_vars() const { return n_; }
  std::uint64_t num_assignments() const { return std::uint64_t{1} << n_; }
  const std::vector<std::uint64_t>& words() const { return words_; }
  bool operator[](std::uint64_t x) const { return (words_[x >> 6] >> (x & 63)) & 1U; }
  std::uint64_t count() const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

/// Exact Pr_x[f(x) = 1] by memoized Shannon expansion over the support of f
/// (raw formulas are canonicalized first). The denominator is 2^|support|.
BiasValue exact_bias(const DnfFormula& f, std::size_t support_cap = kDefaultBiasSupportCap);

/// Minimum depth of a decision tree computing f.
std::size_t dt_depth(const DnfFormula& f, std::size_t support_cap = kDefaultDepthSupportCap);

struct SandwichCheck {
  bool ordered = true;
  /// First assignment violating f_l <= f (lower) or f <= f_u (upper).
  std::optional<std::uint64_t> witness;
  bool witness_violates_lower = false;
  BiasValue lower_err;  // Pr[f_l != f]
  BiasValue upper_err;  // Pr[f_u != f]
};

/// Pointwise check of f_l <= f <= f_u over all 2^n assignments.
SandwichCheck sandwich_check(const DnfFormula& lower, const DnfFormula& f, const DnfFormula& upper,
                             std::size_t cap = kDefaultExhaustiveCap);

}  // namespace dnfkit
