#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnfkit/bias.hpp"
#include "dnfkit/exact.hpp"
#include "dnfkit/formula.hpp"
#include "dnfkit/sunflower.hpp"

namespace dnfkit {

/// f = g OR h with g unate.
struct UnateSplit {
  std::vector<std::size_t> unate_indices;
  std::vector<std::size_t> remainder_indices;
  std::vector<bool> positive;  // chosen polarity per variable
};

/// Chooses one polarity per variable by conditional expectations (ascending
/// variable order, ties to positive) and keeps the terms that use only chosen
/// polarities. Guarantees |S| >= sum_i 2^-width(T_i) >= m / 2^w.
UnateSplit extract_unate(const DnfFormula& f);

class NoQuasiSunflower : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction { Upper, Lower };
const char* to_string(Direction d);

enum class StepEngine { QuasiSunflower, Sunflower };

struct ReductionStep {
  DnfFormula result;  // canonical
  BiasValue err;      // exact petal-zero probability of the family used
  QuasiSunflower family;
};

/// Replaces a quasi-sunflower's terms by their core. An empty core makes the
/// result constant true. g must be unate with at least two terms.
ReductionStep reduce_upper_step(const DnfFormula& g, double gamma_goal = 0,
                                std::size_t support_cap = kDefaultBiasSupportCap);
/// Drops the first term of a quasi-sunflower.
ReductionStep reduce_lower_step(const DnfFormula& g, double gamma_goal = 0,
                                std::size_t support_cap = kDefaultBiasSupportCap);

/// Same reductions driven by a plain k-sunflower.
ReductionStep sunflower_step(const DnfFormula& g, Direction d, std::size_t k,
                             std::size_t support_cap = kDefaultBiasSupportCap);

struct SizeTarget {
  double value = 0;         // (2w)^{3w} (50 ln(1/eps))^w
  double log_value = 0;     // natural log of value
  bool representable = true;  // value fits in a 64-bit size
};

SizeTarget size_target(std::size_t w, double eps);

/// Sum_{j=first}^{last} exp(-gamma(j / 2^w)). Exact summation when the range
/// has at most `direct_limit` terms; otherwise an upper bound from
/// geometrically growing blocks of a decreasing sequence.
struct TailSum {
  double value = 0;
  bool exact = true;
};
TailSum fact1_tail_sum(std::size_t w, double first, double last, double direct_limit = 2e6);

struct AuditStep {
  std::size_t index = 0;
  Direction direction = Direction::Upper;
  Term core;
  std::vector<std::size_t> term_indices;  // indices into the unate part
  double gamma = 0;
  BiasValue err;
  BiasValue accumulated;
  std::size_t size_before = 0;
  std::size_t size_after = 0;
  std::size_t width_after = 0;
};

struct SandwichPair {
  DnfFormula lower;
  DnfFormula upper;
  BiasValue lower_err;
  BiasValue upper_err;
  double lower_err_bound = 0;
  double upper_err_bound = 0;
  std::vector<AuditStep> steps;
  std::string lower_stop;
  std::string upper_stop;
  SizeTarget target;
};

struct SparsifyOptions {
  /// Replaces the size target W when set.
  std::optional<double> size_target;
  std::size_t support_cap = kDefaultBiasSupportCap;
  StepEngine engine = StepEngine::QuasiSunflower;
  std::size_t sunflower_k = 3;
};

/// Iterated reduction, separately for the upper and the lower approximator,
/// while the size exceeds the target and the exact accumulated error stays
/// within eps. Errors are the exact sums of per-step petal-zero probabilities.
SandwichPair sparsify(const DnfFormula& f, double eps, const SparsifyOptions& opts = {});

struct GreedyResult {
  DnfFormula formula;
  std::vector<std::size_t> selected;  // ascending
  BiasValue uncovered;                // Pr[f = 1, output = 0]
};

/// Greedy set cover of f^{-1}(1) by the terms of f until at most eps of the
/// cube is uncovered. Ties go to the lowest index.
GreedyResult greedy_sparsify(const DnfFormula& f, double eps, std::size_t cap = kDefaultExhaustiveCap);

nlohmann::json audit_json(const AuditStep& s);
/// One JSON object per line.
std::string audit_jsonl(const SandwichPair& p);

}  // namespace dnfkit
