#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnfkit/formula.hpp"
#include "dnfkit/prg.hpp"
#include "dnfkit/random.hpp"

namespace dnfkit {

/// a with p = 2^-a; throws unless p is a power of two in (0, 1).
unsigned dyadic_exponent(double p);

/// Each coordinate live independently with probability p; fixed values uniform.
class IidSampler {
 public:
  IidSampler(std::size_t n, double p);
  std::size_t n() const { return n_; }
  double p() const { return p_; }
  Restriction sample(CounterRng& rng) const;

 private:
  std::size_t n_;
  double p_;
  std::uint64_t threshold_;  // live iff next() < threshold
};

/// Live set from a k-wise independent hash: coordinate i is live iff the low a
/// bits of h(i) are zero, so every coordinate is live with probability 2^-a
/// and any k coordinates are live together with probability 2^{-a|I|}.
class LimitedSampler {
 public:
  LimitedSampler(std::size_t n, unsigned log2_inv_p, std::size_t k);

  std::size_t n() const { return n_; }
  unsigned log2_inv_p() const { return a_; }
  double p() const;
  std::size_t k() const { return family_.k(); }
  unsigned seed_bits() const { return family_.seed_bits(); }
  unsigned field_log() const { return family_.field_log(); }

  VarSet live_set(std::uint64_t seed) const;
  /// Fixed coordinates take values from `values` (bit i for coordinate i).
  Restriction sample(std::uint64_t seed, const VarSet& values) const;
  Restriction sample(std::uint64_t seed, CounterRng& rng) const;

  nlohmann::json spec() const;

 private:
  std::size_t n_;
  unsigned a_;
  KwiseHashFamily family_;
};

/// (rho' o rho'')_i = rho''_j when i is the j-th live coordinate of rho',
/// otherwise rho'_i.
Restriction compose_restrictions(const Restriction& outer, const Restriction& inner);

struct ScheduleRound {
  double width_in = 0;  // width entering the round, w / 2^{r-1}
  double p_real = 0;    // p(width_in, s)
  unsigned log2_inv_p = 0;  // p rounded down to 2^-a
  std::size_t k = 0;        // ceil(w / 2^r)
  unsigned field_log = 0;
  unsigned seed_bits = 0;   // k * field_log
};

struct RoundSchedule {
  std::size_t n = 0;
  std::size_t w = 0;
  std::size_t s = 0;
  double eps = 0;
  double delta = 0;
  double c = 0.05;
  std::vector<ScheduleRound> rounds;
  unsigned log2_inv_q = 0;  // q = prod p_r = 2^-sum a_r
  unsigned seed_bits = 0;

  double q() const;
};

class InfeasibleSchedule : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// p(w, s) = c delta^{s/(2w)} / (w^3 ln(1/eps))^2.
double claim_p(double w, std::size_t s, double eps, double delta, double c);

/// t = max(1, ceil(log2(w/s))) rounds; round r uses p(w/2^{r-1}, s) rounded down
/// to a power of two and independence ceil(w/2^r).
RoundSchedule make_schedule(std::size_t n, std::size_t w, std::size_t s, double eps, double delta, double c = 0.05);

/// Composition of one limited-independence restriction per round; the live
/// sets come from round_seeds, the fixed values from rng.
Restriction derandomized_restriction(const RoundSchedule& sched, std::span<const std::uint64_t> round_seeds,
                                     CounterRng& rng);
/// Draws the round seeds from rng as well.
Restriction derandomized_restriction(const RoundSchedule& sched, CounterRng& rng);

struct SingleTermRates {
  double not_killed = 0;   // ((1+p)/2)^w
  double depth_at_least_one = 0;  // ((1+p)/2)^w - ((1-p)/2)^w
};

/// Exact rates for one width-w term under iid restrictions.
SingleTermRates single_term_rates(double p, std::size_t w);

enum class SamplerKind { Iid, Derandomized };

struct ExperimentConfig {
  SamplerKind kind = SamplerKind::Iid;
  double p = 0.5;                       // iid kind
  std::optional<RoundSchedule> schedule;  // derandomized kind
  std::size_t trials = 1000;
  std::size_t s = 2;
  double eps = 0.1;
  std::uint64_t seed = 0;
  bool check_sandwich = true;  // criterion (b)
  unsigned threads = 1;
};

struct ExperimentReport {
  std::size_t trials = 0;
  std::size_t depth_failures = 0;     // dt_depth(f_rho) >= s
  std::size_t sandwich_failures = 0;  // no certified width-s sandwich found
  std::size_t not_killed = 0;         // f_rho not constant
  double survival = 0;                // per-coordinate live probability
  double depth_rate() const;
  double sandwich_rate() const;
  double depth_sigma() const;
  double sandwich_sigma() const;
  /// (5 p w)^s for iid restrictions.
  std::optional<double> baseline_bound;
};

ExperimentReport switching_experiment(const DnfFormula& f, const ExperimentConfig& cfg);

nlohmann::json schedule_json(const RoundSchedule& s);
nlohmann::json report_json(const ExperimentReport& r);

}  // namespace dnfkit
