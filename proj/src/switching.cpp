#include "dnfkit/switching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "dnfkit/exact.hpp"
#include "dnfkit/parallel.hpp"
#include "dnfkit/sparsify.hpp"

namespace dnfkit {

unsigned dyadic_exponent(double p) {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("live probability must lie in (0, 1)");
  int e = 0;
  const double mant = std::frexp(p, &e);
  if (mant != 0.5) throw std::invalid_argument("live probability is not a power of two");
  return static_cast<unsigned>(1 - e);
}

IidSampler::IidSampler(std::size_t n, double p) : n_(n), p_(p) {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("live probability must lie in (0, 1)");
  threshold_ = static_cast<std::uint64_t>(std::ldexp(p, 64));
}

Restriction IidSampler::sample(CounterRng& rng) const {
  Restriction rho(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const bool live = rng.next() < threshold_;
    const bool value = rng.coin();
    if (!live) rho.set(i, value ? Assign::One : Assign::Zero);
  }
  return rho;
}

LimitedSampler::LimitedSampler(std::size_t n, unsigned log2_inv_p, std::size_t k)
    : n_(n), a_(log2_inv_p), family_(k, std::max<std::size_t>(n, 1), std::uint64_t{1} << log2_inv_p) {
  if (log2_inv_p < 1) throw std::invalid_argument("live probability must lie in (0, 1)");
  if (family_.seed_bits() > 62) throw std::invalid_argument("limited sampler seed exceeds 62 bits");
}

double LimitedSampler::p() const { return std::ldexp(1.0, -static_cast<int>(a_)); }

VarSet LimitedSampler::live_set(std::uint64_t seed) const {
  VarSet live(n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (family_.eval(seed, i) == 0) live.set(i);
  return live;
}

Restriction LimitedSampler::sample(std::uint64_t seed, const VarSet& values) const {
  const VarSet live = live_set(seed);
  Restriction rho(n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (!live.test(i)) rho.set(i, values.test(i) ? Assign::One : Assign::Zero);
  return rho;
}

Restriction LimitedSampler::sample(std::uint64_t seed, CounterRng& rng) const {
  VarSet values(n_);
  for (std::size_t i = 0; i < n_; ++i) values.set(i, rng.coin());
  return sample(seed, values);
}

nlohmann::json LimitedSampler::spec() const {
  return {{"kind", "limited"}, {"n", n_}, {"log2_inv_p", a_}, {"hash", family_.spec()}};
}

Restriction compose_restrictions(const Restriction& outer, const Restriction& inner) {
  if (inner.size() != outer.num_live()) throw std::invalid_argument("inner restriction does not match the live set");
  Restriction out = outer;
  std::size_t j = 0;
  outer.live().for_each([&](std::size_t i) { out.set(i, inner[j++]); });
  return out;
}

double RoundSchedule::q() const { return std::ldexp(1.0, -static_cast<int>(log2_inv_q)); }

double claim_p(double w, std::size_t s, double eps, double delta, double c) {
  const double denom = w * w * w * std::log(1 / eps);
  return c * std::pow(delta, static_cast<double>(s) / (2 * w)) / (denom * denom);
}

RoundSchedule make_schedule(std::size_t n, std::size_t w, std::size_t s, double eps, double delta, double c) {
  if (s < 1 || s > w) throw std::invalid_argument("schedule needs 1 <= s <= w");
  if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1)) throw std::invalid_argument("schedule needs eps, delta in (0, 1)");
  if (!(c > 0)) throw std::invalid_argument("schedule constant must be positive");
  RoundSchedule sched{n, w, s, eps, delta, c, {}, 0, 0};
  std::size_t t = 1;
  while (std::ldexp(static_cast<double>(w), -static_cast<int>(t)) > static_cast<double>(s)) ++t;
  const unsigned index_bits = n <= 1 ? 1U : static_cast<unsigned>(std::bit_width(n - 1));
  for (std::size_t r = 1; r <= t; ++r) {
    ScheduleRound round;
    round.width_in = std::ldexp(static_cast<double>(w), -static_cast<int>(r - 1));
    round.p_real = claim_p(round.width_in, s, eps, delta, c);
    if (!(round.p_real > 0)) throw InfeasibleSchedule("round survival probability underflows");
    round.log2_inv_p = std::max(1U, static_cast<unsigned>(std::ceil(-std::log2(round.p_real) - 1e-12)));
    round.k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::ldexp(static_cast<double>(w), -static_cast<int>(r)))));
    round.field_log = std::max(round.log2_inv_p, index_bits);
    if (round.field_log > GF2Field::kMaxDegree)
      throw InfeasibleSchedule("round " + std::to_string(r) + " needs GF(2^" + std::to_string(round.field_log) + ")");
    round.seed_bits = static_cast<unsigned>(round.k) * round.field_log;
    if (round.seed_bits > 62) throw InfeasibleSchedule("round " + std::to_string(r) + " seed exceeds 62 bits");
    sched.log2_inv_q += round.log2_inv_p;
    sched.seed_bits += round.seed_bits;
    sched.rounds.push_back(round);
  }
  return sched;
}

Restriction derandomized_restriction(const RoundSchedule& sched, std::span<const std::uint64_t> round_seeds,
                                     CounterRng& rng) {
  if (round_seeds.size() != sched.rounds.size()) throw std::invalid_argument("one seed per round required");
  Restriction rho(sched.n);
  for (std::size_t r = 0; r < sched.rounds.size(); ++r) {
    const ScheduleRound& round = sched.rounds[r];
    const LimitedSampler sampler(sched.n, round.log2_inv_p, round.k);
    // Round r acts on the coordinates still live, renumbered in order.
    const std::size_t live = rho.num_live();
    const VarSet l = sampler.live_set(round_seeds[r]);
    Restriction inner(live);
    for (std::size_t j = 0; j < live; ++j) {
      const bool value = rng.coin();
      if (!l.test(j)) inner.set(j, value ? Assign::One : Assign::Zero);
    }
    rho = compose_restrictions(rho, inner);
  }
  return rho;
}

Restriction derandomized_restriction(const RoundSchedule& sched, CounterRng& rng) {
  std::vector<std::uint64_t> seeds;
  for (const ScheduleRound& round : sched.rounds) seeds.push_back(rng.bits(round.seed_bits));
  return derandomized_restriction(sched, seeds, rng);
}

SingleTermRates single_term_rates(double p, std::size_t w) {
  const double wd = static_cast<double>(w);
  SingleTermRates r;
  r.not_killed = std::pow((1 + p) / 2, wd);
  r.depth_at_least_one = r.not_killed - std::pow((1 - p) / 2, wd);
  return r;
}

double ExperimentReport::depth_rate() const { return trials ? static_cast<double>(depth_failures) / trials : 0; }
double ExperimentReport::sandwich_rate() const { return trials ? static_cast<double>(sandwich_failures) / trials : 0; }
double ExperimentReport::depth_sigma() const {
  const double r = depth_rate();
  return trials ? std::sqrt(r * (1 - r) / trials) : 0;
}
double ExperimentReport::sandwich_sigma() const {
  const double r = sandwich_rate();
  return trials ? std::sqrt(r * (1 - r) / trials) : 0;
}

namespace {

/// Certified width-s sandwich for f_rho: the formula itself, a shallow
/// decision tree, or a sparsifier run whose outputs have width <= s.
bool has_width_sandwich(const DnfFormula& fr, std::size_t s, std::size_t depth, double eps) {
  if (fr.width() <= s) return true;
  if (depth <= s) return true;  // the tree's accepting paths form a width-depth DNF
  SparsifyOptions opts;
  opts.size_target = 0;
  const SandwichPair pair = sparsify(fr, eps, opts);
  return pair.lower.width() <= s && pair.upper.width() <= s;
}

}  // namespace

ExperimentReport switching_experiment(const DnfFormula& f, const ExperimentConfig& cfg) {
  if (cfg.kind == SamplerKind::Derandomized && !cfg.schedule) throw std::invalid_argument("derandomized run needs a schedule");
  if (cfg.schedule && cfg.schedule->n != f.num_vars()) throw std::invalid_argument("schedule built for another n");
  ExperimentReport rep;
  rep.trials = cfg.trials;
  std::optional<IidSampler> iid;
  if (cfg.kind == SamplerKind::Iid) {
    iid.emplace(f.num_vars(), cfg.p);
    rep.survival = cfg.p;
    rep.baseline_bound = std::pow(5 * cfg.p * static_cast<double>(f.width()), static_cast<double>(cfg.s));
  } else {
    rep.survival = cfg.schedule->q();
  }

  std::vector<std::uint8_t> flags(cfg.trials, 0);
  const CounterRng root(cfg.seed);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
    CounterRng rng = root.fork(i);
    const Restriction rho = iid ? iid->sample(rng) : derandomized_restriction(*cfg.schedule, rng);
    const DnfFormula fr = restrict(f, rho);
    const std::size_t depth = dt_depth(fr);
    std::uint8_t bits = 0;
    if (!fr.is_constant()) bits |= 1;
    if (depth >= cfg.s) bits |= 2;
    if (cfg.check_sandwich && !has_width_sandwich(fr, cfg.s, depth, cfg.eps)) bits |= 4;
    flags[i] = bits;
  });
  for (std::uint8_t b : flags) {
    rep.not_killed += b & 1;
    rep.depth_failures += (b >> 1) & 1;
    rep.sandwich_failures += (b >> 2) & 1;
  }
  return rep;
}

nlohmann::json schedule_json(const RoundSchedule& s) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const ScheduleRound& r : s.rounds)
    rounds.push_back({{"width_in", r.width_in},
                      {"p_real", r.p_real},
                      {"log2_inv_p", r.log2_inv_p},
                      {"k", r.k},
                      {"field_log", r.field_log},
                      {"seed_bits", r.seed_bits}});
  return {{"n", s.n},         {"w", s.w},         {"s", s.s},
          {"eps", s.eps},     {"delta", s.delta}, {"c", s.c},
          {"rounds", rounds}, {"log2_inv_q", s.log2_inv_q}, {"q", s.q()},
          {"seed_bits", s.seed_bits}};
}

nlohmann::json report_json(const ExperimentReport& r) {
  nlohmann::json j = {{"trials", r.trials},
                      {"survival", r.survival},
                      {"not_killed", r.not_killed},
                      {"depth_failures", r.depth_failures},
                      {"depth_rate", r.depth_rate()},
                      {"depth_sigma", r.depth_sigma()},
                      {"sandwich_failures", r.sandwich_failures},
                      {"sandwich_rate", r.sandwich_rate()},
                      {"sandwich_sigma", r.sandwich_sigma()}};
  if (r.baseline_bound) j["baseline_bound"] = *r.baseline_bound;
  return j;
}

}  // namespace dnfkit
