#include "dnfkit/count.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include "dnfkit/exact.hpp"
#include "dnfkit/parallel.hpp"

namespace dnfkit {

const char* to_string(CountMethod m) {
  switch (m) {
    case CountMethod::Auto: return "auto";
    case CountMethod::LubyVelickovic: return "lv";
    case CountMethod::BruteForce: return "bruteforce";
  }
  return "?";
}

namespace {

/// Smallest T with 2^T >= x.
std::size_t ceil_log2_real(double x) {
  std::size_t t = 0;
  while (std::ldexp(1.0, static_cast<int>(t)) < x) ++t;
  return t;
}

}  // namespace

Truncation truncate_width(const DnfFormula& f, double eps) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("truncate_width needs 0 < eps < 1");
  Truncation out;
  out.threshold = ceil_log2_real(static_cast<double>(std::max<std::size_t>(1, f.size())) / eps);
  if (f.is_constant()) {
    out.formula = f;
    return out;
  }
  std::vector<Term> kept;
  for (const Term& t : f.terms()) {
    if (t.width() <= out.threshold) {
      kept.push_back(t);
      continue;
    }
    ++out.dropped;
    const unsigned e = static_cast<unsigned>(std::min<std::size_t>(t.width(), Dyadic::kMaxLog2Denominator));
    out.err += Dyadic::pow2(e);
  }
  out.formula = DnfFormula(f.num_vars(), std::move(kept));
  return out;
}

CountPlan plan_parameters(std::size_t n, std::size_t m, std::size_t w, double eps, const CountOptions& opts) {
  if (w < 1) throw std::invalid_argument("plan needs w >= 1");
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("plan needs 0 < eps < 1");
  CountPlan p;
  p.n = n;
  p.m = m;
  p.w = w;
  p.eps = eps;
  p.k = std::max<std::size_t>(1, ceil_log2_real(static_cast<double>(w) / eps));
  p.t_raw = std::max<std::size_t>(1, w / p.k);
  p.t = opts.hash_range ? *opts.hash_range : std::bit_ceil(static_cast<std::uint64_t>(p.t_raw));
  p.w_prime = opts.w_prime ? *opts.w_prime : 6 * p.k;
  p.bucket_width = std::min(w, p.w_prime);
  p.delta = eps / static_cast<double>(p.t);
  p.hash_k = static_cast<unsigned>(opts.hash_k ? *opts.hash_k : p.k);

  const std::size_t gen_n = std::max<std::size_t>(1, n);
  p.recipe = recipe_for_width(gen_n, p.bucket_width, std::min(p.delta, 0.5), opts.knobs);
  p.field_log = opts.field_log ? *opts.field_log : p.recipe.field_log;
  p.certified = !opts.field_log && p.recipe.feasible;
  p.seed_bits_per_bucket = 2 * p.field_log;
  p.total_seed_bits = p.seed_bits_per_bucket * static_cast<unsigned>(p.t);

  p.lv_feasible = p.field_log >= 1 && p.field_log <= GF2Field::kMaxDegree && p.total_seed_bits <= 62 && n <= 64;
  if (p.t > 1) {
    if (n == 0) {
      p.lv_feasible = false;
    } else {
      const KwiseHashFamily fam(p.hash_k, n, p.t);
      p.hash_seed_bits = fam.seed_bits();
      if (p.hash_seed_bits > 62) p.lv_feasible = false;
    }
  }
  p.hash_family_size = std::ldexp(1.0, static_cast<int>(p.hash_seed_bits));
  const double md = static_cast<double>(std::max<std::size_t>(1, m));
  p.lv_work = p.hash_family_size * std::ldexp(1.0, static_cast<int>(std::min(p.total_seed_bits, 1000U))) * md;
  p.brute_work = std::ldexp(1.0, static_cast<int>(n)) * md;

  switch (opts.mode) {
    case CountMethod::BruteForce:
      p.method = CountMethod::BruteForce;
      p.gate = "requested";
      break;
    case CountMethod::LubyVelickovic:
      if (!p.lv_feasible) throw std::invalid_argument("generator route infeasible: seed or field too large");
      p.method = CountMethod::LubyVelickovic;
      p.gate = "requested";
      break;
    case CountMethod::Auto:
      if (!p.lv_feasible) {
        p.method = CountMethod::BruteForce;
        p.gate = "generator field exceeds table";
      } else if (p.lv_work > opts.budget) {
        p.method = CountMethod::BruteForce;
        p.gate = "generator work exceeds budget";
      } else if (p.lv_work >= p.brute_work) {
        p.method = CountMethod::BruteForce;
        p.gate = "brute force is cheaper";
      } else {
        p.method = CountMethod::LubyVelickovic;
        p.gate = "generator route within budget";
      }
      break;
  }
  return p;
}

DnfFormula drop_bad_terms(const DnfFormula& f, const std::vector<std::uint32_t>& bucket_of, std::size_t w_prime) {
  if (bucket_of.size() != f.num_vars()) throw std::invalid_argument("hash does not cover the formula's variables");
  if (f.is_constant()) return f;
  const std::uint32_t t = bucket_of.empty() ? 1 : *std::max_element(bucket_of.begin(), bucket_of.end()) + 1;
  std::vector<std::size_t> load(t);
  std::vector<Term> kept;
  for (const Term& term : f.terms()) {
    std::fill(load.begin(), load.end(), 0);
    bool bad = false;
    term.variables().for_each([&](std::size_t v) {
      if (++load[bucket_of[v]] > w_prime) bad = true;
    });
    if (!bad) kept.push_back(term);
  }
  return DnfFormula(f.num_vars(), std::move(kept));
}

ComposedGenerator::ComposedGenerator(std::vector<std::uint32_t> bucket_of, std::uint64_t t,
                                     std::shared_ptr<const BitGenerator> base)
    : bucket_of_(std::move(bucket_of)), t_(t), base_(std::move(base)), positions_(t) {
  if (t < 1) throw std::invalid_argument("composed generator needs t >= 1");
  if (bucket_of_.size() > 64) throw std::invalid_argument("composed generator supports n <= 64");
  for (std::size_t i = 0; i < bucket_of_.size(); ++i) {
    if (bucket_of_[i] >= t) throw std::invalid_argument("bucket index out of range");
    positions_[bucket_of_[i]].push_back(static_cast<std::uint32_t>(i));
  }
  for (const auto& pos : positions_)
    if (pos.size() > base_->output_bits()) throw std::invalid_argument("bucket larger than the base generator output");
  if (seed_bits() > 63) throw std::invalid_argument("composed seed exceeds 63 bits");
}

namespace {

std::uint64_t scatter(std::uint64_t bits, const std::vector<std::uint32_t>& pos) {
  std::uint64_t out = 0;
  for (std::size_t b = 0; b < pos.size(); ++b) out |= ((bits >> b) & 1U) << pos[b];
  return out;
}

}  // namespace

std::uint64_t ComposedGenerator::generate(std::uint64_t seed) const {
  const unsigned r = base_->seed_bits();
  const std::uint64_t mask = r >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
  std::uint64_t out = 0;
  for (std::uint64_t j = 0; j < t_; ++j) out |= scatter(base_->generate((seed >> (j * r)) & mask), positions_[j]);
  return out;
}

void ComposedGenerator::for_each_output(const std::function<void(std::uint64_t)>& fn) const {
  const unsigned r = base_->seed_bits();
  if (r > 22) {
    BitGenerator::for_each_output(fn);
    return;
  }
  // One table of placed outputs per bucket, then an odometer over the slices.
  std::vector<std::vector<std::uint64_t>> placed(t_);
  for (std::uint64_t j = 0; j < t_; ++j) {
    placed[j].reserve(std::size_t{1} << r);
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << r); ++z) placed[j].push_back(scatter(base_->generate(z), positions_[j]));
  }
  std::vector<std::size_t> digit(t_, 0);
  std::vector<std::uint64_t> prefix(t_ + 1, 0);
  for (std::uint64_t j = 0; j < t_; ++j) prefix[j + 1] = prefix[j] | placed[j][0];
  const std::size_t radix = std::size_t{1} << r;
  while (true) {
    fn(prefix[t_]);
    std::uint64_t j = 0;
    while (j < t_ && ++digit[j] == radix) digit[j++] = 0;
    if (j == t_) return;
    // Slices below j wrapped to zero; rebuild the prefix from j upward.
    prefix[0] = 0;
    for (std::uint64_t i = 0; i < t_; ++i) prefix[i + 1] = prefix[i] | placed[i][digit[i]];
  }
}

nlohmann::json ComposedGenerator::spec() const {
  return {{"construction", "bucket-composed"}, {"t", t_}, {"buckets", bucket_of_}, {"base", base_->spec()}};
}

CountResult dnf_count(const DnfFormula& f_in, double eps, const CountOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const DnfFormula f = canonicalize(f_in);
  CountResult res;
  res.truncation = truncate_width(f, eps);
  const DnfFormula& g = res.truncation.formula;
  res.components.truncation = res.truncation.err;
  res.plan = plan_parameters(f.num_vars(), g.size(), std::max<std::size_t>(1, g.width()), eps, opts);

  auto finish = [&] {
    res.claimed_error = res.components.total();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  };

  if (g.is_constant()) {
    res.method = CountMethod::BruteForce;
    res.plan.method = CountMethod::BruteForce;
    res.plan.gate = "constant formula";
    res.estimate = g.is_constant_true() ? Dyadic::one() : Dyadic::zero();
    return finish();
  }
  if (res.plan.method == CountMethod::BruteForce) {
    res.method = CountMethod::BruteForce;
    res.estimate = exact_bias(g);
    return finish();
  }

  const CountPlan& plan = res.plan;
  res.method = CountMethod::LubyVelickovic;
  res.seed_bits = plan.total_seed_bits;
  res.components.generator = plan.eps;
  res.components.hashing = plan.eps;

  const std::size_t n = f.num_vars();
  auto base = std::make_shared<SmallBiasGenerator>(n, plan.field_log);
  std::optional<KwiseHashFamily> family;
  if (plan.t > 1) family.emplace(plan.hash_k, n, plan.t);
  const std::uint64_t hashes = family ? family->family_size() : 1;

  std::vector<PerHash> per(hashes);
  const double points = std::ldexp(1.0, static_cast<int>(plan.total_seed_bits));
  double work = 0;
  const std::size_t block = std::max<std::size_t>(1, 16 * std::max(1U, opts.threads));
  for (std::uint64_t lo = 0; lo < hashes; lo += block) {
    const std::uint64_t hi = std::min<std::uint64_t>(hashes, lo + block);
    parallel_for(hi - lo, opts.threads, [&](std::size_t off) {
      const std::uint64_t h = lo + off;
      const std::vector<std::uint32_t> bucket_of = family ? family->buckets(h) : std::vector<std::uint32_t>(n, 0);
      const DnfFormula fh = drop_bad_terms(g, bucket_of, plan.w_prime);
      const ComposedGenerator gen(bucket_of, plan.t, base);
      per[h] = PerHash{h, fh.size(), generator_expectation(fh, gen, 63)};
    });
    for (std::uint64_t h = lo; h < hi; ++h) work += points * static_cast<double>(std::max<std::size_t>(1, per[h].kept_terms));
    if (work > opts.budget && hi < hashes) {
      nlohmann::json partial = {{"processed_hashes", hi}, {"total_hashes", hashes}, {"work", work}};
      Dyadic best;
      for (std::uint64_t h = 0; h < hi; ++h) best = std::max(best, per[h].p);
      partial["best_so_far"] = best;
      partial["plan"] = plan_json(plan);
      throw CountAborted("work budget exceeded after " + std::to_string(hi) + " hash functions", partial);
    }
  }

  res.estimate = per[0].p;
  res.best_hash = 0;
  for (std::uint64_t h = 1; h < hashes; ++h)
    if (per[h].p > res.estimate) {
      res.estimate = per[h].p;
      res.best_hash = h;
    }
  if (opts.keep_per_hash) res.per_hash = std::move(per);
  return finish();
}

nlohmann::json plan_json(const CountPlan& p) {
  return {{"n", p.n},
          {"m", p.m},
          {"w", p.w},
          {"eps", p.eps},
          {"k", p.k},
          {"t_raw", p.t_raw},
          {"t", p.t},
          {"w_prime", p.w_prime},
          {"bucket_width", p.bucket_width},
          {"delta", p.delta},
          {"recipe", p.recipe},
          {"field_log", p.field_log},
          {"certified", p.certified},
          {"seed_bits_per_bucket", p.seed_bits_per_bucket},
          {"total_seed_bits", p.total_seed_bits},
          {"hash_k", p.hash_k},
          {"hash_seed_bits", p.hash_seed_bits},
          {"hash_family_size", p.hash_family_size},
          {"lv_work", p.lv_work},
          {"brute_work", p.brute_work},
          {"lv_feasible", p.lv_feasible},
          {"gate", p.gate},
          {"method", to_string(p.method)}};
}

nlohmann::json result_json(const CountResult& r, bool timing) {
  nlohmann::json j = {{"estimate", r.estimate},
                      {"claimed_error", r.claimed_error},
                      {"method", to_string(r.method)},
                      {"seed_bits", r.seed_bits},
                      {"components",
                       {{"truncation", r.components.truncation},
                        {"generator", r.components.generator},
                        {"hashing", r.components.hashing}}},
                      {"truncation", {{"threshold", r.truncation.threshold}, {"dropped", r.truncation.dropped}}},
                      {"plan", plan_json(r.plan)}};
  if (r.method == CountMethod::LubyVelickovic) j["best_hash"] = r.best_hash;
  if (!r.per_hash.empty()) {
    nlohmann::json ph = nlohmann::json::array();
    for (const PerHash& p : r.per_hash) ph.push_back({{"hash", p.seed}, {"kept_terms", p.kept_terms}, {"p", p.p}});
    j["per_hash"] = std::move(ph);
  }
  if (timing) j["seconds"] = r.seconds;
  return j;
}

}  // namespace dnfkit
