#include "dnfkit/sparsify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace dnfkit {

const char* to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

UnateSplit extract_unate(const DnfFormula& f) {
  const std::size_t n = f.num_vars();
  const std::size_t m = f.size();
  UnateSplit split;
  split.positive.assign(n, true);

  // Survival weight of term i is 2^-(undecided literals) while it has no
  // conflict with decided polarities; kept as an exponent, -1 once killed.
  std::vector<long> open(m);
  for (std::size_t i = 0; i < m; ++i) open[i] = static_cast<long>(f.term(i).width());

  std::vector<std::vector<std::size_t>> pos_occ(n), neg_occ(n);
  for (std::size_t i = 0; i < m; ++i) {
    f.term(i).positive().for_each([&](std::size_t v) { pos_occ[v].push_back(i); });
    f.term(i).negative().for_each([&](std::size_t v) { neg_occ[v].push_back(i); });
  }

  for (std::size_t v = 0; v < n; ++v) {
    if (pos_occ[v].empty() && neg_occ[v].empty()) continue;
    // Choosing positive doubles the weight of live terms using +v and kills
    // those using -v; the rest are unchanged, so compare the two sides.
    long double gain_pos = 0, gain_neg = 0;
    for (std::size_t i : pos_occ[v])
      if (open[i] >= 0) gain_pos += std::ldexp(1.0L, -static_cast<int>(open[i]));
    for (std::size_t i : neg_occ[v])
      if (open[i] >= 0) gain_neg += std::ldexp(1.0L, -static_cast<int>(open[i]));
    const bool pos = gain_pos >= gain_neg;
    split.positive[v] = pos;
    for (std::size_t i : pos_occ[v]) open[i] = (pos && open[i] >= 0) ? open[i] - 1 : -1;
    for (std::size_t i : neg_occ[v]) open[i] = (!pos && open[i] >= 0) ? open[i] - 1 : -1;
  }

  for (std::size_t i = 0; i < m; ++i) (open[i] == 0 ? split.unate_indices : split.remainder_indices).push_back(i);
  return split;
}

namespace {

DnfFormula apply_step(const DnfFormula& g, const QuasiSunflower& q, Direction d) {
  std::vector<Term> kept;
  if (d == Direction::Upper) {
    if (q.core.empty()) return DnfFormula::constant(g.num_vars(), true);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!std::binary_search(q.term_indices.begin(), q.term_indices.end(), i)) kept.push_back(g.term(i));
    kept.push_back(q.core);
  } else {
    for (std::size_t i = 0; i < g.size(); ++i)
      if (i != q.term_indices.front()) kept.push_back(g.term(i));
  }
  return canonicalize(DnfFormula(g.num_vars(), std::move(kept)));
}

ReductionStep quasi_step(const DnfFormula& g, Direction d, double goal, std::size_t cap) {
  if (!g.is_unate()) throw std::invalid_argument("reduction step needs a unate formula");
  if (g.size() < 2) throw NoQuasiSunflower("fewer than two terms");
  auto q = goal > 0 ? find_quasi_sunflower(g, goal, cap) : best_quasi_sunflower(g, cap);
  if (!q) throw NoQuasiSunflower("no candidate core covers two terms");
  if (q->gamma < goal) throw NoQuasiSunflower("best quasi-sunflower is below the goal");
  q->meets_goal = true;
  ReductionStep step{apply_step(g, *q, d), q->petal_zero_prob, *q};
  return step;
}

/// gamma(j / 2^w) = 0.2 (j / (2^w w!))^{1/w}, with j / 2^w < 1 allowed.
class TailGamma {
 public:
  explicit TailGamma(std::size_t w)
      : inv_w_(1.0 / static_cast<double>(w)),
        scale_(std::exp(-static_cast<double>(w) * std::log(2.0) - std::lgamma(static_cast<double>(w) + 1.0))) {}
  double operator()(double j) const { return 0.2 * std::pow(j * scale_, inv_w_); }

 private:
  double inv_w_;
  double scale_;
};

}  // namespace

ReductionStep reduce_upper_step(const DnfFormula& g, double gamma_goal, std::size_t support_cap) {
  return quasi_step(g, Direction::Upper, gamma_goal, support_cap);
}

ReductionStep reduce_lower_step(const DnfFormula& g, double gamma_goal, std::size_t support_cap) {
  return quasi_step(g, Direction::Lower, gamma_goal, support_cap);
}

ReductionStep sunflower_step(const DnfFormula& g, Direction d, std::size_t k, std::size_t support_cap) {
  if (g.size() < k) throw NoQuasiSunflower("fewer than k terms");
  auto s = find_sunflower(g, k);
  if (!s) throw NoQuasiSunflower("no sunflower of the requested size");
  QuasiSunflower q;
  q.term_indices = s->term_indices;
  q.core = g.term(q.term_indices.front());
  for (std::size_t i : q.term_indices) q.core = q.core.intersect(g.term(i));
  q.petal_zero_prob = exact_bias(petal_formula(g, q.term_indices, q.core), support_cap).complement();
  q.gamma = -std::log(q.petal_zero_prob.value());
  return ReductionStep{apply_step(g, q, d), q.petal_zero_prob, q};
}

SizeTarget size_target(std::size_t w, double eps) {
  if (w < 1) throw std::invalid_argument("size_target needs w >= 1");
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("size_target needs 0 < eps < 1");
  const double wd = static_cast<double>(w);
  SizeTarget t;
  t.log_value = 3 * wd * std::log(2 * wd) + wd * std::log(50 * std::log(1 / eps));
  t.value = std::exp(t.log_value);
  t.representable = t.log_value < 63 * std::log(2.0);
  return t;
}

TailSum fact1_tail_sum(std::size_t w, double first, double last, double direct_limit) {
  if (w < 1) throw std::invalid_argument("fact1_tail_sum needs w >= 1");
  TailSum out;
  const double a = std::max(1.0, std::ceil(first));
  const double b = std::floor(last);
  if (b < a) return out;
  const TailGamma gamma(w);
  auto term = [&gamma](double j) { return std::exp(-static_cast<long double>(gamma(j))); };
  long double sum = 0;
  if (b - a + 1 <= direct_limit) {
    for (double j = a; j <= b; j += 1) sum += term(j);
    out.value = static_cast<double>(sum);
    return out;
  }
  out.exact = false;
  const double head_end = a + direct_limit / 2;
  double j = a;
  for (; j < head_end; j += 1) sum += term(j);
  while (j <= b) {
    const double len = std::min(b - j + 1, std::max(1.0, std::floor(j * 0.001)));
    sum += static_cast<long double>(len) * term(j);  // terms decrease in j
    j += len;
  }
  out.value = static_cast<double>(sum);
  return out;
}

namespace {

struct DirectionRun {
  DnfFormula result;
  BiasValue err;
  std::string stop;
};

DirectionRun run_direction(const DnfFormula& f, double eps, Direction d, double target, const SparsifyOptions& opts,
                            std::vector<AuditStep>& log) {
  DirectionRun run{f, BiasValue::zero(), ""};
  while (true) {
    DnfFormula& cur = run.result;
    if (cur.is_constant()) {
      run.stop = "constant formula";
      break;
    }
    if (static_cast<double>(cur.size()) <= target) {
      run.stop = "size target reached";
      break;
    }
    const UnateSplit split = extract_unate(cur);
    const DnfFormula g = cur.subformula(split.unate_indices);
    const DnfFormula h = cur.subformula(split.remainder_indices);
    ReductionStep step;
    try {
      if (opts.engine == StepEngine::Sunflower)
        step = sunflower_step(g, d, opts.sunflower_k, opts.support_cap);
      else
        step = d == Direction::Upper ? reduce_upper_step(g, 0, opts.support_cap)
                                     : reduce_lower_step(g, 0, opts.support_cap);
    } catch (const NoQuasiSunflower& e) {
      run.stop = std::string("no quasi-sunflower: ") + e.what();
      break;
    } catch (const SupportTooLarge& e) {
      run.stop = e.what();
      break;
    }
    const BiasValue next = run.err + step.err;
    if (next.value() > eps) {
      run.stop = "error budget exhausted";
      break;
    }
    AuditStep a;
    a.index = log.size();
    a.direction = d;
    a.core = step.family.core;
    a.term_indices = step.family.term_indices;
    a.gamma = step.family.gamma;
    a.err = step.err;
    a.accumulated = next;
    a.size_before = cur.size();
    run.result = canonicalize(step.result.disjoin(h));
    run.err = next;
    a.size_after = run.result.size();
    a.width_after = run.result.width();
    log.push_back(std::move(a));
  }
  return run;
}

}  // namespace

SandwichPair sparsify(const DnfFormula& f, double eps, const SparsifyOptions& opts) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("sparsify needs 0 < eps < 1");
  SandwichPair out;
  out.target = size_target(std::max<std::size_t>(1, f.width()), std::min(eps, 0.25));
  const double target = opts.size_target ? *opts.size_target : out.target.value;
  const DnfFormula start = canonicalize(f);

  std::vector<AuditStep> upper_log, lower_log;
  DirectionRun up = run_direction(start, eps, Direction::Upper, target, opts, upper_log);
  DirectionRun low = run_direction(start, eps, Direction::Lower, target, opts, lower_log);

  out.upper = std::move(up.result);
  out.lower = std::move(low.result);
  out.upper_err = up.err;
  out.lower_err = low.err;
  out.upper_err_bound = up.err.value();
  out.lower_err_bound = low.err.value();
  out.upper_stop = std::move(up.stop);
  out.lower_stop = std::move(low.stop);
  out.steps = std::move(upper_log);
  for (AuditStep& s : lower_log) {
    s.index = out.steps.size();
    out.steps.push_back(std::move(s));
  }
  return out;
}

GreedyResult greedy_sparsify(const DnfFormula& f, double eps, std::size_t cap) {
  const DnfFormula g = canonicalize(f);
  GreedyResult out;
  out.formula = DnfFormula(g.num_vars(), {});
  if (g.is_constant_true()) {
    out.formula = g;
    return out;
  }
  const Compacted c = compact(g);
  const std::size_t s = c.formula.num_vars();
  if (s > cap) throw SupportTooLarge(s, cap);

  const TruthTable whole(c.formula);
  std::vector<std::uint64_t> uncovered = whole.words();
  std::uint64_t left = whole.count();
  const std::uint64_t total = std::uint64_t{1} << s;
  const long double allowed = static_cast<long double>(eps) * static_cast<long double>(total);

  std::vector<std::vector<std::uint64_t>> tables;
  for (const Term& t : c.formula.terms()) tables.push_back(TruthTable(DnfFormula(s, {t})).words());

  std::vector<bool> used(g.size(), false);
  while (static_cast<long double>(left) > allowed) {
    std::size_t best = g.size();
    std::uint64_t best_gain = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (used[i]) continue;
      std::uint64_t gain = 0;
      for (std::size_t wi = 0; wi < uncovered.size(); ++wi)
        gain += static_cast<std::uint64_t>(std::popcount(tables[i][wi] & uncovered[wi]));
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == g.size()) break;
    used[best] = true;
    for (std::size_t wi = 0; wi < uncovered.size(); ++wi) uncovered[wi] &= ~tables[best][wi];
    left -= best_gain;
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    if (used[i]) out.selected.push_back(i);
  out.formula = g.subformula(out.selected);
  out.uncovered = BiasValue(left, static_cast<unsigned>(s));
  return out;
}

nlohmann::json audit_json(const AuditStep& s) {
  return {{"step", s.index},
          {"direction", to_string(s.direction)},
          {"core", s.core.dimacs()},
          {"terms", s.term_indices},
          {"k", s.term_indices.size()},
          {"gamma", s.gamma},
          {"err", s.err},
          {"accumulated_err", s.accumulated},
          {"size_before", s.size_before},
          {"size_after", s.size_after},
          {"width_after", s.width_after}};
}

std::string audit_jsonl(const SandwichPair& p) {
  std::ostringstream out;
  for (const AuditStep& s : p.steps) out << audit_json(s).dump() << '\n';
  out << nlohmann::json{{"direction", "upper"}, {"stop", p.upper_stop}, {"err", p.upper_err}}.dump() << '\n';
  out << nlohmann::json{{"direction", "lower"}, {"stop", p.lower_stop}, {"err", p.lower_err}}.dump() << '\n';
  return out.str();
}

}  // namespace dnfkit
