#include "dnfkit/sunflower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace dnfkit {

double gamma_bound(double m, std::size_t w) {
  if (m < 1 || w < 1) throw std::invalid_argument("gamma_bound needs m >= 1 and w >= 1");
  const double wd = static_cast<double>(w);
  return 0.2 * std::exp((std::log(m) - std::lgamma(wd + 1.0)) / wd);
}

namespace {

struct Member {
  std::size_t id;
  VarSet vars;
};

std::optional<std::pair<std::vector<std::size_t>, VarSet>> sunflower_in(const std::vector<Member>& family,
                                                                        std::size_t k, std::size_t n) {
  if (family.size() < k) return std::nullopt;
  std::vector<std::size_t> chosen;
  VarSet used(n);
  for (const Member& s : family) {
    if (s.vars.intersects(used)) continue;
    chosen.push_back(s.id);
    used |= s.vars;
    if (chosen.size() == k) return std::make_pair(chosen, VarSet(n));
  }

  std::vector<std::size_t> freq(n, 0);
  for (const Member& s : family) s.vars.for_each([&](std::size_t v) { ++freq[v]; });
  const std::size_t v = static_cast<std::size_t>(std::max_element(freq.begin(), freq.end()) - freq.begin());
  if (freq[v] < k) return std::nullopt;

  std::vector<Member> link;
  for (const Member& s : family) {
    if (!s.vars.test(v)) continue;
    VarSet rest = s.vars;
    rest.reset(v);
    if (rest.any()) link.push_back({s.id, std::move(rest)});
  }
  auto found = sunflower_in(link, k, n);
  if (found) found->second.set(v);
  return found;
}

bool literal_less(const Term& a, const Term& b) {
  if (a.width() != b.width()) return a.width() < b.width();
  const auto la = a.literals(), lb = b.literals();
  return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
}

Term intersection_of(const DnfFormula& f, const std::vector<std::size_t>& indices) {
  Term core = f.term(indices.front());
  for (std::size_t i : indices) core = core.intersect(f.term(i));
  return core;
}

void require_unate(const DnfFormula& f) {
  if (!f.is_unate()) throw std::invalid_argument("sunflower search needs a unate formula");
}

std::optional<QuasiSunflower> evaluate_core(const DnfFormula& f, const Term& y, std::size_t cap) {
  QuasiSunflower q;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (y.is_subset_of(f.term(i))) q.term_indices.push_back(i);
  if (q.term_indices.size() < 2) return std::nullopt;
  q.core = intersection_of(f, q.term_indices);
  if (q.core != y) return std::nullopt;  // evaluated under its own core
  q.petal_zero_prob = exact_bias(petal_formula(f, q.term_indices, q.core), cap).complement();
  q.gamma = -std::log(q.petal_zero_prob.value());
  return q;
}

// Stronger first: smaller petal-zero probability, then larger k, then smaller index set.
bool stronger(const QuasiSunflower& a, const QuasiSunflower& b) {
  if (a.petal_zero_prob != b.petal_zero_prob) return a.petal_zero_prob < b.petal_zero_prob;
  if (a.k() != b.k()) return a.k() > b.k();
  return a.term_indices < b.term_indices;
}

std::optional<QuasiSunflower> scan(const DnfFormula& f, double goal, bool stop_at_goal, std::size_t cap) {
  require_unate(f);
  std::optional<QuasiSunflower> best;
  for (const Term& y : candidate_cores(f)) {
    auto q = evaluate_core(f, y, cap);
    if (!q) continue;
    q->meets_goal = q->gamma >= goal;
    if (stop_at_goal && q->meets_goal) return q;
    if (!best || stronger(*q, *best)) best = std::move(q);
  }
  if (best) best->meets_goal = best->gamma >= goal;
  return best;
}

}  // namespace

std::optional<Sunflower> find_sunflower(const DnfFormula& f, std::size_t k) {
  if (k < 3) throw std::invalid_argument("sunflowers need k >= 3");
  require_unate(f);
  std::vector<Member> family;
  for (std::size_t i = 0; i < f.size(); ++i) family.push_back({i, f.term(i).variables()});
  auto found = sunflower_in(family, k, f.num_vars());
  if (!found) return std::nullopt;
  Sunflower s{std::move(found->first), std::move(found->second)};
  std::sort(s.term_indices.begin(), s.term_indices.end());
  if (!verify_sunflower(f, s)) throw std::logic_error("sunflower search produced an invalid sunflower");
  return s;
}

bool verify_sunflower(const DnfFormula& f, const Sunflower& s) {
  if (s.term_indices.size() < 3) return false;
  for (std::size_t a = 0; a < s.term_indices.size(); ++a) {
    const VarSet va = f.term(s.term_indices[a]).variables();
    if (!s.core.is_subset_of(va) || s.core == va) return false;
    for (std::size_t b = a + 1; b < s.term_indices.size(); ++b)
      if ((va & f.term(s.term_indices[b]).variables()) != s.core) return false;
  }
  return true;
}

std::vector<Term> candidate_cores(const DnfFormula& f) {
  std::set<Term> cores;
  cores.insert(Term(f.num_vars()));
  std::vector<Term> frontier;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      Term y = f.term(i).intersect(f.term(j));
      if (cores.insert(y).second) frontier.push_back(std::move(y));
    }
  // Close under intersection with further terms.
  while (!frontier.empty()) {
    std::vector<Term> next;
    for (const Term& y : frontier)
      for (const Term& t : f.terms()) {
        Term z = y.intersect(t);
        if (cores.insert(z).second) next.push_back(std::move(z));
      }
    frontier = std::move(next);
  }
  std::vector<Term> out(cores.begin(), cores.end());
  std::sort(out.begin(), out.end(), literal_less);
  return out;
}

DnfFormula petal_formula(const DnfFormula& f, const std::vector<std::size_t>& indices, const Term& core) {
  std::vector<Term> petals;
  petals.reserve(indices.size());
  for (std::size_t i : indices) petals.push_back(f.term(i).minus(core));
  return DnfFormula(f.num_vars(), std::move(petals));
}

std::optional<QuasiSunflower> find_quasi_sunflower(const DnfFormula& f, double gamma_goal, std::size_t support_cap) {
  return scan(f, gamma_goal, true, support_cap);
}

std::optional<QuasiSunflower> best_quasi_sunflower(const DnfFormula& f, std::size_t support_cap) {
  return scan(f, std::numeric_limits<double>::infinity(), false, support_cap);
}

bool verify_quasi_sunflower(const DnfFormula& f, const QuasiSunflower& q, std::size_t support_cap) {
  if (q.k() < 2 || !std::is_sorted(q.term_indices.begin(), q.term_indices.end())) return false;
  if (q.term_indices.back() >= f.size()) return false;
  if (intersection_of(f, q.term_indices) != q.core) return false;
  for (std::size_t i : q.term_indices)
    if (f.term(i).minus(q.core).empty()) return false;
  const BiasValue zero = exact_bias(petal_formula(f, q.term_indices, q.core), support_cap).complement();
  return zero == q.petal_zero_prob && q.gamma == -std::log(zero.value());
}

BiasValue set_system_hit_probability(const DnfFormula& f, const std::vector<std::size_t>& indices, const Term& core) {
  // Petals as variable sets over a compact universe.
  std::vector<std::uint32_t> universe;
  VarSet all(f.num_vars());
  for (std::size_t i : indices) all |= f.term(i).minus(core).variables();
  all.for_each([&](std::size_t v) { universe.push_back(static_cast<std::uint32_t>(v)); });
  if (universe.size() > kTruthTableCap) throw SupportTooLarge(universe.size(), kTruthTableCap);

  std::vector<std::uint64_t> petals;
  for (std::size_t i : indices) {
    const VarSet p = f.term(i).minus(core).variables();
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < universe.size(); ++j)
      if (p.test(universe[j])) mask |= std::uint64_t{1} << j;
    petals.push_back(mask);
  }
  std::uint64_t hits = 0;
  const std::uint64_t total = std::uint64_t{1} << universe.size();
  for (std::uint64_t w = 0; w < total; ++w)
    if (std::any_of(petals.begin(), petals.end(), [w](std::uint64_t p) { return (p & w) == 0; })) ++hits;
  return BiasValue(hits, static_cast<unsigned>(universe.size()));
}

}  // namespace dnfkit
