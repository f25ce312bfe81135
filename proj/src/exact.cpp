#include "dnfkit/exact.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace dnfkit {

SupportTooLarge::SupportTooLarge(std::size_t support, std::size_t cap)
    : std::runtime_error("support of " + std::to_string(support) + " variables exceeds cap " + std::to_string(cap)),
      support_(support),
      cap_(cap) {}

namespace {

// Bit j of kLowPattern[v] is bit v of j.
constexpr std::uint64_t kLowPattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

std::uint64_t valid_mask(std::size_t n) { return n >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (1U << n)) - 1); }

// Leaves of the Shannon expansion at or below this support are counted densely.
constexpr std::size_t kDenseLeafVars = 14;
constexpr std::size_t kMemoCap = std::size_t{1} << 26;

struct FormulaKey {
  std::vector<std::uint64_t> words;
  friend bool operator==(const FormulaKey&, const FormulaKey&) = default;
};

struct FormulaKeyHash {
  std::size_t operator()(const FormulaKey& k) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t w : k.words) h = (h ^ w) * 0x100000001b3ULL + (h >> 31);
    return h;
  }
};

// Key of a compacted canonical formula (n <= 64): sorted (pos, neg) words.
FormulaKey key_of(const DnfFormula& g) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  pairs.reserve(g.size());
  for (const Term& t : g.terms()) pairs.emplace_back(t.positive().low_word(), t.negative().low_word());
  std::sort(pairs.begin(), pairs.end());
  FormulaKey k;
  k.words.reserve(2 * pairs.size() + 2);
  k.words.push_back(g.num_vars());
  k.words.push_back(g.is_constant_true() ? 1 : 0);
  for (auto [p, q] : pairs) {
    k.words.push_back(p);
    k.words.push_back(q);
  }
  return k;
}

std::size_t most_frequent_var(const DnfFormula& g) {
  std::vector<std::size_t> freq(g.num_vars(), 0);
  for (const Term& t : g.terms()) t.variables().for_each([&](std::size_t v) { ++freq[v]; });
  return static_cast<std::size_t>(std::max_element(freq.begin(), freq.end()) - freq.begin());
}

class ShannonCounter {
 public:
  // Satisfying assignments of g over its own variables; g is compacted and canonical.
  std::uint64_t count(const DnfFormula& g) {
    const std::size_t s = g.num_vars();
    if (g.is_constant_true()) return std::uint64_t{1} << s;
    if (g.is_constant_false()) return 0;
    if (s <= kDenseLeafVars) return TruthTable(g).count();

    FormulaKey key = key_of(g);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const std::size_t v = most_frequent_var(g);
    std::uint64_t total = 0;
    for (bool value : {false, true}) {
      const Compacted c = compact(substitute(g, v, value));
      const std::size_t free_vars = s - 1 - c.formula.num_vars();
      total += count(c.formula) << free_vars;
    }
    if (memo_.size() < kMemoCap) memo_.emplace(std::move(key), total);
    return total;
  }

 private:
  std::unordered_map<FormulaKey, std::uint64_t, FormulaKeyHash> memo_;
};

class DepthSolver {
 public:
  std::size_t depth(const DnfFormula& g) {
    if (g.is_constant()) return 0;
    const std::size_t s = g.num_vars();

    FormulaKey key = key_of(g);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    // A canonical DNF with terms is satisfiable, but it may still be a tautology.
    if (TruthTable(g).count() == (std::uint64_t{1} << s)) {
      if (memo_.size() < kMemoCap) memo_.emplace(std::move(key), 0);
      return 0;
    }
    if (s == 1) return 1;

    std::size_t best = s;  // querying every variable always works
    for (std::size_t v = 0; v < s && best > 1; ++v) {
      const std::size_t d0 = depth(compact(substitute(g, v, false)).formula);
      if (1 + d0 >= best) continue;
      const std::size_t d1 = depth(compact(substitute(g, v, true)).formula);
      best = std::min(best, 1 + std::max(d0, d1));
    }
    if (memo_.size() < kMemoCap) memo_.emplace(std::move(key), static_cast<std::uint8_t>(best));
    return best;
  }

 private:
  std::unordered_map<FormulaKey, std::uint8_t, FormulaKeyHash> memo_;
};

}  // namespace

TruthTable::TruthTable(const DnfFormula& f) : n_(f.num_vars()) {
  if (n_ > kTruthTableCap) throw SupportTooLarge(n_, kTruthTableCap);
  const std::size_t num_words = n_ <= 6 ? 1 : (std::size_t{1} << (n_ - 6));
  const std::uint64_t valid = valid_mask(n_);
  words_.assign(num_words, 0);
  if (f.is_constant_true()) {
    std::fill(words_.begin(), words_.end(), valid);
    return;
  }
  const std::size_t low_vars = std::min<std::size_t>(n_, 6);
  const std::uint64_t high_all = n_ > 6 ? (std::uint64_t{1} << (n_ - 6)) - 1 : 0;
  for (const Term& t : f.terms()) {
    if (t.contradictory()) continue;
    const std::uint64_t pos = t.positive().low_word();
    const std::uint64_t neg = t.negative().low_word();
    std::uint64_t low = valid;
    for (std::size_t v = 0; v < low_vars; ++v) {
      if ((pos >> v) & 1U) low &= kLowPattern[v];
      if ((neg >> v) & 1U) low &= ~kLowPattern[v];
    }
    const std::uint64_t hp = pos >> 6, hn = neg >> 6;
    const std::uint64_t free = high_all & ~(hp | hn);
    std::uint64_t sub = free;
    while (true) {
      words_[hp | sub] |= low;
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }
}

std::uint64_t TruthTable::count() const {
  std::uint64_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

BiasValue exact_bias(const DnfFormula& f, std::size_t support_cap) {
  const DnfFormula g = canonicalize(f);
  if (g.is_constant_true()) return BiasValue::one();
  if (g.is_constant_false()) return BiasValue::zero();
  const Compacted c = compact(g);
  const std::size_t s = c.formula.num_vars();
  if (s > support_cap || s > Dyadic::kMaxLog2Denominator) throw SupportTooLarge(s, support_cap);
  ShannonCounter counter;
  return BiasValue(counter.count(c.formula), static_cast<unsigned>(s));
}

std::size_t dt_depth(const DnfFormula& f, std::size_t support_cap) {
  const DnfFormula g = canonicalize(f);
  if (g.is_constant()) return 0;
  const Compacted c = compact(g);
  if (c.formula.num_vars() > support_cap || c.formula.num_vars() > 64)
    throw SupportTooLarge(c.formula.num_vars(), support_cap);
  DepthSolver solver;
  return solver.depth(c.formula);
}

SandwichCheck sandwich_check(const DnfFormula& lower, const DnfFormula& f, const DnfFormula& upper,
                             std::size_t cap) {
  const std::size_t n = f.num_vars();
  if (lower.num_vars() != n || upper.num_vars() != n)
    throw std::invalid_argument("sandwich formulas over different universes");
  if (n > cap) throw SupportTooLarge(n, cap);
  const TruthTable tl(lower), tf(f), tu(upper);
  SandwichCheck out;
  std::uint64_t lower_diff = 0, upper_diff = 0;
  for (std::size_t i = 0; i < tf.words().size(); ++i) {
    const std::uint64_t l = tl.words()[i], m = tf.words()[i], u = tu.words()[i];
    const std::uint64_t bad_lower = l & ~m;
    const std::uint64_t bad_upper = m & ~u;
    if ((bad_lower | bad_upper) && !out.witness) {
      const std::uint64_t bad = bad_lower | bad_upper;
      const unsigned bit = static_cast<unsigned>(std::countr_zero(bad));
      out.ordered = false;
      out.witness = (std::uint64_t{i} << 6) | bit;
      out.witness_violates_lower = (bad_lower >> bit) & 1U;
    }
    lower_diff += static_cast<std::uint64_t>(std::popcount(m & ~l));
    upper_diff += static_cast<std::uint64_t>(std::popcount(u & ~m));
  }
  out.lower_err = BiasValue(lower_diff, static_cast<unsigned>(n));
  out.upper_err = BiasValue(upper_diff, static_cast<unsigned>(n));
  return out;
}

}  // namespace dnfkit
