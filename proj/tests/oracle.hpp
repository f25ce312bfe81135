#pragma once

// Brute-force reference implementations used only by the tests. They work on
// plain literal lists and explicit loops and share no code paths with the
// library's bitset, truth-table or memoized routines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "dnfkit/formula.hpp"

namespace oracle {

using Lits = std::vector<std::vector<int>>;  // 1-based signed literals per term

inline Lits lits_of(const dnfkit::DnfFormula& f) {
  Lits out;
  for (const auto& t : f.terms()) out.push_back(t.dimacs());
  return out;
}

inline bool eval(const Lits& terms, bool constant_true, std::uint64_t x) {
  if (constant_true) return true;
  for (const auto& t : terms) {
    bool sat = true;
    for (int l : t) {
      const bool bit = (x >> (std::abs(l) - 1)) & 1U;
      if (bit != (l > 0)) {
        sat = false;
        break;
      }
    }
    if (sat) return true;
  }
  return false;
}

inline bool eval(const dnfkit::DnfFormula& f, std::uint64_t x) { return eval(lits_of(f), f.is_constant_true(), x); }

/// Number of satisfying assignments over all 2^n inputs.
inline std::uint64_t count(const dnfkit::DnfFormula& f) {
  const Lits ts = lits_of(f);
  std::uint64_t c = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << f.num_vars()); ++x) c += eval(ts, f.is_constant_true(), x);
  return c;
}

inline double bias(const dnfkit::DnfFormula& f) {
  return std::ldexp(static_cast<double>(count(f)), -static_cast<int>(f.num_vars()));
}

inline std::vector<bool> table(const dnfkit::DnfFormula& f) {
  const Lits ts = lits_of(f);
  std::vector<bool> out(std::size_t{1} << f.num_vars());
  for (std::uint64_t x = 0; x < out.size(); ++x) out[x] = eval(ts, f.is_constant_true(), x);
  return out;
}

/// Decision-tree depth of a truth table over n variables by plain recursion
/// on subcubes (memoized on the subcube description).
class DepthOracle {
 public:
  explicit DepthOracle(std::vector<bool> tt, std::size_t n) : tt_(std::move(tt)), n_(n) {}

  std::size_t depth() { return solve(0, 0); }

 private:
  // fixed: mask of fixed variables, vals: their values.
  std::size_t solve(std::uint64_t fixed, std::uint64_t vals) {
    const auto key = std::make_pair(fixed, vals);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool seen0 = false, seen1 = false;
    for (std::uint64_t x = 0; x < tt_.size(); ++x) {
      if ((x & fixed) != vals) continue;
      (tt_[x] ? seen1 : seen0) = true;
      if (seen0 && seen1) break;
    }
    std::size_t best = 0;
    if (seen0 && seen1) {
      best = n_ + 1;
      for (std::size_t v = 0; v < n_; ++v) {
        const std::uint64_t bit = std::uint64_t{1} << v;
        if (fixed & bit) continue;
        const std::size_t d = 1 + std::max(solve(fixed | bit, vals), solve(fixed | bit, vals | bit));
        best = std::min(best, d);
      }
    }
    memo_[key] = best;
    return best;
  }

  std::vector<bool> tt_;
  std::size_t n_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> memo_;
};

inline std::size_t dt_depth(const dnfkit::DnfFormula& f) { return DepthOracle(table(f), f.num_vars()).depth(); }

/// Polynomial product over GF(2) without reduction.
inline std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  for (int i = 0; i < 64; ++i)
    if ((b >> i) & 1U) r ^= a << i;
  return r;
}

inline int degree(std::uint64_t p) { return p ? 63 - __builtin_clzll(p) : -1; }

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = degree(m);
  while (degree(a) >= dm) a ^= m << (degree(a) - dm);
  return a;
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree 1..deg/2.
inline bool irreducible(std::uint64_t p) {
  const int d = degree(p);
  if (d < 1) return false;
  for (std::uint64_t q = 2; degree(q) <= d / 2; ++q)
    if (poly_mod(p, q) == 0) return false;
  return true;
}

/// Field product reduced modulo p, computed from the unreduced product.
inline std::uint64_t field_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return poly_mod(clmul(a, b), p); }

}  // namespace oracle
