#include "dnfkit/random.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

namespace dnfkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next() { return splitmix64(key_ ^ splitmix64(counter_++)); }

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t x;
  do x = next();
  while (x > limit);
  return x % bound;
}

std::uint64_t CounterRng::bits(unsigned count) {
  if (count == 0) return 0;
  const std::uint64_t x = next();
  return count >= 64 ? x : x >> (64 - count);
}

DnfFormula random_dnf(const RandomDnfSpec& spec, CounterRng& rng) {
  if (spec.width == 0 || spec.width > spec.n) throw std::invalid_argument("random_dnf: need 1 <= width <= n");
  std::vector<std::uint32_t> vars(spec.n);
  std::vector<Term> terms;
  terms.reserve(spec.terms);
  for (std::size_t i = 0; i < spec.terms; ++i) {
    const std::size_t w = spec.exact_width ? spec.width : 1 + rng.below(spec.width);
    std::iota(vars.begin(), vars.end(), 0U);
    Term t(spec.n);
    for (std::size_t j = 0; j < w; ++j) {
      const std::size_t pick = j + rng.below(spec.n - j);
      std::swap(vars[j], vars[pick]);
      t.add({vars[j], spec.monotone || rng.coin()});
    }
    terms.push_back(std::move(t));
  }
  return canonicalize(DnfFormula(spec.n, std::move(terms)));
}

}  // namespace dnfkit
