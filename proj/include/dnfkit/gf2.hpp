#pragma once

#include <cstdint>

namespace dnfkit {

/// GF(2^d) for 1 <= d <= 32, elements as the low d bits of a word.
class GF2Field {
 public:
  static constexpr unsigned kMaxDegree = 32;

  explicit GF2Field(unsigned degree);

  unsigned degree() const { return degree_; }
  std::uint64_t modulus() const { return poly_; }
  std::uint64_t size() const { return std::uint64_t{1} << degree_; }
  std::uint64_t mask() const { return size() - 1; }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

 private:
  unsigned degree_;
  std::uint64_t poly_;
};

/// Fixed irreducible polynomial of the given degree (bit i = coefficient of x^i).
std::uint64_t irreducible_polynomial(unsigned degree);

}  // namespace dnfkit
