#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace dnfkit {

/// Non-negative dyadic rational numerator / 2^log2_denominator.
///
/// Every probability the toolkit certifies (biases, sandwich errors, petal
/// probabilities, seed averages) has a power-of-two denominator, so keeping
/// them in this form makes comparisons and error sums exact.
class Dyadic {
 public:
  static constexpr unsigned kMaxLog2Denominator = 62;

  constexpr Dyadic() = default;
  Dyadic(std::uint64_t numerator, unsigned log2_denominator);

  static Dyadic zero() { return {}; }
  static Dyadic one() { return Dyadic(1, 0); }
  /// 2^-exponent.
  static Dyadic pow2(unsigned exponent) { return Dyadic(1, exponent); }

  std::uint64_t numerator() const { return num_; }
  unsigned log2_denominator() const { return bits_; }
  double value() const;
  bool is_zero() const { return num_ == 0; }

  /// 1 - x; requires x <= 1.
  Dyadic complement() const;
  /// Same value over the larger denominator 2^log2_denominator.
  Dyadic rescaled(unsigned log2_denominator) const;
  /// Lowest terms.
  Dyadic reduced() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  /// a - b; requires a >= b.
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  /// Halves the value (adds one bit to the denominator).
  Dyadic halved() const;

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return (a <=> b) == 0; }

  std::string to_string() const;

 private:
  std::uint64_t num_ = 0;
  unsigned bits_ = 0;
};

/// Exact satisfying fraction of a formula.
using BiasValue = Dyadic;

/// |a - b| as a double, computed from the exact numerators.
double abs_difference(const Dyadic& a, const Dyadic& b);

void to_json(nlohmann::json& j, const Dyadic& d);

}  // namespace dnfkit
