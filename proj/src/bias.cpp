#include "dnfkit/bias.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace dnfkit {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kNumeratorLimit = std::uint64_t{1} << 63;

Dyadic make_checked(u128 num, unsigned bits) {
  // Shrink to lowest terms first so large sums still fit.
  while (bits > 0 && (num & 1U) == 0 && num != 0) {
    num >>= 1;
    --bits;
  }
  if (num == 0) return Dyadic::zero();
  if (num >= kNumeratorLimit) throw std::overflow_error("dyadic numerator overflow");
  return Dyadic(static_cast<std::uint64_t>(num), bits);
}

}  // namespace

Dyadic::Dyadic(std::uint64_t numerator, unsigned log2_denominator)
    : num_(numerator), bits_(log2_denominator) {
  if (bits_ > kMaxLog2Denominator) throw std::overflow_error("dyadic denominator exceeds 2^62");
  if (num_ >= kNumeratorLimit) throw std::overflow_error("dyadic numerator overflow");
}

double Dyadic::value() const { return std::ldexp(static_cast<double>(num_), -static_cast<int>(bits_)); }

Dyadic Dyadic::complement() const {
  const std::uint64_t whole = std::uint64_t{1} << bits_;
  if (num_ > whole) throw std::domain_error("complement of a value above 1");
  return Dyadic(whole - num_, bits_);
}

Dyadic Dyadic::rescaled(unsigned log2_denominator) const {
  if (log2_denominator < bits_) throw std::invalid_argument("rescale to a smaller denominator");
  const unsigned shift = log2_denominator - bits_;
  if (num_ != 0 && (std::bit_width(num_) + shift) > 63) throw std::overflow_error("dyadic rescale overflow");
  return Dyadic(num_ << shift, log2_denominator);
}

Dyadic Dyadic::reduced() const { return make_checked(num_, bits_); }

Dyadic Dyadic::halved() const {
  if (num_ % 2 == 0 && num_ != 0) return Dyadic(num_ / 2, bits_);
  return Dyadic(num_, bits_ + 1);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const unsigned bits = std::max(a.bits_, b.bits_);
  const u128 na = static_cast<u128>(a.num_) << (bits - a.bits_);
  const u128 nb = static_cast<u128>(b.num_) << (bits - b.bits_);
  return make_checked(na + nb, bits);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  const unsigned bits = std::max(a.bits_, b.bits_);
  const u128 na = static_cast<u128>(a.num_) << (bits - a.bits_);
  const u128 nb = static_cast<u128>(b.num_) << (bits - b.bits_);
  if (nb > na) throw std::domain_error("negative dyadic difference");
  return make_checked(na - nb, bits);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const unsigned bits = std::max(a.bits_, b.bits_);
  const u128 na = static_cast<u128>(a.num_) << (bits - a.bits_);
  const u128 nb = static_cast<u128>(b.num_) << (bits - b.bits_);
  return na <=> nb;
}

std::string Dyadic::to_string() const {
  return std::to_string(num_) + "/2^" + std::to_string(bits_);
}

double abs_difference(const Dyadic& a, const Dyadic& b) {
  return a >= b ? (a - b).value() : (b - a).value();
}

void to_json(nlohmann::json& j, const Dyadic& d) {
  const Dyadic r = d.reduced();
  j = nlohmann::json{{"numerator", r.numerator()}, {"log2_denominator", r.log2_denominator()}, {"value", r.value()}};
}

}  // namespace dnfkit
