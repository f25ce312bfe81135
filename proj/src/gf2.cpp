#include "dnfkit/gf2.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace dnfkit {

namespace {

constexpr std::array<std::uint64_t, 33> kIrreducible = {
    0,          0x3,        0x7,        0xB,        0x13,       0x25,       0x43,       0x83,       0x11B,
    0x211,      0x409,      0x805,      0x1009,     0x201B,     0x4021,     0x8003,     0x1002B,    0x20009,
    0x40081,    0x80027,    0x100009,   0x200005,   0x400003,   0x800021,   0x100001B,  0x2000009,  0x400001B,
    0x8000027,  0x10000003, 0x20000005, 0x40000003, 0x80000009, 0x10000008D,
};

}  // namespace

std::uint64_t irreducible_polynomial(unsigned degree) {
  if (degree < 1 || degree > GF2Field::kMaxDegree)
    throw std::out_of_range("no field table entry for degree " + std::to_string(degree));
  return kIrreducible[degree];
}

GF2Field::GF2Field(unsigned degree) : degree_(degree), poly_(irreducible_polynomial(degree)) {}

std::uint64_t GF2Field::mul(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t r = 0;
  const std::uint64_t top = std::uint64_t{1} << degree_;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= poly_;
  }
  return r;
}

std::uint64_t GF2Field::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

}  // namespace dnfkit
