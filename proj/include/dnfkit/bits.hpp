#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>

#include <boost/container/small_vector.hpp>

namespace dnfkit {

/// Fixed-length bitset over variable indices. One word is stored inline, so
/// formulas with n <= 64 never touch the heap; wider sets spill to the heap.
/// Bits at positions >= size() are always zero.
class VarSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  VarSet() = default;
  explicit VarSet(std::size_t nbits) : nbits_(nbits), words_(word_count(nbits), 0) {}

  static VarSet from_word(std::size_t nbits, Word w) {
    VarSet s(nbits);
    if (!s.words_.empty()) {
      s.words_[0] = w;
      s.trim();
    }
    return s;
  }

  static VarSet full(std::size_t nbits) {
    VarSet s(nbits);
    for (auto& w : s.words_) w = ~Word{0};
    s.trim();
    return s;
  }

  static constexpr std::size_t word_count(std::size_t nbits) {
    return (nbits + kWordBits - 1) / kWordBits;
  }

  std::size_t size() const { return nbits_; }
  std::size_t num_words() const { return words_.size(); }
  Word word(std::size_t i) const { return words_[i]; }
  Word& word(std::size_t i) { return words_[i]; }
  /// Low word, or zero for an empty universe.
  Word low_word() const { return words_.empty() ? 0 : words_[0]; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void set(std::size_t i, bool v) {
    if (v) set(i); else reset(i);
  }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (Word w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  bool is_subset_of(const VarSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const VarSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  VarSet& operator&=(const VarSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  VarSet& operator|=(const VarSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  VarSet& operator^=(const VarSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  /// Set difference.
  VarSet& operator-=(const VarSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend VarSet operator&(VarSet a, const VarSet& b) { return a &= b; }
  friend VarSet operator|(VarSet a, const VarSet& b) { return a |= b; }
  friend VarSet operator^(VarSet a, const VarSet& b) { return a ^= b; }
  friend VarSet operator-(VarSet a, const VarSet& b) { return a -= b; }

  std::optional<std::size_t> first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return i * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return std::nullopt;
  }

  /// Calls fn(index) for every set bit in ascending order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      Word w = words_[i];
      while (w) {
        fn(i * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  friend bool operator==(const VarSet& a, const VarSet& b) {
    return a.nbits_ == b.nbits_ && a.words_ == b.words_;
  }
  /// Orders by universe size, then by the highest differing bit.
  friend std::strong_ordering operator<=>(const VarSet& a, const VarSet& b) {
    if (auto c = a.nbits_ <=> b.nbits_; c != 0) return c;
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = nbits_ * 0x9e3779b97f4a7c15ULL;
    for (Word w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
    return h;
  }

 private:
  void trim() {
    if (nbits_ % kWordBits != 0 && !words_.empty())
      words_.back() &= (Word{1} << (nbits_ % kWordBits)) - 1;
  }

  std::size_t nbits_ = 0;
  boost::container::small_vector<Word, 1> words_;
};

}  // namespace dnfkit
