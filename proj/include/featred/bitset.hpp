#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace featred {

/// Fixed-width dynamic bitset over vertex indices [0, size).
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static Bitset full(std::size_t size) {
    Bitset b(size);
    for (auto& w : b.words_) w = ~std::uint64_t{0};
    b.trim();
    return b;
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const noexcept { return !none(); }

  bool intersects(const Bitset& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  bool is_subset_of(const Bitset& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  // this := this \ o
  Bitset& subtract(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend Bitset operator&(Bitset a, const Bitset& b) noexcept { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) noexcept { return a |= b; }
  friend bool operator==(const Bitset&, const Bitset&) = default;

  // Lowest set index, or size() when empty.
  std::size_t first() const noexcept { return next(0); }
  // Lowest set index >= from, or size() when none.
  std::size_t next(std::size_t from) const noexcept {
    if (from >= size_) return size_;
    std::size_t w = from >> 6;
    std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (bits) return (w << 6) + static_cast<std::size_t>(std::countr_zero(bits));
      if (++w == words_.size()) return size_;
      bits = words_[w];
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(count());
    for (std::size_t i = first(); i < size_; i = next(i + 1)) out.push_back(static_cast<int>(i));
    return out;
  }

  template <typename F>
  void for_each(F&& fn) const {
    for (std::size_t i = first(); i < size_; i = next(i + 1)) fn(i);
  }

 private:
  void trim() noexcept {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace featred
