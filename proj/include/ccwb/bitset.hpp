#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace ccwb {

// Fixed-size (after construction) bitset over 0..size-1.
class DynamicBitset {
 public:
  DynamicBitset() = default;
  explicit DynamicBitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}
  DynamicBitset(std::size_t size, std::initializer_list<std::size_t> bits) : DynamicBitset(size) {
    for (auto b : bits) set(b);
  }

  static DynamicBitset full(std::size_t size) {
    DynamicBitset b(size);
    for (std::size_t i = 0; i < size; ++i) b.set(i);
    return b;
  }

  std::size_t size() const { return size_; }

  void set(std::size_t i, bool v = true) {
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    if (v) {
      words_[i / 64] |= m;
    } else {
      words_[i / 64] &= ~m;
    }
  }
  void reset(std::size_t i) { set(i, false); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool operator[](std::size_t i) const { return test(i); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (auto w : words_) {
      if (w != 0) return true;
    }
    return false;
  }
  bool none() const { return !any(); }

  // Index of the highest set bit + 1, or 0 when empty.
  std::size_t extent() const {
    for (std::size_t k = words_.size(); k-- > 0;) {
      if (words_[k] != 0) return k * 64 + 64 - static_cast<std::size_t>(std::countl_zero(words_[k]));
    }
    return 0;
  }

  bool intersects(const DynamicBitset& o) const {
    for (std::size_t k = 0; k < words_.size() && k < o.words_.size(); ++k) {
      if ((words_[k] & o.words_[k]) != 0) return true;
    }
    return false;
  }

  DynamicBitset& operator|=(const DynamicBitset& o) {
    for (std::size_t k = 0; k < words_.size() && k < o.words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  DynamicBitset& operator&=(const DynamicBitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= k < o.words_.size() ? o.words_[k] : 0;
    return *this;
  }
  friend DynamicBitset operator|(DynamicBitset a, const DynamicBitset& b) { return a |= b; }
  friend DynamicBitset operator&(DynamicBitset a, const DynamicBitset& b) { return a &= b; }
  friend bool operator==(const DynamicBitset&, const DynamicBitset&) = default;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w != 0) {
        f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  static DynamicBitset from_indices(std::size_t size, const std::vector<std::size_t>& idx) {
    DynamicBitset b(size);
    for (auto i : idx) b.set(i);
    return b;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ccwb
