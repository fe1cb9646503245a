#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace elicit {

/// Growable bitset over halfspace indices, sized to the halfspace list.
class TightSet {
 public:
  TightSet() = default;
  explicit TightSet(std::size_t size) { resize(size); }

  void resize(std::size_t size) {
    size_ = size;
    words_.resize((size + 63) / 64, 0);
  }
  std::size_t size() const { return size_; }

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::size_t intersection_count(const TightSet& other) const {
    std::size_t c = 0;
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    return c;
  }

  TightSet& operator&=(const TightSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
    }
    return *this;
  }
  TightSet& operator|=(const TightSet& other) {
    for (std::size_t i = 0; i < words_.size() && i < other.words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  friend TightSet operator&(TightSet a, const TightSet& b) { return a &= b; }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i) {
      if (test(i)) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const TightSet&, const TightSet&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace elicit
