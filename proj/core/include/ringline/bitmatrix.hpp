#pragma once

// Dense square bit matrix with 64-bit word rows, used for relation tables
// over point sets (a few thousand points at most).  Rows support the subset
// and union-subset queries the incidence predicates need.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ringline {

class BitMatrix {
public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n)
      : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t size() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  bool get(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j, bool v = true) {
    std::uint64_t& w = bits_[i * words_ + j / 64];
    std::uint64_t m = std::uint64_t{1} << (j % 64);
    if (v)
      w |= m;
    else
      w &= ~m;
  }

  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }
  std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }

  std::size_t row_count_ones(std::size_t i) const {
    std::size_t c = 0;
    const std::uint64_t* r = row(i);
    for (std::size_t w = 0; w < words_; ++w) c += std::popcount(r[w]);
    return c;
  }

  /// row(i) subset of row(j)
  bool row_subset(std::size_t i, std::size_t j) const {
    const std::uint64_t* a = row(i);
    const std::uint64_t* b = row(j);
    for (std::size_t w = 0; w < words_; ++w)
      if (a[w] & ~b[w]) return false;
    return true;
  }

  /// row(i) subset of row(j) | row(k)
  bool row_subset_of_union(std::size_t i, std::size_t j, std::size_t k) const {
    const std::uint64_t* a = row(i);
    const std::uint64_t* b = row(j);
    const std::uint64_t* c = row(k);
    for (std::size_t w = 0; w < words_; ++w)
      if (a[w] & ~(b[w] | c[w])) return false;
    return true;
  }

  bool rows_equal(std::size_t i, std::size_t j) const {
    const std::uint64_t* a = row(i);
    const std::uint64_t* b = row(j);
    for (std::size_t w = 0; w < words_; ++w)
      if (a[w] != b[w]) return false;
    return true;
  }

private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace ringline
