#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace rrdlab {

// Dense n x m matrix of bits, row-major, packed 64 to a word. Padding bits at
// the end of each row stay zero so that defaulted equality is exact.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols, bool fill = false)
      : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64), words_(rows * words_per_row_, 0) {
    if (fill) {
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) set(i, j, true);
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  bool operator()(std::size_t i, std::size_t j) const noexcept {
    return (words_[i * words_per_row_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j, bool v) noexcept {
    auto& w = words_[i * words_per_row_ + j / 64];
    const std::uint64_t bit = std::uint64_t{1} << (j % 64);
    w = v ? (w | bit) : (w & ~bit);
  }

  std::size_t row_sum(std::size_t i) const noexcept {
    std::size_t s = 0;
    for (std::size_t k = 0; k < words_per_row_; ++k) s += std::popcount(words_[i * words_per_row_ + k]);
    return s;
  }
  std::size_t col_sum(std::size_t j) const noexcept {
    std::size_t s = 0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }
  std::size_t count_ones() const noexcept {
    std::size_t s = 0;
    for (auto w : words_) s += std::popcount(w);
    return s;
  }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace rrdlab
