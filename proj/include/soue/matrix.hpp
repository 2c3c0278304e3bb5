#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace soue {

/// Dense square matrix of 0/1 cells, row-major.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  explicit BinaryMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const { return n_; }
  std::uint8_t at(std::size_t row, std::size_t col) const { return cells_[row * n_ + col]; }
  void set(std::size_t row, std::size_t col, std::uint8_t v) { cells_[row * n_ + col] = v; }

  std::size_t count_ones() const {
    std::size_t c = 0;
    for (auto v : cells_) c += v;
    return c;
  }
  bool symmetric() const {
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = r + 1; c < n_; ++c)
        if (at(r, c) != at(c, r)) return false;
    return true;
  }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace soue
