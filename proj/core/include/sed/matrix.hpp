#pragma once

#include <cstddef>
#include <vector>

#include "sed/error.hpp"

namespace sed {

// Dense row-major matrix of doubles. Plain storage so it maps cleanly onto
// Eigen views and serializes as a flat array.
struct RowMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RowMatrix() = default;
  RowMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  std::size_t size() const { return data.size(); }
};

// Row-major boolean mask with the same indexing convention as RowMatrix.
struct BoolMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<unsigned char> data;

  BoolMatrix() = default;
  BoolMatrix(std::size_t r, std::size_t c, bool fill = false)
      : rows(r), cols(c), data(r * c, fill ? 1 : 0) {}

  bool at(std::size_t r, std::size_t c) const {
    return data[r * cols + c] != 0;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    data[r * cols + c] = v ? 1 : 0;
  }
};

}  // namespace sed
