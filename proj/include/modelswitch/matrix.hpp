#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modelswitch {

// Dense row-major matrix of finite doubles. Values are fixed at construction.
class Matrix {
 public:
  Matrix() = default;
  // Throws std::invalid_argument if values.size() != rows * cols or any value
  // is NaN or infinite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  const std::vector<double>& values() const { return values_; }

  // New matrix holding the given rows, in the given order.
  Matrix select_rows(std::span<const std::size_t> rows) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace modelswitch
