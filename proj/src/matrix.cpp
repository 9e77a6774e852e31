#include "modelswitch/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace modelswitch {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("matrix: expected " +
                                std::to_string(rows_ * cols_) + " values, got " +
                                std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("matrix: non-finite value at row " +
                                  std::to_string(i / cols_) + ", column " +
                                  std::to_string(i % cols_));
    }
  }
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> out;
  out.reserve(rows.size() * cols_);
  for (std::size_t r : rows) {
    if (r >= rows_) throw std::out_of_range("matrix: row index out of range");
    auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  Matrix m;
  m.rows_ = rows.size();
  m.cols_ = cols_;
  m.values_ = std::move(out);
  return m;
}

}  // namespace modelswitch
