#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace heavytail {

// Row-major matrix of doubles. Used both for sample batches (rows are
// samples, columns are features) and for network weights (rows are output
// units).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_column(std::vector<double> values) {
    Matrix m;
    m.rows_ = values.size();
    m.cols_ = values.empty() ? 0 : 1;
    m.data_ = std::move(values);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  std::vector<double> column(std::size_t c) const;

  // Gathers the given rows into a new matrix, in index order.
  Matrix gather_rows(std::span<const std::size_t> indices) const;

  bool all_finite() const;

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// The spec-level name for a batch of samples.
using SampleMatrix = Matrix;

}  // namespace heavytail
