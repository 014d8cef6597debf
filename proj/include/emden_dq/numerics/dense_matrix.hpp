#pragma once

#include "emden_dq/numerics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace emden_dq {

template <class Real>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Real> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Real> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_, data_.begin() + b * cols_);
  }

  std::vector<Real> multiply(std::span<const Real> x) const {
    if (x.size() != cols_) throw DimensionMismatch("matrix-vector product: length mismatch");
    std::vector<Real> y(rows_, Real(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      Real acc(0);
      const auto r = row(i);
      for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
      y[i] = acc;
    }
    return y;
  }

  /// Maximum absolute column sum.
  Real norm_one() const {
    using std::abs;
    Real best(0);
    for (std::size_t j = 0; j < cols_; ++j) {
      Real s(0);
      for (std::size_t i = 0; i < rows_; ++i) s += abs((*this)(i, j));
      if (s > best) best = s;
    }
    return best;
  }

  Real max_abs() const {
    using std::abs;
    Real best(0);
    for (const auto& v : data_) {
      if (abs(v) > best) best = abs(v);
    }
    return best;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

template <class Real>
Real norm_inf(std::span<const Real> v) {
  using std::abs;
  Real best(0);
  for (const auto& x : v) {
    if (abs(x) > best) best = abs(x);
  }
  return best;
}

template <class Real>
Real norm_inf(const std::vector<Real>& v) {
  return norm_inf(std::span<const Real>(v));
}

template <class Real>
Real norm_one(std::span<const Real> v) {
  using std::abs;
  Real s(0);
  for (const auto& x : v) s += abs(x);
  return s;
}

}  // namespace emden_dq
