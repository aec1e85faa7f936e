/*
 * Copyright 2026 The mvfhe Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MVFHE_MATRIX_HPP_
#define MVFHE_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvfhe/arith.hpp"
#include "mvfhe/errors.hpp"

namespace mvfhe {

// Dense row-major matrix over an arbitrary scalar.
template <typename T>
class Matrix {
 public:
  using Scalar = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  T* row(std::size_t i) { return data_.data() + i * cols_; }
  const T* row(std::size_t i) const { return data_.data() + i * cols_; }
  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Order-3 tensor with dims (I1, I2, I3). Frontal slice k is the I1 x I2
// matrix T(., ., k); slices are stored contiguously.
template <typename T>
class Tensor3 {
 public:
  using Scalar = T;

  Tensor3() = default;
  Tensor3(std::size_t d1, std::size_t d2, std::size_t d3, const T& fill = T())
      : d1_(d1), d2_(d2), d3_(d3), data_(d1 * d2 * d3, fill) {}

  std::size_t dim(int mode) const {
    switch (mode) {
      case 1: return d1_;
      case 2: return d2_;
      case 3: return d3_;
      default: throw DimensionError("tensor mode must be 1, 2 or 3");
    }
  }

  T& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(k * d1_ + i) * d2_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(k * d1_ + i) * d2_ + j];
  }

  Matrix<T> slice(std::size_t k) const {
    Matrix<T> m(d1_, d2_);
    for (std::size_t i = 0; i < d1_; ++i)
      for (std::size_t j = 0; j < d2_; ++j) m(i, j) = (*this)(i, j, k);
    return m;
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Tensor3& a, const Tensor3& b) {
    return a.d1_ == b.d1_ && a.d2_ == b.d2_ && a.d3_ == b.d3_ && a.data_ == b.data_;
  }

 private:
  std::size_t d1_ = 0, d2_ = 0, d3_ = 0;
  std::vector<T> data_;
};

using MatrixZq = Matrix<std::int64_t>;
using MatrixQ = Matrix<Rational>;
using Tensor3Q = Tensor3<Rational>;
using VectorZq = std::vector<std::int64_t>;
using VectorQ = std::vector<Rational>;

}  // namespace mvfhe

#endif  // MVFHE_MATRIX_HPP_
