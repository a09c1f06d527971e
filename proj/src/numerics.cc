// Copyright 2026 The arner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arner/numerics.h"

#include <algorithm>
#include <cmath>

#include "arner/kernels.h"

namespace arner {

void Vector::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::Identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

std::string ShapeString(size_t rows, size_t cols) {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

Vector Affine(const Matrix& w, std::span<const double> x, const Matrix& r,
              std::span<const double> h, std::span<const double> b) {
  if (w.cols() != x.size()) {
    throw ShapeError("affine: W " + ShapeString(w.rows(), w.cols()) +
                     " incompatible with x " + ShapeString(x.size(), 1));
  }
  if (r.cols() != h.size()) {
    throw ShapeError("affine: R " + ShapeString(r.rows(), r.cols()) +
                     " incompatible with h " + ShapeString(h.size(), 1));
  }
  if (w.rows() != b.size() || r.rows() != b.size()) {
    throw ShapeError("affine: W " + ShapeString(w.rows(), w.cols()) + ", R " +
                     ShapeString(r.rows(), r.cols()) + " incompatible with b " +
                     ShapeString(b.size(), 1));
  }
  Vector out(b);
  const simd::KernelTable& k = simd::Kernels();
  k.gemv_acc(w.data(), w.rows(), w.cols(), x.data(), out.data());
  k.gemv_acc(r.data(), r.rows(), r.cols(), h.data(), out.data());
  return out;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Vector Sigmoid(std::span<const double> v) {
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Sigmoid(v[i]);
  return out;
}

Vector Tanh(std::span<const double> v) {
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
  return out;
}

Vector Relu(std::span<const double> v) {
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = (v[i] > 0.0 || std::isnan(v[i])) ? v[i] : 0.0;
  }
  return out;
}

Vector LogSoftmax(std::span<const double> v) {
  Vector out(v.size());
  if (v.empty()) return out;
  const double max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - max);
  const double log_sum = std::log(sum);
  for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - max) - log_sum;
  return out;
}

}  // namespace arner
