// Copyright 2026 The rbnkit Authors
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

#include "rbn/linalg.h"

#include <cmath>
#include <numeric>
#include <utility>

#include "rbn/error.h"

namespace rbn {

namespace {

void CheckLen(std::size_t got, std::size_t want, const char* what,
              const Matrix& m) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": matrix " + m.ShapeString() +
                         " vs vector of length " + std::to_string(got));
  }
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data of length " +
                         std::to_string(data_.size()) + " for shape " +
                         ShapeString());
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::SetZero() { std::fill(data_.begin(), data_.end(), 0.0); }

void Matrix::AppendRow(std::span<const double> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) {
    throw DimensionError("cannot append row of length " +
                         std::to_string(r.size()) + " to matrix " +
                         ShapeString());
  }
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

std::string Matrix::ShapeString() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

Vector MatVec(const Matrix& m, std::span<const double> v) {
  CheckLen(v.size(), m.cols(), "MatVec", m);
  Vector y(m.rows(), 0.0);
  MatVecAdd(m, v, y);
  return y;
}

void MatVecAdd(const Matrix& m, std::span<const double> v,
               std::span<double> y) {
  CheckLen(v.size(), m.cols(), "MatVecAdd input", m);
  CheckLen(y.size(), m.rows(), "MatVecAdd output", m);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r).data();
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += row[c] * v[c];
    y[r] += acc;
  }
}

void MatTVecAdd(const Matrix& m, std::span<const double> v,
                std::span<double> y) {
  CheckLen(v.size(), m.rows(), "MatTVecAdd input", m);
  CheckLen(y.size(), m.cols(), "MatTVecAdd output", m);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double vr = v[r];
    if (vr == 0.0) continue;
    const double* row = m.row(r).data();
    for (std::size_t c = 0; c < m.cols(); ++c) y[c] += row[c] * vr;
  }
}

void AddOuter(std::span<const double> a, std::span<const double> b,
              double scale, Matrix& m) {
  CheckLen(a.size(), m.rows(), "AddOuter left", m);
  CheckLen(b.size(), m.cols(), "AddOuter right", m);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double ar = scale * a[r];
    if (ar == 0.0) continue;
    double* row = m.row(r).data();
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] += ar * b[c];
  }
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("Axpy: lengths " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("Dot: lengths " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

Vector TanhVec(std::span<const double> v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
  return out;
}

Vector TanhDerivFromOutput(std::span<const double> y) {
  Vector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = 1.0 - y[i] * y[i];
  return out;
}

double GlobalNorm(std::span<const Matrix* const> mats) {
  double sum = 0.0;
  for (const Matrix* m : mats) {
    for (double x : m->values()) sum += x * x;
  }
  return std::sqrt(sum);
}

void ScaleAll(std::span<Matrix* const> mats, double factor) {
  if (factor == 1.0) return;
  for (Matrix* m : mats) {
    for (double& x : m->values()) x *= factor;
  }
}

bool AllFinite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::UniformInt(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("UniformInt: n must be positive");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * Uniform() - 1.0;
    v = 2.0 * Uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double k = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * k;
  has_spare_ = true;
  return u * k;
}

Rng Rng::Derive(std::uint64_t seed, std::uint64_t stream) {
  return Rng(SplitMix64(SplitMix64(seed) ^ SplitMix64(~stream)));
}

Matrix GaussianMatrix(Rng& rng, std::size_t rows, std::size_t cols,
                      double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidArgument("GaussianMatrix: variance must be positive, got " +
                          std::to_string(variance));
  }
  const double sd = std::sqrt(variance);
  Matrix m(rows, cols);
  for (double& x : m.values()) x = sd * rng.Gaussian();
  return m;
}

std::vector<std::size_t> RandomPermutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(p[i - 1], p[rng.UniformInt(i)]);
  }
  return p;
}

}  // namespace rbn
