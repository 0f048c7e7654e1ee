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

#ifndef RBN_LINALG_H_
#define RBN_LINALG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rbn {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  // Takes ownership of `data`, which must hold rows * cols values.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  void SetZero();
  // Appends one row; `r` must have cols() entries (or any length when the
  // matrix is still 0x0, which fixes the column count).
  void AppendRow(std::span<const double> r);

  // "RxC" for error messages.
  std::string ShapeString() const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = m * v.
Vector MatVec(const Matrix& m, std::span<const double> v);
// y += m * v.
void MatVecAdd(const Matrix& m, std::span<const double> v, std::span<double> y);
// y += m^T * v.
void MatTVecAdd(const Matrix& m, std::span<const double> v,
                std::span<double> y);
// m += scale * a * b^T.
void AddOuter(std::span<const double> a, std::span<const double> b,
              double scale, Matrix& m);
// y += alpha * x.
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
double Dot(std::span<const double> a, std::span<const double> b);

Vector TanhVec(std::span<const double> v);
// 1 - y^2, with y an already-activated tanh output.
Vector TanhDerivFromOutput(std::span<const double> y);

// Sum of squares over every entry of every matrix, square-rooted.
double GlobalNorm(std::span<const Matrix* const> mats);
void ScaleAll(std::span<Matrix* const> mats, double factor);

bool AllFinite(std::span<const double> v);

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; uniforms take the top 53 bits and
// Gaussians use the Marsaglia polar transform, so a seed yields the same
// stream on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t UniformInt(std::uint64_t n);
  // Standard normal.
  double Gaussian();

  // Independent stream keyed on (seed, stream) via a SplitMix64 mix.
  static Rng Derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// rows x cols matrix of i.i.d. N(0, variance) draws.
Matrix GaussianMatrix(Rng& rng, std::size_t rows, std::size_t cols,
                      double variance);

// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> RandomPermutation(Rng& rng, std::size_t n);

}  // namespace rbn

#endif  // RBN_LINALG_H_
