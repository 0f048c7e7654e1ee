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

#ifndef RBN_GRADCHECK_H_
#define RBN_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rbn/ed_fvc.h"
#include "rbn/ffdnn.h"

namespace rbn {

// Central finite-difference checks of the analytic gradients. The numeric
// side only calls forward passes.

inline constexpr double kGradCheckEpsilon = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-5;
// Denominator floor of the relative error, so entries whose true gradient
// is ~0 are judged on absolute error.
inline constexpr double kGradCheckFloor = 1e-8;

// |a - n| / max(|a|, |n|, kGradCheckFloor).
double GradRelativeError(double analytic, double numeric);

struct GradCheckResult {
  std::string name;
  double max_rel_error = 0.0;
  std::string worst_entry;  // "matrix[r,c]"
  std::size_t entries = 0;

  bool Passed(double tol = kGradCheckTolerance) const {
    return max_rel_error <= tol;
  }
};

GradCheckResult CheckEdFvcGradients(const EdFvcParams& p, const Matrix& inputs,
                                    const Matrix& targets, DecodeMode mode,
                                    double eps = kGradCheckEpsilon);

GradCheckResult CheckDnnGradients(const DnnParams& p,
                                  std::span<const double> x,
                                  std::span<const double> target,
                                  double eps = kGradCheckEpsilon);

// Random parameters for gradient checks: identity-initialised recurrent
// paths plus Gaussian perturbation everywhere, so no weight is trivially
// zero or identity.
EdFvcParams RandomEdFvcForCheck(std::size_t feature_dim,
                                std::size_t hidden_dim, Rng& rng);
DnnParams RandomDnnForCheck(const ArchSpec& arch, Rng& rng);

// Encoder-decoder configs (D=4, H=6, T in {1,3,7}) over `seeds` seeds, and
// DNN archs "5L 7R 3L" and "5L 7R 7R 2L" over the same seeds.
std::vector<GradCheckResult> RunEdFvcGradCheckSuite(std::uint64_t base_seed,
                                                    std::size_t seeds = 5);
std::vector<GradCheckResult> RunDnnGradCheckSuite(std::uint64_t base_seed,
                                                  std::size_t seeds = 5);

}  // namespace rbn

#endif  // RBN_GRADCHECK_H_
