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

#include "rbn/gradcheck.h"

#include <algorithm>
#include <cmath>

namespace rbn {

namespace {

void Perturb(Matrix& m, Rng& rng, double stddev) {
  for (double& x : m.values()) x += stddev * rng.Gaussian();
}

template <typename LossFn>
void CheckMatrix(Matrix& param, const Matrix& analytic, const std::string& name,
                 double eps, LossFn loss, GradCheckResult& res) {
  for (std::size_t r = 0; r < param.rows(); ++r) {
    for (std::size_t c = 0; c < param.cols(); ++c) {
      const double saved = param(r, c);
      param(r, c) = saved + eps;
      const double up = loss();
      param(r, c) = saved - eps;
      const double down = loss();
      param(r, c) = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double err = GradRelativeError(analytic(r, c), numeric);
      ++res.entries;
      if (err > res.max_rel_error || std::isnan(err)) {
        res.max_rel_error = std::isnan(err) ? INFINITY : err;
        res.worst_entry = name + "[" + std::to_string(r) + "," +
                          std::to_string(c) + "]";
      }
    }
  }
}

}  // namespace

double GradRelativeError(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult CheckEdFvcGradients(const EdFvcParams& p, const Matrix& inputs,
                                    const Matrix& targets, DecodeMode mode,
                                    double eps) {
  const BackwardResult analytic =
      Backward(p, Forward(p, inputs, targets, mode), targets);
  EdFvcParams work = p;
  auto loss = [&] {
    return SequenceLoss(Forward(work, inputs, targets, mode).decoder.outputs,
                        targets);
  };
  GradCheckResult res;
  auto mats = work.matrices();
  auto grads = analytic.grads.matrices();
  for (std::size_t i = 0; i < EdFvcParams::kNumMatrices; ++i) {
    CheckMatrix(*mats[i], *grads[i], std::string(EdFvcParams::kNames[i]), eps,
                loss, res);
  }
  return res;
}

GradCheckResult CheckDnnGradients(const DnnParams& p,
                                  std::span<const double> x,
                                  std::span<const double> target,
                                  double eps) {
  const DnnBackwardResult analytic = DnnBackward(p, x, target);
  DnnParams work = p;
  auto loss = [&] {
    const Vector y = DnnForward(work, x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      s += (y[i] - target[i]) * (y[i] - target[i]);
    }
    return 0.5 * s;
  };
  GradCheckResult res;
  auto mats = work.matrices();
  auto grads = analytic.grads.matrices();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const std::string name = "layer" + std::to_string(i / 2) +
                             (i % 2 == 0 ? ".weight" : ".bias");
    CheckMatrix(*mats[i], *grads[i], name, eps, loss, res);
  }
  return res;
}

EdFvcParams RandomEdFvcForCheck(std::size_t feature_dim,
                                std::size_t hidden_dim, Rng& rng) {
  EdFvcInit init;
  init.in_variance = 0.1;
  init.out_variance = 0.1;
  EdFvcParams p = InitEdFvc(feature_dim, hidden_dim, rng, init);
  for (Matrix* m : p.matrices()) Perturb(*m, rng, 0.2);
  return p;
}

DnnParams RandomDnnForCheck(const ArchSpec& arch, Rng& rng) {
  DnnParams p = InitDnn(arch, rng);
  for (DnnLayer& l : p.layers) Perturb(l.bias, rng, 0.3);
  return p;
}

std::vector<GradCheckResult> RunEdFvcGradCheckSuite(std::uint64_t base_seed,
                                                    std::size_t seeds) {
  constexpr std::size_t kDim = 4, kHidden = 6;
  std::vector<GradCheckResult> out;
  for (std::size_t s = 0; s < seeds; ++s) {
    for (std::size_t len : {1, 3, 7}) {
      Rng rng = Rng::Derive(base_seed + s, len);
      const EdFvcParams p = RandomEdFvcForCheck(kDim, kHidden, rng);
      const Matrix x = GaussianMatrix(rng, len, kDim, 0.5);
      GradCheckResult r =
          CheckEdFvcGradients(p, x, x, DecodeMode::kTeacherForced);
      r.name = "ed-fvc D=4 H=6 T=" + std::to_string(len) + " seed=" +
               std::to_string(base_seed + s);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<GradCheckResult> RunDnnGradCheckSuite(std::uint64_t base_seed,
                                                  std::size_t seeds) {
  std::vector<GradCheckResult> out;
  for (const char* arch_text : {"5L 7R 3L", "5L 7R 7R 2L"}) {
    const ArchSpec arch = ParseArch(arch_text);
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng rng = Rng::Derive(base_seed + s, arch.sizes.size());
      const DnnParams p = RandomDnnForCheck(arch, rng);
      const Matrix x = GaussianMatrix(rng, 1, arch.input_dim(), 1.0);
      const Matrix t = GaussianMatrix(rng, 1, arch.output_dim(), 1.0);
      GradCheckResult r = CheckDnnGradients(p, x.row(0), t.row(0));
      r.name = std::string("ffdnn ") + arch_text + " seed=" +
               std::to_string(base_seed + s);
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace rbn
