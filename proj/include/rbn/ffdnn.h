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

#ifndef RBN_FFDNN_H_
#define RBN_FFDNN_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rbn/linalg.h"

namespace rbn {

enum class Activation { kLinear, kRelu };

// Layer sizes and activations parsed from strings such as
// "345L 1000R 1000R 500L": 'L' is linear, 'R' rectified-linear. The first
// token is the input layer, whose tag must be L.
struct ArchSpec {
  std::vector<std::size_t> sizes;
  std::vector<Activation> activations;  // parallel to sizes

  std::size_t input_dim() const { return sizes.front(); }
  std::size_t output_dim() const { return sizes.back(); }

  bool operator==(const ArchSpec&) const = default;
};

ArchSpec ParseArch(std::string_view text);
std::string RenderArch(const ArchSpec& arch);

struct DnnLayer {
  Matrix weight;  // out x in
  Matrix bias;    // out x 1
  Activation activation = Activation::kLinear;

  bool operator==(const DnnLayer&) const = default;
};

struct DnnParams {
  std::vector<DnnLayer> layers;

  std::size_t input_dim() const { return layers.front().weight.cols(); }
  std::size_t output_dim() const { return layers.back().weight.rows(); }
  ArchSpec arch() const;

  // Weight and bias matrices in layer order.
  std::vector<Matrix*> matrices();
  std::vector<const Matrix*> matrices() const;

  // Checks that layer shapes chain and the last layer is linear.
  void Validate() const;

  bool operator==(const DnnParams&) const = default;
};

using DnnGradients = DnnParams;

// Weights ~ N(0, 2/fan_in) for rectified layers and N(0, 1/fan_in) for
// linear ones; zero biases.
DnnParams InitDnn(const ArchSpec& arch, Rng& rng);
DnnParams ZerosLike(const DnnParams& p);

Vector DnnForward(const DnnParams& p, std::span<const double> x);

struct DnnBackwardResult {
  DnnGradients grads;
  double loss = 0.0;  // 0.5 * ||f(x) - target||^2
};

// The rectified-linear derivative at exactly 0 is taken as 0.
DnnBackwardResult DnnBackward(const DnnParams& p, std::span<const double> x,
                              std::span<const double> target);

}  // namespace rbn

#endif  // RBN_FFDNN_H_
