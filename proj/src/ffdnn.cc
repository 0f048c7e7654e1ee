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

#include "rbn/ffdnn.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "rbn/error.h"

namespace rbn {

namespace {

char Tag(Activation a) { return a == Activation::kRelu ? 'R' : 'L'; }

void Activate(Activation a, std::span<double> v) {
  if (a == Activation::kRelu) {
    for (double& x : v) x = x > 0.0 ? x : 0.0;
  }
}

}  // namespace

ArchSpec ParseArch(std::string_view text) {
  ArchSpec arch;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    const char tag = tok.back();
    std::size_t size = 0;
    const char* end = tok.data() + tok.size() - 1;
    auto [ptr, ec] = std::from_chars(tok.data(), end, size);
    if (tok.size() < 2 || ec != std::errc() || ptr != end || size == 0) {
      throw InvalidArgument("malformed layer token \"" + tok +
                            "\" in architecture \"" + std::string(text) +
                            "\"");
    }
    Activation act;
    if (tag == 'L') {
      act = Activation::kLinear;
    } else if (tag == 'R') {
      act = Activation::kRelu;
    } else {
      throw InvalidArgument("unknown activation tag '" + std::string(1, tag) +
                            "' in token \"" + tok + "\"");
    }
    arch.sizes.push_back(size);
    arch.activations.push_back(act);
  }
  if (arch.sizes.size() < 2) {
    throw InvalidArgument("architecture \"" + std::string(text) +
                          "\" needs at least an input and an output layer");
  }
  if (arch.activations.front() != Activation::kLinear ||
      arch.activations.back() != Activation::kLinear) {
    throw InvalidArgument("architecture \"" + std::string(text) +
                          "\": input and output layers must be L");
  }
  for (std::size_t i = 1; i + 1 < arch.sizes.size(); ++i) {
    if (arch.activations[i] != Activation::kRelu) {
      throw InvalidArgument("architecture \"" + std::string(text) +
                            "\": hidden layers must be R");
    }
  }
  return arch;
}

std::string RenderArch(const ArchSpec& arch) {
  std::string out;
  for (std::size_t i = 0; i < arch.sizes.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(arch.sizes[i]);
    out += Tag(arch.activations[i]);
  }
  return out;
}

ArchSpec DnnParams::arch() const {
  ArchSpec a;
  a.sizes.push_back(input_dim());
  a.activations.push_back(Activation::kLinear);
  for (const DnnLayer& l : layers) {
    a.sizes.push_back(l.weight.rows());
    a.activations.push_back(l.activation);
  }
  return a;
}

std::vector<Matrix*> DnnParams::matrices() {
  std::vector<Matrix*> out;
  for (DnnLayer& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<const Matrix*> DnnParams::matrices() const {
  std::vector<const Matrix*> out;
  for (const DnnLayer& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

void DnnParams::Validate() const {
  if (layers.empty()) throw DimensionError("DNN has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DnnLayer& l = layers[i];
    if (l.weight.rows() == 0 || l.weight.cols() == 0) {
      throw DimensionError("DNN layer " + std::to_string(i) +
                           " has empty weight");
    }
    if (l.bias.rows() != l.weight.rows() || l.bias.cols() != 1) {
      throw DimensionError("DNN layer " + std::to_string(i) + " bias " +
                           l.bias.ShapeString() + " vs weight " +
                           l.weight.ShapeString());
    }
    if (i > 0 && l.weight.cols() != layers[i - 1].weight.rows()) {
      throw DimensionError("DNN layer " + std::to_string(i) + " weight " +
                           l.weight.ShapeString() +
                           " does not chain with previous layer " +
                           layers[i - 1].weight.ShapeString());
    }
  }
  if (layers.back().activation != Activation::kLinear) {
    throw DimensionError("DNN output layer must be linear");
  }
}

DnnParams InitDnn(const ArchSpec& arch, Rng& rng) {
  if (arch.sizes.size() < 2) throw InvalidArgument("InitDnn: bad arch");
  DnnParams p;
  for (std::size_t i = 1; i < arch.sizes.size(); ++i) {
    const std::size_t fan_in = arch.sizes[i - 1];
    const Activation act = arch.activations[i];
    const double gain = act == Activation::kRelu ? 2.0 : 1.0;
    DnnLayer layer;
    layer.weight = GaussianMatrix(rng, arch.sizes[i], fan_in,
                                  gain / static_cast<double>(fan_in));
    layer.bias = Matrix(arch.sizes[i], 1);
    layer.activation = act;
    p.layers.push_back(std::move(layer));
  }
  return p;
}

DnnParams ZerosLike(const DnnParams& p) {
  DnnParams z = p;
  for (Matrix* m : z.matrices()) m->SetZero();
  return z;
}

Vector DnnForward(const DnnParams& p, std::span<const double> x) {
  p.Validate();
  if (x.size() != p.input_dim()) {
    throw DimensionError("DNN input of length " + std::to_string(x.size()) +
                         " for input dim " + std::to_string(p.input_dim()));
  }
  Vector cur(x.begin(), x.end());
  for (const DnnLayer& l : p.layers) {
    Vector next(l.bias.values().begin(), l.bias.values().end());
    MatVecAdd(l.weight, cur, next);
    Activate(l.activation, next);
    cur = std::move(next);
  }
  return cur;
}

DnnBackwardResult DnnBackward(const DnnParams& p, std::span<const double> x,
                              std::span<const double> target) {
  p.Validate();
  if (x.size() != p.input_dim() || target.size() != p.output_dim()) {
    throw DimensionError("DNN backward: input " + std::to_string(x.size()) +
                         ", target " + std::to_string(target.size()) +
                         " for net " + RenderArch(p.arch()));
  }
  // Activations per layer, index 0 being the input.
  std::vector<Vector> acts;
  acts.emplace_back(x.begin(), x.end());
  for (const DnnLayer& l : p.layers) {
    Vector next(l.bias.values().begin(), l.bias.values().end());
    MatVecAdd(l.weight, acts.back(), next);
    Activate(l.activation, next);
    acts.push_back(std::move(next));
  }

  DnnBackwardResult res;
  res.grads = ZerosLike(p);
  Vector delta(p.output_dim());
  const Vector& out = acts.back();
  for (std::size_t i = 0; i < delta.size(); ++i) {
    delta[i] = out[i] - target[i];
    res.loss += 0.5 * delta[i] * delta[i];
  }
  for (std::size_t li = p.layers.size(); li-- > 0;) {
    const DnnLayer& l = p.layers[li];
    if (l.activation == Activation::kRelu) {
      const Vector& a = acts[li + 1];
      for (std::size_t i = 0; i < delta.size(); ++i) {
        if (!(a[i] > 0.0)) delta[i] = 0.0;
      }
    }
    DnnLayer& gl = res.grads.layers[li];
    AddOuter(delta, acts[li], 1.0, gl.weight);
    Axpy(1.0, delta, gl.bias.values());
    if (li > 0) {
      Vector prev(l.weight.cols(), 0.0);
      MatTVecAdd(l.weight, delta, prev);
      delta = std::move(prev);
    }
  }
  return res;
}

}  // namespace rbn
