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

#ifndef RBN_ED_FVC_H_
#define RBN_ED_FVC_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rbn/linalg.h"

namespace rbn {

// Weights of the recurrent encoder-decoder with a fixed-vector context.
//
// With D the frame dimension and H the hidden size, the forward recursions
// are
//   encoder:  h_t = tanh(enc_input x_t + enc_recurrent h_{t-1}),  h_0 = 0
//   context:  c   = h_T,   s_0 = c
//   decoder:  s_t = tanh(dec_input y_{t-1} + dec_recurrent s_{t-1}
//                        + dec_context c)
//             y_t = out_state s_t + out_prev y_{t-1} + out_context c
// where y_{t-1} is the previous frame (ground truth while teacher forcing,
// the model's own prediction when free running) and y_0 = 0.
struct EdFvcParams {
  Matrix enc_input;      // H x D
  Matrix enc_recurrent;  // H x H
  Matrix dec_input;      // H x D
  Matrix dec_recurrent;  // H x H
  Matrix dec_context;    // H x H
  Matrix out_state;      // D x H
  Matrix out_prev;       // D x D
  Matrix out_context;    // D x H

  static constexpr std::size_t kNumMatrices = 8;
  // Matrix names in storage order; also the checkpoint names.
  static constexpr std::array<std::string_view, kNumMatrices> kNames = {
      "enc_input",   "enc_recurrent", "dec_input", "dec_recurrent",
      "dec_context", "out_state",     "out_prev",  "out_context"};

  static EdFvcParams Zeros(std::size_t feature_dim, std::size_t hidden_dim);

  std::size_t feature_dim() const { return enc_input.cols(); }
  std::size_t hidden_dim() const { return enc_input.rows(); }

  std::array<Matrix*, kNumMatrices> matrices();
  std::array<const Matrix*, kNumMatrices> matrices() const;

  // Throws DimensionError unless every matrix has the shape implied by
  // (feature_dim, hidden_dim).
  void Validate() const;

  bool operator==(const EdFvcParams&) const = default;
};

// Gradients share the parameter layout.
using EdFvcGradients = EdFvcParams;

struct EdFvcInit {
  double in_variance = 0.01;
  double out_variance = 0.01;
  // Square recurrent-path matrices start at identity unless switched off,
  // in which case they are Gaussian with in_variance.
  bool identity_enc_recurrent = true;
  bool identity_dec_recurrent = true;
  bool identity_dec_context = true;
};

EdFvcParams InitEdFvc(std::size_t feature_dim, std::size_t hidden_dim,
                      Rng& rng, const EdFvcInit& init = {});

enum class DecodeMode { kTeacherForced, kFreeRunning };

// Where the decoder's previous-output input came from at a step.
enum class PrevSource : std::uint8_t { kZero, kGroundTruth, kSelfPrediction };

struct EncoderOutput {
  Matrix states;   // T_x x H
  Vector context;  // H, equal to the last row of states
};

struct DecoderTrace {
  Vector context;       // H
  Matrix states;        // T x H
  Matrix outputs;       // T x D
  Matrix prev_outputs;  // T x D, the y_{t-1} fed at each step
  std::vector<PrevSource> prev_source;
};

struct ForwardTrace {
  Matrix inputs;  // T_x x D
  EncoderOutput encoder;
  DecoderTrace decoder;
};

EncoderOutput Encode(const EdFvcParams& p, const Matrix& inputs);

DecoderTrace DecodeTeacherForced(const EdFvcParams& p,
                                 std::span<const double> context,
                                 const Matrix& targets);
DecoderTrace DecodeFreeRunningTrace(const EdFvcParams& p,
                                    std::span<const double> context,
                                    std::size_t num_frames);
Matrix DecodeFreeRunning(const EdFvcParams& p, std::span<const double> context,
                         std::size_t num_frames);

// Encode `inputs`, then decode. Teacher forcing conditions on `targets`;
// free running only uses targets.rows() as the frame count.
ForwardTrace Forward(const EdFvcParams& p, const Matrix& inputs,
                     const Matrix& targets, DecodeMode mode);

// 0.5 * sum_t ||y_t - d_t||^2.
double SequenceLoss(const Matrix& outputs, const Matrix& targets);

struct BackwardResult {
  EdFvcGradients grads;
  double loss = 0.0;
  // dL/dc over every path into the context: the output and state context
  // connections at each decoder step plus the initial decoder state.
  Vector context_grad;
  // Error injected directly into each encoder state (T_x x H). Only the
  // final row is non-zero; it equals context_grad.
  Matrix encoder_injected;
  // Total dL/dh_t for each encoder state (T_x x H).
  Matrix encoder_state_grads;
};

// Exact gradients of SequenceLoss(trace outputs, targets) with respect to
// every weight. Steps whose previous output was the model's own prediction
// also propagate error back through that prediction.
BackwardResult Backward(const EdFvcParams& p, const ForwardTrace& trace,
                        const Matrix& targets);

struct Reconstruction {
  Matrix outputs;
  Vector context;
};

// Encodes a unit and reconstructs it with the same frame count.
Reconstruction Autoencode(const EdFvcParams& p, const Matrix& inputs,
                          DecodeMode mode);

}  // namespace rbn

#endif  // RBN_ED_FVC_H_
