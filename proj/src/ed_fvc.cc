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

#include "rbn/ed_fvc.h"

#include <cmath>
#include <string>

#include "rbn/error.h"

namespace rbn {

namespace {

void CheckShape(const Matrix& m, std::size_t rows, std::size_t cols,
                std::string_view name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(std::string(name) + " is " + m.ShapeString() +
                         ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

void CheckContext(const EdFvcParams& p, std::span<const double> context) {
  if (context.size() != p.hidden_dim()) {
    throw DimensionError("context of length " +
                         std::to_string(context.size()) +
                         " for hidden size " +
                         std::to_string(p.hidden_dim()));
  }
}

void CheckFrames(const EdFvcParams& p, const Matrix& frames,
                 const char* what) {
  if (frames.cols() != p.feature_dim()) {
    throw DimensionError(std::string(what) + " " + frames.ShapeString() +
                         " for feature dim " +
                         std::to_string(p.feature_dim()));
  }
}

// Shared decoder loop. With `targets` non-null the previous output is taken
// from it (teacher forcing), otherwise from the model's own prediction.
DecoderTrace RunDecoder(const EdFvcParams& p, std::span<const double> context,
                        std::size_t num_frames, const Matrix* targets) {
  p.Validate();
  CheckContext(p, context);
  if (num_frames == 0) {
    throw InvalidArgument("decoder needs at least one output frame");
  }
  const std::size_t d = p.feature_dim();
  const std::size_t h = p.hidden_dim();

  DecoderTrace tr;
  tr.context.assign(context.begin(), context.end());
  tr.states = Matrix(num_frames, h);
  tr.outputs = Matrix(num_frames, d);
  tr.prev_outputs = Matrix(num_frames, d);
  tr.prev_source.resize(num_frames);

  // Context contributions are constant across steps.
  Vector state_bias = MatVec(p.dec_context, context);
  Vector out_bias = MatVec(p.out_context, context);

  Vector pre(h);
  for (std::size_t t = 0; t < num_frames; ++t) {
    std::span<double> prev = tr.prev_outputs.row(t);
    if (t == 0) {
      tr.prev_source[t] = PrevSource::kZero;
    } else if (targets != nullptr) {
      tr.prev_source[t] = PrevSource::kGroundTruth;
      auto src = targets->row(t - 1);
      std::copy(src.begin(), src.end(), prev.begin());
    } else {
      tr.prev_source[t] = PrevSource::kSelfPrediction;
      auto src = tr.outputs.row(t - 1);
      std::copy(src.begin(), src.end(), prev.begin());
    }
    std::span<const double> prev_state =
        t == 0 ? context : std::span<const double>(tr.states.row(t - 1));

    pre = state_bias;
    MatVecAdd(p.dec_input, prev, pre);
    MatVecAdd(p.dec_recurrent, prev_state, pre);
    std::span<double> s = tr.states.row(t);
    for (std::size_t i = 0; i < h; ++i) s[i] = std::tanh(pre[i]);

    std::span<double> y = tr.outputs.row(t);
    std::copy(out_bias.begin(), out_bias.end(), y.begin());
    MatVecAdd(p.out_state, s, y);
    MatVecAdd(p.out_prev, prev, y);
  }
  return tr;
}

}  // namespace

EdFvcParams EdFvcParams::Zeros(std::size_t feature_dim,
                               std::size_t hidden_dim) {
  const std::size_t d = feature_dim, h = hidden_dim;
  return EdFvcParams{Matrix(h, d), Matrix(h, h), Matrix(h, d), Matrix(h, h),
                     Matrix(h, h), Matrix(d, h), Matrix(d, d), Matrix(d, h)};
}

std::array<Matrix*, EdFvcParams::kNumMatrices> EdFvcParams::matrices() {
  return {&enc_input,   &enc_recurrent, &dec_input, &dec_recurrent,
          &dec_context, &out_state,     &out_prev,  &out_context};
}

std::array<const Matrix*, EdFvcParams::kNumMatrices> EdFvcParams::matrices()
    const {
  return {&enc_input,   &enc_recurrent, &dec_input, &dec_recurrent,
          &dec_context, &out_state,     &out_prev,  &out_context};
}

void EdFvcParams::Validate() const {
  const std::size_t d = feature_dim(), h = hidden_dim();
  if (d == 0 || h == 0) {
    throw DimensionError("encoder-decoder with empty dimension " +
                         enc_input.ShapeString());
  }
  const std::array<std::pair<std::size_t, std::size_t>, kNumMatrices> shapes =
      {{{h, d}, {h, h}, {h, d}, {h, h}, {h, h}, {d, h}, {d, d}, {d, h}}};
  auto mats = matrices();
  for (std::size_t i = 0; i < kNumMatrices; ++i) {
    CheckShape(*mats[i], shapes[i].first, shapes[i].second, kNames[i]);
  }
}

EdFvcParams InitEdFvc(std::size_t feature_dim, std::size_t hidden_dim,
                      Rng& rng, const EdFvcInit& init) {
  if (feature_dim == 0 || hidden_dim == 0) {
    throw InvalidArgument("InitEdFvc: dimensions must be >= 1");
  }
  if (!(init.in_variance > 0.0) || !(init.out_variance > 0.0)) {
    throw InvalidArgument("InitEdFvc: variances must be positive");
  }
  const std::size_t d = feature_dim, h = hidden_dim;
  auto recurrent = [&](bool identity) {
    return identity ? Matrix::Identity(h)
                    : GaussianMatrix(rng, h, h, init.in_variance);
  };
  // Draw order is fixed so a seed always yields the same parameters.
  EdFvcParams p;
  p.enc_input = GaussianMatrix(rng, h, d, init.in_variance);
  p.enc_recurrent = recurrent(init.identity_enc_recurrent);
  p.dec_input = GaussianMatrix(rng, h, d, init.in_variance);
  p.dec_recurrent = recurrent(init.identity_dec_recurrent);
  p.dec_context = recurrent(init.identity_dec_context);
  p.out_state = GaussianMatrix(rng, d, h, init.out_variance);
  p.out_prev = GaussianMatrix(rng, d, d, init.out_variance);
  p.out_context = GaussianMatrix(rng, d, h, init.out_variance);
  return p;
}

EncoderOutput Encode(const EdFvcParams& p, const Matrix& inputs) {
  p.Validate();
  if (inputs.rows() == 0) throw InvalidArgument("Encode: empty sequence");
  CheckFrames(p, inputs, "Encode: input");
  const std::size_t h = p.hidden_dim();
  EncoderOutput out;
  out.states = Matrix(inputs.rows(), h);
  Vector pre(h);
  for (std::size_t t = 0; t < inputs.rows(); ++t) {
    std::fill(pre.begin(), pre.end(), 0.0);
    MatVecAdd(p.enc_input, inputs.row(t), pre);
    if (t > 0) MatVecAdd(p.enc_recurrent, out.states.row(t - 1), pre);
    std::span<double> st = out.states.row(t);
    for (std::size_t i = 0; i < h; ++i) st[i] = std::tanh(pre[i]);
  }
  auto last = out.states.row(inputs.rows() - 1);
  out.context.assign(last.begin(), last.end());
  return out;
}

DecoderTrace DecodeTeacherForced(const EdFvcParams& p,
                                 std::span<const double> context,
                                 const Matrix& targets) {
  CheckFrames(p, targets, "DecodeTeacherForced: targets");
  return RunDecoder(p, context, targets.rows(), &targets);
}

DecoderTrace DecodeFreeRunningTrace(const EdFvcParams& p,
                                    std::span<const double> context,
                                    std::size_t num_frames) {
  return RunDecoder(p, context, num_frames, nullptr);
}

Matrix DecodeFreeRunning(const EdFvcParams& p, std::span<const double> context,
                         std::size_t num_frames) {
  return RunDecoder(p, context, num_frames, nullptr).outputs;
}

ForwardTrace Forward(const EdFvcParams& p, const Matrix& inputs,
                     const Matrix& targets, DecodeMode mode) {
  ForwardTrace tr;
  tr.inputs = inputs;
  tr.encoder = Encode(p, inputs);
  tr.decoder = mode == DecodeMode::kTeacherForced
                   ? DecodeTeacherForced(p, tr.encoder.context, targets)
                   : DecodeFreeRunningTrace(p, tr.encoder.context,
                                            targets.rows());
  return tr;
}

double SequenceLoss(const Matrix& outputs, const Matrix& targets) {
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
    throw DimensionError("loss: outputs " + outputs.ShapeString() +
                         " vs targets " + targets.ShapeString());
  }
  double sum = 0.0;
  auto a = outputs.values();
  auto b = targets.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    sum += e * e;
  }
  return 0.5 * sum;
}

BackwardResult Backward(const EdFvcParams& p, const ForwardTrace& trace,
                        const Matrix& targets) {
  p.Validate();
  const DecoderTrace& dec = trace.decoder;
  const EncoderOutput& enc = trace.encoder;
  const std::size_t d = p.feature_dim();
  const std::size_t h = p.hidden_dim();
  const std::size_t num_out = dec.outputs.rows();
  const std::size_t num_in = trace.inputs.rows();
  if (targets.rows() != num_out || targets.cols() != d) {
    throw DimensionError("Backward: targets " + targets.ShapeString() +
                         " vs decoder outputs " + dec.outputs.ShapeString());
  }
  if (num_in == 0 || enc.states.rows() != num_in || enc.states.cols() != h ||
      dec.states.rows() != num_out || dec.context.size() != h ||
      dec.prev_source.size() != num_out) {
    throw DimensionError("Backward: inconsistent forward trace");
  }

  BackwardResult res;
  res.grads = EdFvcGradients::Zeros(d, h);
  EdFvcGradients& g = res.grads;
  res.loss = SequenceLoss(dec.outputs, targets);
  res.context_grad.assign(h, 0.0);
  std::span<const double> c = dec.context;

  // Deltas of the step after the current one; zero beyond the last step.
  Vector delta_y_next(d, 0.0), delta_s_next(h, 0.0);
  Vector delta_y(d), grad_s(h), delta_s(h);
  for (std::size_t t = num_out; t-- > 0;) {
    // Output error: injected error plus, when step t+1 consumed this output
    // as its previous frame, the error flowing back through that input.
    auto y = dec.outputs.row(t);
    auto dt = targets.row(t);
    for (std::size_t i = 0; i < d; ++i) delta_y[i] = y[i] - dt[i];
    if (t + 1 < num_out &&
        dec.prev_source[t + 1] == PrevSource::kSelfPrediction) {
      MatTVecAdd(p.dec_input, delta_s_next, delta_y);
      MatTVecAdd(p.out_prev, delta_y_next, delta_y);
    }

    // State error.
    std::fill(grad_s.begin(), grad_s.end(), 0.0);
    MatTVecAdd(p.out_state, delta_y, grad_s);
    if (t + 1 < num_out) MatTVecAdd(p.dec_recurrent, delta_s_next, grad_s);
    auto s = dec.states.row(t);
    for (std::size_t i = 0; i < h; ++i) {
      delta_s[i] = (1.0 - s[i] * s[i]) * grad_s[i];
    }

    auto prev = dec.prev_outputs.row(t);
    std::span<const double> prev_state =
        t == 0 ? c : std::span<const double>(dec.states.row(t - 1));
    AddOuter(delta_y, s, 1.0, g.out_state);
    AddOuter(delta_y, prev, 1.0, g.out_prev);
    AddOuter(delta_y, c, 1.0, g.out_context);
    AddOuter(delta_s, prev, 1.0, g.dec_input);
    AddOuter(delta_s, prev_state, 1.0, g.dec_recurrent);
    AddOuter(delta_s, c, 1.0, g.dec_context);

    MatTVecAdd(p.out_context, delta_y, res.context_grad);
    MatTVecAdd(p.dec_context, delta_s, res.context_grad);

    delta_y_next = delta_y;
    delta_s_next = delta_s;
  }
  // The context is also the initial decoder state.
  MatTVecAdd(p.dec_recurrent, delta_s_next, res.context_grad);

  // Encoder: the context gradient is injected at the final state only.
  res.encoder_injected = Matrix(num_in, h);
  res.encoder_state_grads = Matrix(num_in, h);
  {
    auto inj = res.encoder_injected.row(num_in - 1);
    std::copy(res.context_grad.begin(), res.context_grad.end(), inj.begin());
  }
  Vector delta_h_next(h, 0.0), grad_h(h), delta_h(h);
  for (std::size_t t = num_in; t-- > 0;) {
    auto inj = res.encoder_injected.row(t);
    grad_h.assign(inj.begin(), inj.end());
    if (t + 1 < num_in) MatTVecAdd(p.enc_recurrent, delta_h_next, grad_h);
    auto total = res.encoder_state_grads.row(t);
    std::copy(grad_h.begin(), grad_h.end(), total.begin());

    auto hs = enc.states.row(t);
    for (std::size_t i = 0; i < h; ++i) {
      delta_h[i] = (1.0 - hs[i] * hs[i]) * grad_h[i];
    }
    AddOuter(delta_h, trace.inputs.row(t), 1.0, g.enc_input);
    if (t > 0) AddOuter(delta_h, enc.states.row(t - 1), 1.0, g.enc_recurrent);
    delta_h_next = delta_h;
  }
  return res;
}

Reconstruction Autoencode(const EdFvcParams& p, const Matrix& inputs,
                          DecodeMode mode) {
  EncoderOutput enc = Encode(p, inputs);
  Matrix outputs =
      mode == DecodeMode::kTeacherForced
          ? DecodeTeacherForced(p, enc.context, inputs).outputs
          : DecodeFreeRunning(p, enc.context, inputs.rows());
  return {std::move(outputs), std::move(enc.context)};
}

}  // namespace rbn
