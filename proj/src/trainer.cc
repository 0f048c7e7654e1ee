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

#include "rbn/trainer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "rbn/error.h"

namespace rbn {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;

template <typename Params>
void AddInto(Params& acc, const Params& g) {
  auto dst = acc.matrices();
  auto src = g.matrices();
  for (std::size_t m = 0; m < dst.size(); ++m) {
    Axpy(1.0, src[m]->values(), dst[m]->values());
  }
}

template <typename Params>
void ScaleParams(Params& p, double factor) {
  auto mats = p.matrices();
  ScaleAll(std::span<Matrix* const>(mats.data(), mats.size()), factor);
}

// Shared minibatch SGD loop.
//   make_batches(rng)            -> minibatches of sample indices
//   sample(params, idx, grad)    -> normalised loss; fills grad
//   eval_train / eval_val(params) -> dataset loss
template <typename Params, typename BatchFn, typename SampleFn,
          typename EvalFn>
TrainReport RunSgd(Params& params, const TrainConfig& cfg, BatchFn make_batches,
                   SampleFn sample, EvalFn eval_train, EvalFn eval_val) {
  Rng shuffle = Rng::Derive(cfg.seed, kShuffleStream);
  TrainReport report;
  double lr = cfg.learning_rate;
  const double init_train = eval_train(params);
  const double init_val = eval_val(params);
  if (!std::isfinite(init_train) || !std::isfinite(init_val)) {
    throw DivergenceError("non-finite loss at initialisation (epoch 0)");
  }
  report.epochs.push_back({0, init_train, init_val, lr});

  Params best = params;
  double best_val = init_val;
  std::size_t since_improve = 0, since_halve = 0;
  std::vector<Params> slots;
  std::vector<double> losses;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const std::vector<std::vector<std::size_t>> batches =
        make_batches(shuffle);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const std::vector<std::size_t>& batch = batches[b];
      slots.resize(batch.size());
      losses.assign(batch.size(), 0.0);
      ParallelFor(batch.size(), cfg.workers, [&](std::size_t i) {
        losses[i] = sample(params, batch[i], slots[i]);
      });
      for (std::size_t i = 0; i < batch.size(); ++i) {
        if (!std::isfinite(losses[i])) {
          throw DivergenceError("non-finite loss at epoch " +
                                std::to_string(epoch) + ", batch " +
                                std::to_string(b) + " (sample " +
                                std::to_string(batch[i]) + ")");
        }
        loss_sum += losses[i];
      }
      seen += batch.size();

      Params& grad = slots[0];
      for (std::size_t i = 1; i < batch.size(); ++i) AddInto(grad, slots[i]);
      ScaleParams(grad, 1.0 / static_cast<double>(batch.size()));
      auto gm = grad.matrices();
      const double norm = ClipGlobalNorm(
          std::span<Matrix* const>(gm.data(), gm.size()), cfg.clip_norm);
      if (!std::isfinite(norm)) {
        throw DivergenceError("non-finite gradient at epoch " +
                              std::to_string(epoch) + ", batch " +
                              std::to_string(b));
      }
      if (lr != 0.0) {
        auto pm = params.matrices();
        for (std::size_t m = 0; m < pm.size(); ++m) {
          Axpy(-lr, gm[m]->values(), pm[m]->values());
        }
      }
    }
    const double train_loss =
        seen > 0 ? loss_sum / static_cast<double>(seen) : 0.0;
    const double val_loss = eval_val(params);
    if (!std::isfinite(val_loss)) {
      throw DivergenceError("non-finite validation loss at epoch " +
                            std::to_string(epoch));
    }
    report.epochs.push_back({epoch, train_loss, val_loss, lr});

    if (val_loss < best_val) {
      best_val = val_loss;
      best = params;
      report.best_epoch = epoch;
      since_improve = since_halve = 0;
    } else {
      ++since_improve;
      if (++since_halve >= cfg.lr_halving_patience) {
        lr *= 0.5;
        since_halve = 0;
      }
      if (since_improve >= cfg.early_stop_patience) break;
    }
  }
  params = std::move(best);
  return report;
}

void CheckDim(const Corpus& c, std::size_t dim, const char* what) {
  c.Validate();
  if (!c.units.empty() && c.dim != dim) {
    throw DimensionError(std::string(what) + " corpus has dimension " +
                         std::to_string(c.dim) + ", model expects " +
                         std::to_string(dim));
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning rate must be finite and >= 0");
  }
  if (batch_size == 0) throw InvalidArgument("batch size must be >= 1");
  if (!(clip_norm > 0.0)) throw InvalidArgument("clip norm must be > 0");
  if (lr_halving_patience == 0 || early_stop_patience == 0) {
    throw InvalidArgument("patience values must be >= 1");
  }
}

std::string TrainReport::ToText() const {
  std::string out;
  for (const EpochRecord& r : epochs) {
    nlohmann::json j;
    j["epoch"] = r.epoch;
    j["train_loss"] = r.train_loss;
    j["val_loss"] = r.val_loss;
    j["learning_rate"] = r.learning_rate;
    j["best"] = r.epoch == best_epoch;
    out += j.dump();
    out += '\n';
  }
  return out;
}

double ClipGlobalNorm(std::span<Matrix* const> grads, double clip_norm) {
  std::vector<const Matrix*> view(grads.begin(), grads.end());
  const double norm = GlobalNorm(view);
  if (norm > clip_norm) ScaleAll(grads, clip_norm / norm);
  return norm;
}

std::vector<std::vector<std::size_t>> MakeLengthBuckets(
    std::span<const std::size_t> lengths, std::size_t batch_size, Rng& rng) {
  if (batch_size == 0) throw InvalidArgument("batch size must be >= 1");
  std::vector<std::size_t> order = RandomPermutation(rng, lengths.size());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return lengths[a] < lengths[b];
                   });
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t i = 0; i < order.size(); i += batch_size) {
    const std::size_t end = std::min(order.size(), i + batch_size);
    batches.emplace_back(order.begin() + i, order.begin() + end);
  }
  std::vector<std::size_t> batch_order =
      RandomPermutation(rng, batches.size());
  std::vector<std::vector<std::size_t>> shuffled;
  shuffled.reserve(batches.size());
  for (std::size_t i : batch_order) shuffled.push_back(std::move(batches[i]));
  return shuffled;
}

void ParallelFor(std::size_t n, std::size_t workers,
                 const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    const std::size_t count = std::min(workers, n);
    for (std::size_t w = 0; w < count; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

double RaeCorpusLoss(const EdFvcParams& p, const Corpus& corpus,
                     std::size_t workers) {
  CheckDim(corpus, p.feature_dim(), "evaluation");
  if (corpus.units.empty()) return 0.0;
  std::vector<double> losses(corpus.units.size());
  ParallelFor(losses.size(), workers, [&](std::size_t i) {
    const Matrix& x = corpus.units[i].frames;
    const EncoderOutput enc = Encode(p, x);
    const DecoderTrace dec = DecodeTeacherForced(p, enc.context, x);
    losses[i] = SequenceLoss(dec.outputs, x) /
                static_cast<double>(x.rows() * x.cols());
  });
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

RaeTrainResult TrainRae(const Corpus& train, const Corpus& val,
                        const RaeModelConfig& model,
                        const TrainConfig& config) {
  Rng rng = Rng::Derive(config.seed, kInitStream);
  return TrainRae(train, val,
                  InitEdFvc(train.dim, model.hidden_dim, rng, model.init),
                  config);
}

RaeTrainResult TrainRae(const Corpus& train, const Corpus& val,
                        EdFvcParams initial, const TrainConfig& config) {
  config.Validate();
  initial.Validate();
  CheckDim(train, initial.feature_dim(), "training");
  CheckDim(val, initial.feature_dim(), "validation");
  if (train.units.empty()) throw InvalidArgument("empty training corpus");

  const std::vector<std::size_t> lengths = Durations(train);
  auto batches = [&](Rng& rng) {
    return MakeLengthBuckets(lengths, config.batch_size, rng);
  };
  auto sample = [&](const EdFvcParams& p, std::size_t idx,
                    EdFvcParams& grad) {
    const Matrix& x = train.units[idx].frames;
    const ForwardTrace tr = Forward(p, x, x, DecodeMode::kTeacherForced);
    BackwardResult res = Backward(p, tr, x);
    const double norm = 1.0 / static_cast<double>(x.rows() * x.cols());
    grad = std::move(res.grads);
    ScaleParams(grad, norm);
    return res.loss * norm;
  };
  auto eval_train = [&](const EdFvcParams& p) {
    return RaeCorpusLoss(p, train, config.workers);
  };
  auto eval_val = [&](const EdFvcParams& p) {
    return val.units.empty() ? RaeCorpusLoss(p, train, config.workers)
                             : RaeCorpusLoss(p, val, config.workers);
  };
  using EvalFn = std::function<double(const EdFvcParams&)>;
  RaeTrainResult result{std::move(initial), {}};
  result.report = RunSgd<EdFvcParams>(result.params, config, batches, sample,
                                      EvalFn(eval_train), EvalFn(eval_val));
  return result;
}

double DnnDatasetLoss(const DnnParams& p, const Matrix& inputs,
                      const Matrix& targets, std::size_t workers) {
  if (inputs.rows() != targets.rows()) {
    throw DimensionError("DNN dataset: " + std::to_string(inputs.rows()) +
                         " inputs vs " + std::to_string(targets.rows()) +
                         " targets");
  }
  if (inputs.rows() == 0) return 0.0;
  std::vector<double> losses(inputs.rows());
  ParallelFor(losses.size(), workers, [&](std::size_t i) {
    const Vector y = DnnForward(p, inputs.row(i));
    auto t = targets.row(i);
    if (t.size() != y.size()) {
      throw DimensionError("DNN dataset: target width " +
                           std::to_string(t.size()) + " vs output " +
                           std::to_string(y.size()));
    }
    double s = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      s += (y[j] - t[j]) * (y[j] - t[j]);
    }
    losses[i] = 0.5 * s / static_cast<double>(y.size());
  });
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

DnnTrainResult TrainDnn(const Matrix& inputs, const Matrix& targets,
                        const Matrix& val_inputs, const Matrix& val_targets,
                        const ArchSpec& arch, const TrainConfig& config) {
  Rng rng = Rng::Derive(config.seed, kInitStream);
  return TrainDnn(inputs, targets, val_inputs, val_targets,
                  InitDnn(arch, rng), config);
}

DnnTrainResult TrainDnn(const Matrix& inputs, const Matrix& targets,
                        const Matrix& val_inputs, const Matrix& val_targets,
                        DnnParams initial, const TrainConfig& config) {
  config.Validate();
  initial.Validate();
  if (inputs.rows() == 0) throw InvalidArgument("empty DNN training set");
  if (inputs.rows() != targets.rows() ||
      val_inputs.rows() != val_targets.rows()) {
    throw DimensionError("DNN inputs and targets are not row-aligned");
  }
  if (inputs.cols() != initial.input_dim() ||
      targets.cols() != initial.output_dim() ||
      (val_inputs.rows() > 0 && (val_inputs.cols() != initial.input_dim() ||
                                 val_targets.cols() != initial.output_dim()))) {
    throw DimensionError("DNN data " + inputs.ShapeString() + " -> " +
                         targets.ShapeString() + " does not fit net " +
                         RenderArch(initial.arch()));
  }
  const double out_dim = static_cast<double>(initial.output_dim());
  auto batches = [&](Rng& rng) {
    const std::vector<std::size_t> order =
        RandomPermutation(rng, inputs.rows());
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < order.size(); i += config.batch_size) {
      const std::size_t end = std::min(order.size(), i + config.batch_size);
      out.emplace_back(order.begin() + i, order.begin() + end);
    }
    return out;
  };
  auto sample = [&](const DnnParams& p, std::size_t idx, DnnParams& grad) {
    DnnBackwardResult res = DnnBackward(p, inputs.row(idx), targets.row(idx));
    grad = std::move(res.grads);
    ScaleParams(grad, 1.0 / out_dim);
    return res.loss / out_dim;
  };
  auto eval_train = [&](const DnnParams& p) {
    return DnnDatasetLoss(p, inputs, targets, config.workers);
  };
  auto eval_val = [&](const DnnParams& p) {
    return val_inputs.rows() == 0
               ? DnnDatasetLoss(p, inputs, targets, config.workers)
               : DnnDatasetLoss(p, val_inputs, val_targets, config.workers);
  };
  using EvalFn = std::function<double(const DnnParams&)>;
  DnnTrainResult result{std::move(initial), {}};
  result.report = RunSgd<DnnParams>(result.params, config, batches, sample,
                                    EvalFn(eval_train), EvalFn(eval_val));
  return result;
}

std::vector<RbnRecord> ExtractRbn(const EdFvcParams& p, const Corpus& corpus) {
  CheckDim(corpus, p.feature_dim(), "RBN extraction");
  std::vector<RbnRecord> out;
  out.reserve(corpus.units.size());
  for (const UnitSequence& u : corpus.units) {
    out.push_back({Encode(p, u.frames).context,
                   static_cast<std::uint32_t>(u.num_frames())});
  }
  return out;
}

Matrix RbnMatrix(const std::vector<RbnRecord>& records) {
  Matrix m;
  for (const RbnRecord& r : records) m.AppendRow(r.context);
  return m;
}

FrameDataset BuildFrameDataset(const TextFeatureTable& text,
                               const Corpus& corpus, bool append_position) {
  corpus.Validate();
  if (text.num_units() != corpus.num_units()) {
    throw DimensionError("text table has " +
                         std::to_string(text.num_units()) +
                         " rows for a corpus of " +
                         std::to_string(corpus.num_units()) + " units");
  }
  FrameDataset ds;
  const std::size_t in_cols = text.dim() + (append_position ? 1 : 0);
  const std::size_t total = corpus.total_frames();
  ds.inputs = Matrix(total, in_cols);
  ds.targets = Matrix(total, corpus.dim);
  std::size_t row = 0;
  for (std::size_t i = 0; i < corpus.units.size(); ++i) {
    const Matrix& frames = corpus.units[i].frames;
    const Matrix up =
        UpsampleText(text.rows.row(i), frames.rows(), append_position);
    for (std::size_t t = 0; t < frames.rows(); ++t, ++row) {
      std::ranges::copy(up.row(t), ds.inputs.row(row).begin());
      std::ranges::copy(frames.row(t), ds.targets.row(row).begin());
    }
  }
  return ds;
}

Corpus SynthPipeline(const DnnParams& dnn, const EdFvcParams& rae,
                     const TextFeatureTable& text,
                     std::span<const std::size_t> durations) {
  dnn.Validate();
  rae.Validate();
  if (dnn.output_dim() != rae.hidden_dim()) {
    throw DimensionError("DNN predicts " + std::to_string(dnn.output_dim()) +
                         "-dim RBNs but the decoder context is " +
                         std::to_string(rae.hidden_dim()));
  }
  if (durations.size() != text.num_units()) {
    throw DimensionError(std::to_string(durations.size()) +
                         " durations for " + std::to_string(text.num_units()) +
                         " text rows");
  }
  Corpus out;
  out.dim = rae.feature_dim();
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const Vector rbn = DnnForward(dnn, text.rows.row(i));
    out.units.push_back({0, DecodeFreeRunning(rae, rbn, durations[i])});
  }
  return out;
}

Corpus FrameLevelSynth(const DnnParams& dnn, const TextFeatureTable& text,
                       std::span<const std::size_t> durations,
                       bool append_position) {
  dnn.Validate();
  if (durations.size() != text.num_units()) {
    throw DimensionError(std::to_string(durations.size()) +
                         " durations for " + std::to_string(text.num_units()) +
                         " text rows");
  }
  Corpus out;
  out.dim = dnn.output_dim();
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const Matrix up =
        UpsampleText(text.rows.row(i), durations[i], append_position);
    Matrix frames(durations[i], out.dim);
    for (std::size_t t = 0; t < durations[i]; ++t) {
      const Vector y = DnnForward(dnn, up.row(t));
      std::ranges::copy(y, frames.row(t).begin());
    }
    out.units.push_back({0, std::move(frames)});
  }
  return out;
}

std::vector<std::size_t> Durations(const Corpus& corpus) {
  std::vector<std::size_t> d;
  d.reserve(corpus.units.size());
  for (const UnitSequence& u : corpus.units) d.push_back(u.num_frames());
  return d;
}

}  // namespace rbn
