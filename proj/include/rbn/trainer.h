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

#ifndef RBN_TRAINER_H_
#define RBN_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rbn/ed_fvc.h"
#include "rbn/features.h"
#include "rbn/ffdnn.h"

namespace rbn {

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 50;
  // Global-norm clipping threshold.
  double clip_norm = 5.0;
  std::uint64_t seed = 1;
  // Epochs without validation improvement before the rate is halved.
  std::size_t lr_halving_patience = 3;
  // Epochs without validation improvement before training stops.
  std::size_t early_stop_patience = 10;
  // Gradient workers. Reduction runs in unit order, so results do not
  // depend on this value.
  std::size_t workers = 1;

  void Validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double learning_rate = 0.0;

  bool operator==(const EpochRecord&) const = default;
};

// Epoch 0 evaluates the initial parameters; later epochs report the mean
// minibatch loss seen while training and the validation loss afterwards.
struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;

  // One JSON object per line: epoch, learning_rate, train_loss, val_loss.
  std::string ToText() const;
};

// Clips `grads` in place to global norm <= clip_norm. Returns the norm
// before clipping. Gradients already within the limit are left untouched.
double ClipGlobalNorm(std::span<Matrix* const> grads, double clip_norm);

// Partitions unit indices into minibatches of units with similar lengths.
// Every index appears exactly once.
std::vector<std::vector<std::size_t>> MakeLengthBuckets(
    std::span<const std::size_t> lengths, std::size_t batch_size, Rng& rng);

// Runs fn(i) for i in [0, n) over `workers` threads.
void ParallelFor(std::size_t n, std::size_t workers,
                 const std::function<void(std::size_t)>& fn);

struct RaeModelConfig {
  std::size_t hidden_dim = 500;
  EdFvcInit init;
};

struct RaeTrainResult {
  EdFvcParams params;
  TrainReport report;
};

// Per-unit teacher-forced loss 0.5 * sum ||y - d||^2 / (T * D), averaged
// over the corpus.
double RaeCorpusLoss(const EdFvcParams& p, const Corpus& corpus,
                     std::size_t workers = 1);

// Trains from parameters initialised with `model` under config.seed.
RaeTrainResult TrainRae(const Corpus& train, const Corpus& val,
                        const RaeModelConfig& model,
                        const TrainConfig& config);
// Trains from the given starting parameters.
RaeTrainResult TrainRae(const Corpus& train, const Corpus& val,
                        EdFvcParams initial, const TrainConfig& config);

struct DnnTrainResult {
  DnnParams params;
  TrainReport report;
};

// Per-row loss 0.5 * ||f(x) - t||^2 / output_dim, averaged over rows.
double DnnDatasetLoss(const DnnParams& p, const Matrix& inputs,
                      const Matrix& targets, std::size_t workers = 1);

DnnTrainResult TrainDnn(const Matrix& inputs, const Matrix& targets,
                        const Matrix& val_inputs, const Matrix& val_targets,
                        const ArchSpec& arch, const TrainConfig& config);
DnnTrainResult TrainDnn(const Matrix& inputs, const Matrix& targets,
                        const Matrix& val_inputs, const Matrix& val_targets,
                        DnnParams initial, const TrainConfig& config);

// Encodes each unit and keeps (context, frame count), in corpus order.
std::vector<RbnRecord> ExtractRbn(const EdFvcParams& p, const Corpus& corpus);

// Stacks RBN vectors as a regression target matrix (N x H).
Matrix RbnMatrix(const std::vector<RbnRecord>& records);

// Frame-level regression set: each unit's text row repeated over its
// frames (plus position column if requested) against the frames.
struct FrameDataset {
  Matrix inputs;
  Matrix targets;
};
FrameDataset BuildFrameDataset(const TextFeatureTable& text,
                               const Corpus& corpus, bool append_position);

// Unit-level synthesis: text -> predicted RBN -> free-running decode for
// the given durations.
Corpus SynthPipeline(const DnnParams& dnn, const EdFvcParams& rae,
                     const TextFeatureTable& text,
                     std::span<const std::size_t> durations);

// Frame-level baseline synthesis: the DNN maps upsampled text to frames.
Corpus FrameLevelSynth(const DnnParams& dnn, const TextFeatureTable& text,
                       std::span<const std::size_t> durations,
                       bool append_position);

std::vector<std::size_t> Durations(const Corpus& corpus);

}  // namespace rbn

#endif  // RBN_TRAINER_H_
