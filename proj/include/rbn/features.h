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

#ifndef RBN_FEATURES_H_
#define RBN_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rbn/linalg.h"

namespace rbn {

// One phone-sized unit: T frames of D acoustic parameters (5 ms shift).
struct UnitSequence {
  std::uint32_t label_id = 0;
  Matrix frames;  // T x D

  std::size_t num_frames() const { return frames.rows(); }
  bool operator==(const UnitSequence&) const = default;
};

enum class Split { kTrain, kValidation, kTest };

// Per-dimension range used by the [0.01, 0.99] normalisation.
struct MinMaxStats {
  Vector min;
  Vector max;

  std::size_t dim() const { return min.size(); }
  bool operator==(const MinMaxStats&) const = default;
};

struct Corpus {
  std::size_t dim = 0;
  std::vector<UnitSequence> units;
  Split split = Split::kTrain;
  // Static dimensions when delta features have been appended (dim is then
  // 3 * static_dim); nullopt for static-only corpora.
  std::optional<std::size_t> delta_static_dim;
  std::optional<MinMaxStats> stats;

  std::size_t num_units() const { return units.size(); }
  std::size_t total_frames() const;
  // Throws InconsistentDimensionError if a unit disagrees with `dim` or is
  // empty.
  void Validate() const;
};

// Per-unit context vectors aligned 1:1 with corpus units.
struct TextFeatureTable {
  Matrix rows;  // N x dim

  std::size_t dim() const { return rows.cols(); }
  std::size_t num_units() const { return rows.rows(); }
  bool operator==(const TextFeatureTable&) const = default;
};

// Fixed-dimensional bottleneck vector of a unit plus its frame count.
struct RbnRecord {
  Vector context;
  std::uint32_t num_frames = 0;

  bool operator==(const RbnRecord&) const = default;
};

inline constexpr std::size_t kDefaultTextDim = 345;
inline constexpr double kNormLow = 0.01;
inline constexpr double kNormHigh = 0.99;

// Appends delta (-0.5, 0, 0.5) and double-delta (0.25, -0.5, 0.25)
// regression features, replicating the edge frames at the boundaries.
// T x D -> T x 3D.
Matrix ComputeDeltas(const Matrix& frames);
// Corpus-level version; rejects a corpus that already carries deltas.
Corpus WithDeltas(const Corpus& corpus);
// Drops delta columns, keeping the first `static_dim` of each frame.
Corpus StripDeltas(const Corpus& corpus, std::size_t static_dim);

// Fits on a training split only.
MinMaxStats FitMinMax(const Corpus& corpus);
// Affine map sending train min -> 0.01 and train max -> 0.99 per dimension.
// Constant dimensions map to 0.5. Out-of-range values extrapolate.
Matrix ApplyMinMax(const Matrix& frames, const MinMaxStats& stats);
// Inverse of ApplyMinMax; constant dimensions map back to their value.
Matrix InvertMinMax(const Matrix& frames, const MinMaxStats& stats);
Corpus ApplyMinMax(const Corpus& corpus, const MinMaxStats& stats);
Corpus InvertMinMax(const Corpus& corpus, const MinMaxStats& stats);

// Repeats a unit's text vector for each of its frames, optionally with a
// trailing frame-position coordinate (t + 0.5) / T.
Matrix UpsampleText(std::span<const double> unit_text, std::size_t num_frames,
                    bool append_position = false);

struct SyntheticCorpusOptions {
  std::size_t text_dim = kDefaultTextDim;
  // Index of the first generated unit. Units are generated from per-index
  // streams, so (seed, start_index) slices of one seed share label
  // statistics and can serve as disjoint splits.
  std::uint64_t start_index = 0;
  // Durations follow a log-normal with this median, redrawn until they
  // fall in [min_frames, max_frames].
  double median_frames = 13.0;
  double log_sigma = 0.35;
  std::uint32_t min_frames = 4;
  std::uint32_t max_frames = 30;
  double noise_stddev = 0.02;
};

// Deterministic stand-in corpus: label-conditioned smooth trajectories
// (label means plus low-frequency sinusoids whose phases and gain are
// unit latents) and text features exposing label one-hot, duration and
// those latents. Frame and text values are exactly representable as
// 32-bit floats.
std::pair<Corpus, TextFeatureTable> GenerateSyntheticCorpus(
    std::uint64_t seed, std::size_t num_units, std::size_t dim,
    std::size_t num_labels, const SyntheticCorpusOptions& options = {});

// Number of informative leading text columns for `num_labels` labels; the
// remaining columns up to text_dim are zero.
std::size_t SyntheticTextInformativeDim(std::size_t num_labels);

// Histogram of unit durations: frame count -> number of units.
std::map<std::size_t, std::size_t> DurationHistogram(const Corpus& corpus);

}  // namespace rbn

#endif  // RBN_FEATURES_H_
