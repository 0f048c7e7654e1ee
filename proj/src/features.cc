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

#include "rbn/features.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rbn/error.h"

namespace rbn {

namespace {

constexpr std::size_t kHarmonics = 2;
constexpr std::uint64_t kLabelStream = 0x6c6162656cULL;
constexpr std::uint64_t kUnitStreamBase = 0x756e697400000000ULL;

// Kept out of line: GCC 11 at -O3 SLP-vectorises the sin/cos pairs below
// and drops the float round trip when this is inlined.
[[gnu::noinline]] double ToFloatPrecision(double x) {
  return static_cast<double>(static_cast<float>(x));
}

void CheckStats(const MinMaxStats& stats, std::size_t dim) {
  if (stats.min.size() != stats.max.size()) {
    throw DimensionError("min/max statistics of different lengths");
  }
  if (stats.dim() != dim) {
    throw DimensionError("statistics cover " + std::to_string(stats.dim()) +
                         " dimensions, frames have " + std::to_string(dim));
  }
}

}  // namespace

std::size_t Corpus::total_frames() const {
  std::size_t n = 0;
  for (const UnitSequence& u : units) n += u.num_frames();
  return n;
}

void Corpus::Validate() const {
  for (std::size_t i = 0; i < units.size(); ++i) {
    const Matrix& f = units[i].frames;
    if (f.rows() == 0) {
      throw InconsistentDimensionError("unit " + std::to_string(i) +
                                       " has no frames");
    }
    if (f.cols() != dim) {
      throw InconsistentDimensionError(
          "unit " + std::to_string(i) + " has frames " + f.ShapeString() +
          " in a corpus of dimension " + std::to_string(dim));
    }
  }
}

Matrix ComputeDeltas(const Matrix& frames) {
  const std::size_t t_len = frames.rows();
  const std::size_t d = frames.cols();
  if (t_len == 0) throw InvalidArgument("ComputeDeltas: empty sequence");
  Matrix out(t_len, 3 * d);
  for (std::size_t t = 0; t < t_len; ++t) {
    const std::size_t prev = t == 0 ? 0 : t - 1;
    const std::size_t next = t + 1 == t_len ? t : t + 1;
    for (std::size_t j = 0; j < d; ++j) {
      const double a = frames(prev, j), b = frames(t, j), c = frames(next, j);
      out(t, j) = b;
      out(t, d + j) = 0.5 * (c - a);
      out(t, 2 * d + j) = 0.25 * a - 0.5 * b + 0.25 * c;
    }
  }
  return out;
}

Corpus WithDeltas(const Corpus& corpus) {
  if (corpus.delta_static_dim) {
    throw InvalidArgument("corpus already carries delta features");
  }
  corpus.Validate();
  Corpus out = corpus;
  out.dim = 3 * corpus.dim;
  out.delta_static_dim = corpus.dim;
  out.stats.reset();
  for (UnitSequence& u : out.units) u.frames = ComputeDeltas(u.frames);
  return out;
}

Corpus StripDeltas(const Corpus& corpus, std::size_t static_dim) {
  if (static_dim == 0 || static_dim * 3 != corpus.dim) {
    throw DimensionError("cannot strip deltas: dimension " +
                         std::to_string(corpus.dim) + " is not 3 x " +
                         std::to_string(static_dim));
  }
  Corpus out;
  out.dim = static_dim;
  out.split = corpus.split;
  out.units.reserve(corpus.units.size());
  for (const UnitSequence& u : corpus.units) {
    UnitSequence s{u.label_id, Matrix(u.num_frames(), static_dim)};
    for (std::size_t t = 0; t < u.num_frames(); ++t) {
      auto src = u.frames.row(t);
      std::copy_n(src.begin(), static_dim, s.frames.row(t).begin());
    }
    out.units.push_back(std::move(s));
  }
  return out;
}

MinMaxStats FitMinMax(const Corpus& corpus) {
  if (corpus.split != Split::kTrain) {
    throw InvalidArgument("normalisation statistics must be fitted on the "
                          "training split");
  }
  corpus.Validate();
  if (corpus.total_frames() == 0) {
    throw InvalidArgument("cannot fit statistics on an empty corpus");
  }
  MinMaxStats s{Vector(corpus.dim, INFINITY), Vector(corpus.dim, -INFINITY)};
  for (const UnitSequence& u : corpus.units) {
    for (std::size_t t = 0; t < u.num_frames(); ++t) {
      auto r = u.frames.row(t);
      for (std::size_t j = 0; j < corpus.dim; ++j) {
        s.min[j] = std::min(s.min[j], r[j]);
        s.max[j] = std::max(s.max[j], r[j]);
      }
    }
  }
  return s;
}

Matrix ApplyMinMax(const Matrix& frames, const MinMaxStats& stats) {
  CheckStats(stats, frames.cols());
  Matrix out(frames.rows(), frames.cols());
  for (std::size_t j = 0; j < frames.cols(); ++j) {
    const double range = stats.max[j] - stats.min[j];
    for (std::size_t t = 0; t < frames.rows(); ++t) {
      out(t, j) = range > 0.0
                      ? kNormLow + (kNormHigh - kNormLow) *
                                       (frames(t, j) - stats.min[j]) / range
                      : 0.5;
    }
  }
  return out;
}

Matrix InvertMinMax(const Matrix& frames, const MinMaxStats& stats) {
  CheckStats(stats, frames.cols());
  Matrix out(frames.rows(), frames.cols());
  for (std::size_t j = 0; j < frames.cols(); ++j) {
    const double range = stats.max[j] - stats.min[j];
    for (std::size_t t = 0; t < frames.rows(); ++t) {
      out(t, j) = range > 0.0
                      ? stats.min[j] + range * (frames(t, j) - kNormLow) /
                                           (kNormHigh - kNormLow)
                      : stats.min[j];
    }
  }
  return out;
}

Corpus ApplyMinMax(const Corpus& corpus, const MinMaxStats& stats) {
  Corpus out = corpus;
  for (UnitSequence& u : out.units) u.frames = ApplyMinMax(u.frames, stats);
  out.stats = stats;
  return out;
}

Corpus InvertMinMax(const Corpus& corpus, const MinMaxStats& stats) {
  Corpus out = corpus;
  for (UnitSequence& u : out.units) u.frames = InvertMinMax(u.frames, stats);
  out.stats.reset();
  return out;
}

Matrix UpsampleText(std::span<const double> unit_text, std::size_t num_frames,
                    bool append_position) {
  if (num_frames == 0) {
    throw InvalidArgument("UpsampleText: unit must have at least one frame");
  }
  const std::size_t cols = unit_text.size() + (append_position ? 1 : 0);
  Matrix out(num_frames, cols);
  for (std::size_t t = 0; t < num_frames; ++t) {
    auto r = out.row(t);
    std::copy(unit_text.begin(), unit_text.end(), r.begin());
    if (append_position) {
      r[cols - 1] = (static_cast<double>(t) + 0.5) /
                    static_cast<double>(num_frames);
    }
  }
  return out;
}

std::size_t SyntheticTextInformativeDim(std::size_t num_labels) {
  // one-hot, duration, sin/cos of each phase, gain
  return num_labels + 1 + 2 * kHarmonics + 1;
}

std::pair<Corpus, TextFeatureTable> GenerateSyntheticCorpus(
    std::uint64_t seed, std::size_t num_units, std::size_t dim,
    std::size_t num_labels, const SyntheticCorpusOptions& options) {
  if (dim == 0) throw InvalidArgument("synthetic corpus: dim must be >= 1");
  if (num_labels == 0) {
    throw InvalidArgument("synthetic corpus: need at least one label");
  }
  if (options.min_frames == 0 || options.min_frames > options.max_frames) {
    throw InvalidArgument("synthetic corpus: bad duration range");
  }
  const std::size_t informative = SyntheticTextInformativeDim(num_labels);
  if (options.text_dim < informative) {
    throw InvalidArgument("synthetic corpus: text_dim " +
                          std::to_string(options.text_dim) + " < " +
                          std::to_string(informative) +
                          " informative features");
  }

  // Label-level statistics depend only on (seed, dim, num_labels).
  Rng label_rng = Rng::Derive(seed, kLabelStream);
  Vector scale(dim);
  for (std::size_t j = 0; j < dim; ++j) scale[j] = 1.0 / (1.0 + 0.5 * j);
  Matrix means(num_labels, dim);
  std::vector<Matrix> amps;  // per label: kHarmonics x dim
  for (std::size_t l = 0; l < num_labels; ++l) {
    for (std::size_t j = 0; j < dim; ++j) {
      means(l, j) = scale[j] * label_rng.Gaussian();
    }
    Matrix a(kHarmonics, dim);
    for (std::size_t k = 0; k < kHarmonics; ++k) {
      for (std::size_t j = 0; j < dim; ++j) {
        a(k, j) = 0.5 * scale[j] * label_rng.Gaussian() / (1.0 + k);
      }
    }
    amps.push_back(std::move(a));
  }

  Corpus corpus;
  corpus.dim = dim;
  TextFeatureTable text{Matrix(num_units, options.text_dim)};
  const double log_median = std::log(options.median_frames);
  for (std::size_t i = 0; i < num_units; ++i) {
    Rng rng = Rng::Derive(seed, kUnitStreamBase + options.start_index + i);
    const auto label = static_cast<std::uint32_t>(rng.UniformInt(num_labels));
    std::uint32_t num_frames;
    do {
      const double draw =
          std::exp(log_median + options.log_sigma * rng.Gaussian());
      num_frames = static_cast<std::uint32_t>(std::lround(draw));
    } while (num_frames < options.min_frames ||
             num_frames > options.max_frames);
    std::array<double, kHarmonics> phase;
    for (double& p : phase) p = 2.0 * std::numbers::pi * rng.Uniform();
    const double gain = 0.5 + rng.Uniform();

    UnitSequence unit{label, Matrix(num_frames, dim)};
    for (std::size_t t = 0; t < num_frames; ++t) {
      const double pos = (t + 0.5) / num_frames;
      for (std::size_t j = 0; j < dim; ++j) {
        double v = means(label, j);
        for (std::size_t k = 0; k < kHarmonics; ++k) {
          v += gain * amps[label](k, j) *
               std::sin(std::numbers::pi * (k + 1) * pos + phase[k]);
        }
        v += options.noise_stddev * scale[j] * rng.Gaussian();
        unit.frames(t, j) = ToFloatPrecision(v);
      }
    }
    corpus.units.push_back(std::move(unit));

    auto row = text.rows.row(i);
    std::size_t col = 0;
    row[col + label] = 1.0;
    col += num_labels;
    row[col++] = ToFloatPrecision(static_cast<double>(num_frames) /
                                  options.max_frames);
    for (double p : phase) {
      row[col++] = ToFloatPrecision(std::sin(p));
      row[col++] = ToFloatPrecision(std::cos(p));
    }
    row[col++] = ToFloatPrecision(gain - 1.0);
  }
  return {std::move(corpus), std::move(text)};
}

std::map<std::size_t, std::size_t> DurationHistogram(const Corpus& corpus) {
  std::map<std::size_t, std::size_t> hist;
  for (const UnitSequence& u : corpus.units) ++hist[u.num_frames()];
  return hist;
}

}  // namespace rbn
