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

#ifndef RBN_EVAL_H_
#define RBN_EVAL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rbn/features.h"
#include "rbn/linalg.h"

namespace rbn {

// 10 / ln 10.
inline constexpr double kMcdDbScale = 4.3429448190325175;

// Mel-cepstral distortion in dB between two static cepstral sequences:
// per frame (10/ln10) * sqrt(2 * sum_{d >= start_dim} (c_d - c'_d)^2),
// averaged over frames. start_dim 1 skips the energy coefficient.
double Mcd(const Matrix& reference, const Matrix& predicted,
           std::size_t start_dim = 1);

struct EvalReport {
  double mean_mcd_db = 0.0;
  std::vector<double> per_unit_mcd;
  double rmse = 0.0;
  std::size_t n_units = 0;
  std::size_t n_frames = 0;
  double reduction_factor = 0.0;
  std::size_t mcd_start_dim = 1;
};

// Scores `predicted` against `reference` unit by unit. The mean MCD is the
// unweighted mean of per-unit MCDs; RMSE pools every value of every frame.
// Corpora carrying delta features are rejected.
EvalReport Evaluate(const Corpus& reference, const Corpus& predicted,
                    std::size_t start_dim = 1);

// Total frames / total units.
double ReductionFactor(const Corpus& corpus);

// "# ..." header lines documenting the MCD convention, then
// "key: value" lines for mean_mcd_db, rmse, n_units, n_frames,
// reduction_factor.
std::string FormatReport(const EvalReport& report);
// Reads the key/value lines back (per-unit values are not part of it).
EvalReport ParseReport(const std::string& text);

// Comma-separated rows with round-trip precision.
std::string FormatMatrix(const Matrix& m);
Matrix ParseMatrix(const std::string& text);
void ExportMatrix(const Matrix& m, const std::filesystem::path& path);
void ExportReport(const EvalReport& report, const std::filesystem::path& path);
// "duration,count" lines in increasing duration.
void ExportHistogram(const std::map<std::size_t, std::size_t>& hist,
                     const std::filesystem::path& path);

}  // namespace rbn

#endif  // RBN_EVAL_H_
