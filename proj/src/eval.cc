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

#include "rbn/eval.h"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rbn/binary_io.h"
#include "rbn/error.h"

namespace rbn {

namespace {

std::string FormatDouble(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

double ParseDouble(std::string_view s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("not a number: \"" + std::string(s) + "\"");
  }
  return x;
}

}  // namespace

double Mcd(const Matrix& reference, const Matrix& predicted,
           std::size_t start_dim) {
  if (reference.rows() != predicted.rows() ||
      reference.cols() != predicted.cols()) {
    throw DimensionError("MCD: reference " + reference.ShapeString() +
                         " vs predicted " + predicted.ShapeString());
  }
  if (start_dim > 1) throw InvalidArgument("MCD start_dim must be 0 or 1");
  if (reference.rows() == 0) throw InvalidArgument("MCD of empty sequence");
  double total = 0.0;
  for (std::size_t t = 0; t < reference.rows(); ++t) {
    auto a = reference.row(t);
    auto b = predicted.row(t);
    double sq = 0.0;
    for (std::size_t d = start_dim; d < a.size(); ++d) {
      sq += (a[d] - b[d]) * (a[d] - b[d]);
    }
    total += kMcdDbScale * std::sqrt(2.0 * sq);
  }
  return total / static_cast<double>(reference.rows());
}

double ReductionFactor(const Corpus& corpus) {
  if (corpus.units.empty()) {
    throw InvalidArgument("reduction factor of an empty corpus");
  }
  return static_cast<double>(corpus.total_frames()) /
         static_cast<double>(corpus.num_units());
}

EvalReport Evaluate(const Corpus& reference, const Corpus& predicted,
                    std::size_t start_dim) {
  if (reference.delta_static_dim || predicted.delta_static_dim) {
    throw InvalidArgument("MCD is scored on static coefficients; strip delta "
                          "features first");
  }
  if (reference.num_units() != predicted.num_units()) {
    throw DimensionError("reference has " +
                         std::to_string(reference.num_units()) +
                         " units, prediction " +
                         std::to_string(predicted.num_units()));
  }
  EvalReport r;
  r.mcd_start_dim = start_dim;
  r.n_units = reference.num_units();
  double sq_sum = 0.0;
  std::size_t values = 0;
  for (std::size_t i = 0; i < r.n_units; ++i) {
    const Matrix& a = reference.units[i].frames;
    const Matrix& b = predicted.units[i].frames;
    const double mcd = Mcd(a, b, start_dim);
    r.per_unit_mcd.push_back(mcd);
    r.n_frames += a.rows();
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double e = a.values()[k] - b.values()[k];
      sq_sum += e * e;
    }
    values += a.size();
  }
  if (r.n_units > 0) {
    double sum = 0.0;
    for (double m : r.per_unit_mcd) sum += m;
    r.mean_mcd_db = sum / static_cast<double>(r.n_units);
    r.rmse = std::sqrt(sq_sum / static_cast<double>(values));
    r.reduction_factor = ReductionFactor(reference);
  }
  return r;
}

std::string FormatReport(const EvalReport& report) {
  std::ostringstream out;
  out << "# mcd: static coefficients " << report.mcd_start_dim
      << "..D-1, per frame (10/ln10)*sqrt(2*sum(diff^2)), frame mean per "
         "unit, unweighted mean over units\n";
  out << "# rmse: pooled over all frames and coefficients\n";
  out << "mean_mcd_db: " << FormatDouble(report.mean_mcd_db) << '\n';
  out << "rmse: " << FormatDouble(report.rmse) << '\n';
  out << "n_units: " << report.n_units << '\n';
  out << "n_frames: " << report.n_frames << '\n';
  out << "reduction_factor: " << FormatDouble(report.reduction_factor)
      << '\n';
  return out.str();
}

EvalReport ParseReport(const std::string& text) {
  EvalReport r;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::size_t colon = line.find(": ");
    if (colon == std::string::npos) {
      throw FormatError("report line without key: \"" + line + "\"");
    }
    const std::string key = line.substr(0, colon);
    const std::string_view value = std::string_view(line).substr(colon + 2);
    if (key == "mean_mcd_db") {
      r.mean_mcd_db = ParseDouble(value);
    } else if (key == "rmse") {
      r.rmse = ParseDouble(value);
    } else if (key == "n_units") {
      r.n_units = static_cast<std::size_t>(ParseDouble(value));
    } else if (key == "n_frames") {
      r.n_frames = static_cast<std::size_t>(ParseDouble(value));
    } else if (key == "reduction_factor") {
      r.reduction_factor = ParseDouble(value);
    }
  }
  return r;
}

std::string FormatMatrix(const Matrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += FormatDouble(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Matrix ParseMatrix(const std::string& text) {
  Matrix m;
  std::istringstream in(text);
  std::string line;
  Vector row;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    row.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(ParseDouble(
          std::string_view(line).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    m.AppendRow(row);
  }
  return m;
}

void ExportMatrix(const Matrix& m, const std::filesystem::path& path) {
  WriteFileAtomic(path, FormatMatrix(m));
}

void ExportReport(const EvalReport& report,
                  const std::filesystem::path& path) {
  WriteFileAtomic(path, FormatReport(report));
}

void ExportHistogram(const std::map<std::size_t, std::size_t>& hist,
                     const std::filesystem::path& path) {
  std::string out;
  for (const auto& [duration, count] : hist) {
    out += std::to_string(duration) + "," + std::to_string(count) + "\n";
  }
  WriteFileAtomic(path, out);
}

}  // namespace rbn
