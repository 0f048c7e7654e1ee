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

#include "rbn/checkpoint.h"

#include <json.hpp>

#include "rbn/binary_io.h"
#include "rbn/error.h"

namespace rbn {

namespace {

using nlohmann::json;

Matrix StatsRow(const Vector& v) { return Matrix(1, v.size(), v); }

void PutStats(Checkpoint& ck, const std::optional<MinMaxStats>& stats) {
  if (!stats) return;
  ck.matrices.push_back({"norm_min", StatsRow(stats->min)});
  ck.matrices.push_back({"norm_max", StatsRow(stats->max)});
}

std::optional<MinMaxStats> GetStats(const Checkpoint& ck, std::size_t dim,
                                    const std::string& what) {
  const Matrix* lo = ck.Find("norm_min");
  const Matrix* hi = ck.Find("norm_max");
  if (lo == nullptr && hi == nullptr) return std::nullopt;
  if (lo == nullptr || hi == nullptr || lo->rows() != 1 || hi->rows() != 1 ||
      lo->cols() != dim || hi->cols() != dim) {
    throw InconsistentDimensionError(
        what + ": normalisation statistics do not cover " +
        std::to_string(dim) + " dimensions");
  }
  return MinMaxStats{lo->data(), hi->data()};
}

void ExpectKind(const Checkpoint& ck, std::string_view want) {
  if (ck.kind != want) {
    throw KindMismatchError("checkpoint holds model kind \"" + ck.kind +
                            "\", expected \"" + std::string(want) + "\"");
  }
}

const Matrix& Require(const Checkpoint& ck, std::string_view name) {
  const Matrix* m = ck.Find(name);
  if (m == nullptr) {
    throw InconsistentDimensionError(ck.kind + " checkpoint lacks matrix \"" +
                                     std::string(name) + "\"");
  }
  return *m;
}

}  // namespace

const Matrix* Checkpoint::Find(std::string_view name) const {
  for (const NamedMatrix& m : matrices) {
    if (m.name == name) return &m.value;
  }
  return nullptr;
}

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  json header;
  header["kind"] = ckpt.kind;
  header["D"] = ckpt.dim_in;
  header["H"] = ckpt.dim_out;
  header["attributes"] = ckpt.attributes;
  json mats = json::array();
  for (const NamedMatrix& m : ckpt.matrices) {
    mats.push_back(
        {{"name", m.name}, {"rows", m.value.rows()}, {"cols", m.value.cols()}});
  }
  header["matrices"] = std::move(mats);

  ByteWriter w;
  w.Bytes(kCheckpointMagic);
  w.Bytes(header.dump());
  w.U8('\n');
  for (const NamedMatrix& m : ckpt.matrices) {
    for (double x : m.value.values()) w.F64(x);
  }
  return w.Release();
}

Checkpoint ParseCheckpoint(std::string_view bytes, const std::string& what) {
  ByteReader r(bytes, what);
  ExpectMagic(r, kCheckpointMagic);
  const std::string line = r.Line();
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(what + ": unreadable header: " + e.what());
  }
  Checkpoint ck;
  try {
    ck.kind = header.at("kind").get<std::string>();
    ck.dim_in = header.at("D").get<std::size_t>();
    ck.dim_out = header.at("H").get<std::size_t>();
    ck.attributes =
        header.value("attributes", std::map<std::string, std::string>{});
    for (const json& m : header.at("matrices")) {
      const auto rows = m.at("rows").get<std::size_t>();
      const auto cols = m.at("cols").get<std::size_t>();
      if (cols != 0 && rows > r.remaining() / 8 / cols) {
        throw TruncatedError(what + ": truncated payload (matrix \"" +
                             m.at("name").get<std::string>() + "\")");
      }
      std::vector<double> data(rows * cols);
      for (double& x : data) x = r.F64();
      ck.matrices.push_back(
          {m.at("name").get<std::string>(), Matrix(rows, cols, std::move(data))});
    }
  } catch (const json::exception& e) {
    throw FormatError(what + ": malformed header: " + e.what());
  }
  if (!r.AtEnd()) {
    throw InconsistentDimensionError(what + ": " +
                                     std::to_string(r.remaining()) +
                                     " bytes beyond the declared matrices");
  }
  return ck;
}

void WriteCheckpoint(const Checkpoint& ckpt,
                     const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeCheckpoint(ckpt));
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  return ParseCheckpoint(ReadFileBytes(path), "checkpoint " + path.string());
}

Checkpoint ToCheckpoint(const RaeModel& model) {
  model.params.Validate();
  Checkpoint ck;
  ck.kind = kEdFvcKind;
  ck.dim_in = model.params.feature_dim();
  ck.dim_out = model.params.hidden_dim();
  auto mats = model.params.matrices();
  for (std::size_t i = 0; i < EdFvcParams::kNumMatrices; ++i) {
    ck.matrices.push_back({std::string(EdFvcParams::kNames[i]), *mats[i]});
  }
  PutStats(ck, model.norm);
  return ck;
}

Checkpoint ToCheckpoint(const DnnModel& model) {
  model.params.Validate();
  Checkpoint ck;
  ck.kind = kFfdnnKind;
  ck.dim_in = model.params.input_dim();
  ck.dim_out = model.params.output_dim();
  ck.attributes["arch"] = RenderArch(model.params.arch());
  ck.attributes["target"] =
      model.target == DnnTarget::kRbn ? "rbn" : "frames";
  ck.attributes["frame_position"] = model.frame_position ? "1" : "0";
  for (std::size_t i = 0; i < model.params.layers.size(); ++i) {
    const DnnLayer& l = model.params.layers[i];
    const std::string prefix = "layer" + std::to_string(i);
    ck.matrices.push_back({prefix + ".weight", l.weight});
    ck.matrices.push_back({prefix + ".bias", l.bias});
  }
  PutStats(ck, model.target_norm);
  return ck;
}

RaeModel RaeFromCheckpoint(const Checkpoint& ckpt) {
  ExpectKind(ckpt, kEdFvcKind);
  RaeModel model;
  auto mats = model.params.matrices();
  for (std::size_t i = 0; i < EdFvcParams::kNumMatrices; ++i) {
    *mats[i] = Require(ckpt, EdFvcParams::kNames[i]);
  }
  try {
    model.params.Validate();
  } catch (const DimensionError& e) {
    throw InconsistentDimensionError(std::string("EDFVC checkpoint: ") +
                                     e.what());
  }
  if (model.params.feature_dim() != ckpt.dim_in ||
      model.params.hidden_dim() != ckpt.dim_out) {
    throw InconsistentDimensionError(
        "EDFVC checkpoint header declares D=" + std::to_string(ckpt.dim_in) +
        " H=" + std::to_string(ckpt.dim_out) + " but enc_input is " +
        model.params.enc_input.ShapeString());
  }
  model.norm = GetStats(ckpt, ckpt.dim_in, "EDFVC checkpoint");
  return model;
}

DnnModel DnnFromCheckpoint(const Checkpoint& ckpt) {
  ExpectKind(ckpt, kFfdnnKind);
  auto it = ckpt.attributes.find("arch");
  if (it == ckpt.attributes.end()) {
    throw FormatError("FFDNN checkpoint lacks the \"arch\" attribute");
  }
  const ArchSpec arch = ParseArch(it->second);
  DnnModel model;
  for (std::size_t i = 1; i < arch.sizes.size(); ++i) {
    const std::string prefix = "layer" + std::to_string(i - 1);
    DnnLayer layer{Require(ckpt, prefix + ".weight"),
                   Require(ckpt, prefix + ".bias"), arch.activations[i]};
    if (layer.weight.rows() != arch.sizes[i] ||
        layer.weight.cols() != arch.sizes[i - 1]) {
      throw InconsistentDimensionError(
          "FFDNN checkpoint: " + prefix + ".weight is " +
          layer.weight.ShapeString() + " for arch \"" + it->second + "\"");
    }
    model.params.layers.push_back(std::move(layer));
  }
  try {
    model.params.Validate();
  } catch (const DimensionError& e) {
    throw InconsistentDimensionError(std::string("FFDNN checkpoint: ") +
                                     e.what());
  }
  if (model.params.input_dim() != ckpt.dim_in ||
      model.params.output_dim() != ckpt.dim_out) {
    throw InconsistentDimensionError("FFDNN checkpoint header dims disagree "
                                     "with its arch");
  }
  auto target = ckpt.attributes.find("target");
  model.target = target != ckpt.attributes.end() && target->second == "frames"
                     ? DnnTarget::kFrames
                     : DnnTarget::kRbn;
  auto pos = ckpt.attributes.find("frame_position");
  model.frame_position = pos != ckpt.attributes.end() && pos->second == "1";
  model.target_norm = GetStats(ckpt, ckpt.dim_out, "FFDNN checkpoint");
  return model;
}

void SaveRae(const RaeModel& model, const std::filesystem::path& path) {
  WriteCheckpoint(ToCheckpoint(model), path);
}

RaeModel LoadRae(const std::filesystem::path& path) {
  return RaeFromCheckpoint(ReadCheckpoint(path));
}

void SaveDnn(const DnnModel& model, const std::filesystem::path& path) {
  WriteCheckpoint(ToCheckpoint(model), path);
}

DnnModel LoadDnn(const std::filesystem::path& path) {
  return DnnFromCheckpoint(ReadCheckpoint(path));
}

}  // namespace rbn
