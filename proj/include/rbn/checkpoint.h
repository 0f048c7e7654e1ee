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

#ifndef RBN_CHECKPOINT_H_
#define RBN_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbn/ed_fvc.h"
#include "rbn/features.h"
#include "rbn/ffdnn.h"
#include "rbn/linalg.h"

namespace rbn {

// Model container shared by every model kind:
//
//   "RBNCKPT1"
//   one line of compact JSON: {"D":..,"H":..,"attributes":{..},
//                              "kind":"..","matrices":[{"cols":..,
//                              "name":"..","rows":..},..]}
//   raw f64 little-endian row-major payloads in header order
struct NamedMatrix {
  std::string name;
  Matrix value;

  bool operator==(const NamedMatrix&) const = default;
};

struct Checkpoint {
  std::string kind;
  std::size_t dim_in = 0;   // header field "D"
  std::size_t dim_out = 0;  // header field "H"
  std::map<std::string, std::string> attributes;
  std::vector<NamedMatrix> matrices;

  const Matrix* Find(std::string_view name) const;
  bool operator==(const Checkpoint&) const = default;
};

inline constexpr std::string_view kCheckpointMagic = "RBNCKPT1";
inline constexpr std::string_view kEdFvcKind = "EDFVC";
inline constexpr std::string_view kFfdnnKind = "FFDNN";

std::string SerializeCheckpoint(const Checkpoint& ckpt);
Checkpoint ParseCheckpoint(std::string_view bytes,
                           const std::string& what = "checkpoint");
void WriteCheckpoint(const Checkpoint& ckpt,
                     const std::filesystem::path& path);
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

// A trained recurrent autoencoder plus the frame normalisation it was
// trained under, if any.
struct RaeModel {
  EdFvcParams params;
  std::optional<MinMaxStats> norm;

  bool operator==(const RaeModel&) const = default;
};

enum class DnnTarget { kRbn, kFrames };

struct DnnModel {
  DnnParams params;
  DnnTarget target = DnnTarget::kRbn;
  // Frame-level models read text with a trailing frame-position column.
  bool frame_position = false;
  // Normalisation of the regression targets, when they were normalised.
  std::optional<MinMaxStats> target_norm;

  bool operator==(const DnnModel&) const = default;
};

Checkpoint ToCheckpoint(const RaeModel& model);
Checkpoint ToCheckpoint(const DnnModel& model);
// Throw KindMismatchError when the checkpoint holds the other model kind.
RaeModel RaeFromCheckpoint(const Checkpoint& ckpt);
DnnModel DnnFromCheckpoint(const Checkpoint& ckpt);

void SaveRae(const RaeModel& model, const std::filesystem::path& path);
RaeModel LoadRae(const std::filesystem::path& path);
void SaveDnn(const DnnModel& model, const std::filesystem::path& path);
DnnModel LoadDnn(const std::filesystem::path& path);

}  // namespace rbn

#endif  // RBN_CHECKPOINT_H_
