// Copyright 2026 The arner Authors.
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

#ifndef ARNER_CHECKPOINT_H_
#define ARNER_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "arner/corpus.h"
#include "arner/model.h"
#include "arner/optimizer.h"

namespace arner {

inline constexpr int kCheckpointFormatVersion = 1;
inline constexpr std::string_view kCheckpointMagic = "ARNER-CHECKPOINT";

struct TrainingMetadata {
  int64_t iterations_completed = 0;
  uint64_t seed = 0;
  double learning_rate = 0.0;
  int batch_size = 0;
  int max_len = 0;

  friend bool operator==(const TrainingMetadata&,
                         const TrainingMetadata&) = default;
};

struct Checkpoint {
  int format_version = kCheckpointFormatVersion;
  std::string tag_fingerprint;
  Vocabulary vocab;
  ModelParams params;  // params.config is the model configuration
  std::optional<AdamState> adam;
  TrainingMetadata training;

  const ModelConfig& config() const { return params.config; }
};

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind {
    kIo,
    kFormat,          // bad magic, unparsable manifest, trailing bytes
    kVersion,         // unsupported format version
    kTruncated,       // payload shorter than the manifest declares
    kShapeMismatch,   // tensor directory disagrees with the configuration
    kConfigMismatch,  // checkpoint is for a different model or label space
  };

  CheckpointError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// File layout:
//   "ARNER-CHECKPOINT\n"
//   <manifest byte length, decimal ASCII>"\n"
//   <manifest: JSON object with format_version, model, tags,
//    tag_fingerprint, vocabulary, training, adam, tensors, payload_bytes>
//   "\n"
//   <payload: each tensor's elements as little-endian IEEE-754 binary64,
//    row-major, concatenated in tensor-directory order>
//
// Each tensor-directory entry is {name, rows, cols, offset, bytes}, with
// offsets relative to the payload start.
std::string SerializeCheckpoint(const Checkpoint& c);
Checkpoint ParseCheckpoint(std::string_view bytes);

void SaveCheckpoint(const Checkpoint& c, const std::filesystem::path& path);

// With `expected_cell`, a checkpoint for the other cell kind is rejected
// with kConfigMismatch.
Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          std::optional<CellKind> expected_cell = {});

// Throws kConfigMismatch unless the checkpoint's label space matches this
// build's tag ordering and its vocabulary matches its model config.
void CheckCompatible(const Checkpoint& c);

}  // namespace arner

#endif  // ARNER_CHECKPOINT_H_
