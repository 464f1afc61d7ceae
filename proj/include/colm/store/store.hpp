// Copyright 2026 The colm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "colm/core/codec.hpp"
#include "colm/core/types.hpp"

namespace colm::store {

/// Append-only transcript log under a data directory:
///
///   <dir>/transcripts.jsonl        one canonical transcript per line
///   <dir>/manifests/<run_id>.json  run manifests
///
/// Appends rewrite the log into a temporary file, fsync it, and rename it over
/// the original, so a crash never leaves a partial line behind. One Store
/// object per directory is the single writer; readers may run concurrently.
class Store {
 public:
  explicit Store(std::filesystem::path dir);

  [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }
  [[nodiscard]] std::filesystem::path transcripts_path() const;

  /// Returns the byte offset of the new line. Throws Error(InvalidArgument)
  /// when the transcript id is already stored, Error(Io) on filesystem errors.
  std::uint64_t append_transcript(const CollaborationTranscript& t);

  /// Throws Error(NotFound), or Error(Corrupt) carrying the 1-based line
  /// number when a line cannot be decoded or the transcript fails validation.
  [[nodiscard]] CollaborationTranscript load_transcript(const std::string& id) const;

  [[nodiscard]] std::vector<std::string> list_ids() const;

  void write_manifest(const std::string& run_id, const Json& manifest);
  [[nodiscard]] Json read_manifest(const std::string& run_id) const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex write_mu_;
};

// Writes bytes to path via temp file + fsync + rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace colm::store
