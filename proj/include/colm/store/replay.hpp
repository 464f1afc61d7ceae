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

#include <map>
#include <string>
#include <vector>

#include "colm/backend/mock.hpp"
#include "colm/store/store.hpp"

namespace colm::store {

// Override key addressing the server script instead of a client.
inline constexpr const char* kServerScript = "@server";

/// Mock scripts that reproduce a stored transcript: one per selected client
/// plus kServerScript. Rules match whole messages exactly, so each call gets
/// the output recorded for the same inputs.
std::map<std::string, MockScript> scripts_from_transcript(const CollaborationTranscript& t);

/// Re-executes the stored run from its config snapshot with every binding
/// replaced by a replay mock. `overrides` substitutes the script of the named
/// client (or kServerScript). A replay mock whose inputs no longer match the
/// recording answers with the reply recorded at the same call position, so
/// an override changes only the overridden binding's own outputs.
CollaborationTranscript replay(const CollaborationTranscript& stored,
                               const std::map<std::string, MockScript>& overrides = {});
CollaborationTranscript replay(const Store& store, const std::string& id,
                               const std::map<std::string, MockScript>& overrides = {});

/// Paths whose texts differ between two transcripts: "finals.<client>",
/// "rounds[r].<client>", "rounds[r].guidance". Empty means texts are identical.
std::vector<std::string> text_differences(const CollaborationTranscript& a,
                                          const CollaborationTranscript& b);

}  // namespace colm::store
