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

#include <string>
#include <vector>

#include "colm/core/types.hpp"

namespace colm {

/// Checks every structural invariant of a finished transcript. Returns one
/// description per violation, each of the form "<invariant>: <path>: <detail>";
/// an empty result means the transcript is well formed.
///
/// Invariant names: "schema version", "query text", "selection",
/// "round monotonicity", "response exclusivity", "round membership",
/// "per-round completeness", "guidance placement", "guidance lineage",
/// "round cap", "finals completeness", "usage additivity".
std::vector<std::string> validate_transcript(const CollaborationTranscript& t);

}  // namespace colm
