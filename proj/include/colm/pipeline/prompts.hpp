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

namespace colm::pipeline {

inline constexpr const char* kResponseHeader = "### Response from ";

// One "### Response from <name>:\n<text>\n" block per successful response, in
// input order, separated by a blank line. Errored responses are skipped.
std::string build_combined_responses(const std::vector<ClientResponse>& responses);

// User message of the aggregation call: query text, blank line, filled
// summary template.
std::string build_aggregation_prompt(const Query& q, const std::vector<ClientResponse>& responses,
                                     const PromptSet& prompts);

std::string build_refinement_prompt(const std::string& guidance, const PromptSet& prompts);

}  // namespace colm::pipeline
