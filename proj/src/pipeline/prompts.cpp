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

#include "colm/pipeline/prompts.hpp"

#include "colm/core/text.hpp"

namespace colm::pipeline {

std::string build_combined_responses(const std::vector<ClientResponse>& responses) {
  std::string out;
  for (const auto& r : responses) {
    if (!r.ok()) continue;
    if (!out.empty()) out += "\n";
    out += kResponseHeader + r.client_name + ":\n" + r.text + "\n";
  }
  return out;
}

std::string build_aggregation_prompt(const Query& q, const std::vector<ClientResponse>& responses,
                                     const PromptSet& prompts) {
  return q.text + "\n\n" +
         text::fill_template(prompts.summary_template,
                             {{"combined_responses", build_combined_responses(responses)}});
}

std::string build_refinement_prompt(const std::string& guidance, const PromptSet& prompts) {
  return text::fill_template(prompts.final_template, {{"summary_response", guidance}});
}

}  // namespace colm::pipeline
