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

#include "colm/backend/render.hpp"

#include "colm/backend/image.hpp"
#include "colm/core/codec.hpp"
#include "colm/core/error.hpp"

namespace colm {

std::string render_chat_request(const BackendBinding& binding,
                                const std::vector<Message>& messages,
                                const CallParams& params) {
  check_messages(messages);
  Json wire_messages = Json::array();
  for (const auto& m : messages) {
    Json content;
    if (m.has_image()) {
      if (!binding.vision) {
        throw Error(ErrorCode::CapabilityMismatch,
                    "image content sent to non-vision backend " + binding.key());
      }
      content = Json::array();
      for (const auto& part : m.content) {
        if (const auto* s = std::get_if<std::string>(&part)) {
          content.push_back({{"type", "text"}, {"text", *s}});
        } else {
          content.push_back({{"type", "image_url"},
                             {"image_url", {{"url", to_data_url(std::get<ImageRef>(part))}}}});
        }
      }
    } else {
      content = m.text();
    }
    wire_messages.push_back({{"role", to_string(m.role)}, {"content", std::move(content)}});
  }
  Json body{{"model", binding.model_id},
            {"messages", std::move(wire_messages)},
            {"temperature", params.temperature},
            {"max_tokens", params.max_tokens}};
  if (params.seed) body["seed"] = *params.seed;
  return body.dump();
}

}  // namespace colm
