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

#include "colm/backend/message.hpp"

namespace colm {

/// Builds the chat-completion request body: {model, messages, temperature,
/// max_tokens[, seed]}. Text-only messages carry a string `content`; messages
/// with images carry a list of {"type":"text"} and {"type":"image_url"} parts
/// whose URL is a base64 data URL. Keys are sorted, so identical inputs yield
/// identical bytes.
///
/// Throws Error(CapabilityMismatch) when an image reaches a non-vision binding.
std::string render_chat_request(const BackendBinding& binding,
                                const std::vector<Message>& messages,
                                const CallParams& params);

}  // namespace colm
