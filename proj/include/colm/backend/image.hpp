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

#include <filesystem>
#include <string>
#include <string_view>

#include "colm/core/types.hpp"

namespace colm {

// Sniffs PNG/JPEG magic bytes; returns "image/png", "image/jpeg", or "".
std::string detect_media_type(std::string_view bytes);

// Throws Error(InvalidArgument) for formats other than PNG and JPEG.
ImageRef image_from_bytes(std::string bytes);

// Throws Error(Io) when the file cannot be read.
ImageRef load_image(const std::filesystem::path& path);

// "data:<media_type>;base64,<payload>"
std::string to_data_url(const ImageRef& image);

}  // namespace colm
