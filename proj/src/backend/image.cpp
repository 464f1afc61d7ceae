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

#include "colm/backend/image.hpp"

#include <fstream>
#include <sstream>

#include "colm/core/base64.hpp"
#include "colm/core/error.hpp"

namespace colm {

std::string detect_media_type(std::string_view bytes) {
  static constexpr std::string_view kPng = "\x89PNG\r\n\x1a\n";
  if (bytes.substr(0, kPng.size()) == kPng) return "image/png";
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xFF &&
      static_cast<unsigned char>(bytes[1]) == 0xD8 && static_cast<unsigned char>(bytes[2]) == 0xFF) {
    return "image/jpeg";
  }
  return {};
}

ImageRef image_from_bytes(std::string bytes) {
  auto media_type = detect_media_type(bytes);
  if (media_type.empty()) {
    throw Error(ErrorCode::InvalidArgument, "unsupported image format (PNG and JPEG only)");
  }
  return ImageRef{std::move(media_type), std::move(bytes), {}};
}

ImageRef load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open image " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  auto img = image_from_bytes(ss.str());
  img.source = path.string();
  return img;
}

std::string to_data_url(const ImageRef& image) {
  return "data:" + image.media_type + ";base64," + base64::encode(image.data);
}

}  // namespace colm
