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

#include "colm/store/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>

#include "colm/core/error.hpp"
#include "colm/core/validate.hpp"

namespace colm::store {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_error(const std::string& what, const fs::path& path) {
  throw Error(ErrorCode::Io, what + " " + path.string() + ": " + std::strerror(errno));
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

// Calls fn(line_no, line) for every line; a trailing fragment without a
// newline counts as a line.
template <typename Fn>
void for_each_line(const std::string& data, Fn&& fn) {
  std::size_t start = 0;
  int line_no = 0;
  while (start < data.size()) {
    auto end = data.find('\n', start);
    if (end == std::string::npos) end = data.size();
    ++line_no;
    if (!fn(line_no, std::string_view(data).substr(start, end - start))) return;
    start = end + 1;
  }
}

std::optional<std::string> line_id(std::string_view line) {
  auto j = Json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto q = j.find("query");
  if (q == j.end() || !q->is_object()) return std::nullopt;
  auto id = q->find("id");
  if (id == q->end() || !id->is_string()) return std::nullopt;
  return id->get<std::string>();
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  const auto tmp = fs::path(path.string() + ".tmp");
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) io_error("cannot create", tmp);
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = ::write(fd, bytes.data() + off, bytes.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      io_error("cannot write", tmp);
    }
    off += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_error("cannot fsync", tmp);
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) io_error("cannot rename", tmp);
  fsync_dir(path.has_parent_path() ? path.parent_path() : fs::path("."));
}

Store::Store(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_ / "manifests", ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir_.string() + ": " + ec.message());
}

fs::path Store::transcripts_path() const { return dir_ / "transcripts.jsonl"; }

std::uint64_t Store::append_transcript(const CollaborationTranscript& t) {
  const auto line = encode(t);
  std::lock_guard lock(write_mu_);
  auto data = read_all(transcripts_path());
  bool duplicate = false;
  for_each_line(data, [&](int, std::string_view l) {
    duplicate = line_id(l) == t.id();
    return !duplicate;
  });
  if (duplicate) {
    throw Error(ErrorCode::InvalidArgument, "transcript '" + t.id() + "' is already stored");
  }
  if (!data.empty() && data.back() != '\n') {
    throw Error(ErrorCode::Io, transcripts_path().string() + " ends with a partial line");
  }
  const auto offset = static_cast<std::uint64_t>(data.size());
  data += line;
  data += '\n';
  write_file_atomic(transcripts_path(), data);
  return offset;
}

CollaborationTranscript Store::load_transcript(const std::string& id) const {
  const auto data = read_all(transcripts_path());
  std::optional<CollaborationTranscript> found;
  int first_bad = 0;
  std::vector<std::string> bad_reasons;
  for_each_line(data, [&](int line_no, std::string_view line) {
    const auto lid = line_id(line);
    if (!lid) {
      if (first_bad == 0) {
        first_bad = line_no;
        bad_reasons = {"line " + std::to_string(line_no) + " is not a transcript record"};
      }
      return true;
    }
    if (*lid != id) return true;
    CollaborationTranscript t;
    try {
      t = decode_transcript(line);
    } catch (const Error& e) {
      throw Error::corrupt(line_no, e.violations());
    }
    if (auto violations = validate_transcript(t); !violations.empty()) {
      throw Error::corrupt(line_no, std::move(violations));
    }
    found = std::move(t);
    return false;
  });
  if (found) return std::move(*found);
  if (first_bad != 0) throw Error::corrupt(first_bad, std::move(bad_reasons));
  throw Error(ErrorCode::NotFound, "no transcript with id '" + id + "'");
}

std::vector<std::string> Store::list_ids() const {
  std::vector<std::string> out;
  for_each_line(read_all(transcripts_path()), [&](int, std::string_view line) {
    if (auto id = line_id(line)) out.push_back(*id);
    return true;
  });
  return out;
}

void Store::write_manifest(const std::string& run_id, const Json& manifest) {
  std::lock_guard lock(write_mu_);
  write_file_atomic(dir_ / "manifests" / (run_id + ".json"), manifest.dump(2) + "\n");
}

Json Store::read_manifest(const std::string& run_id) const {
  const auto path = dir_ / "manifests" / (run_id + ".json");
  if (!fs::exists(path)) throw Error(ErrorCode::NotFound, "no manifest " + path.string());
  try {
    return Json::parse(read_all(path));
  } catch (const Json::exception& e) {
    throw Error::corrupt(1, {e.what()});
  }
}

}  // namespace colm::store
