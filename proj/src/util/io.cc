// Copyright 2026 The sparqlbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sparqlbench/util/io.h"

#include <fstream>
#include <sstream>

#include "sparqlbench/errors.h"

namespace sparqlbench::util {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  write_file(tmp, content);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path, bool* torn_tail) {
  if (torn_tail) *torn_tail = false;
  std::string text = read_file(path);
  std::vector<nlohmann::json> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    ++line_no;
    auto nl = text.find('\n', start);
    bool terminated = nl != std::string::npos;
    std::string_view line(text.data() + start,
                          (terminated ? nl : text.size()) - start);
    start = terminated ? nl + 1 : text.size();
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      if (!terminated) {
        if (torn_tail) *torn_tail = true;
        break;
      }
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " +
                    e.what());
    }
  }
  return out;
}

bool repair_jsonl_tail(const fs::path& path) {
  if (!fs::exists(path)) return false;
  std::string text = read_file(path);
  if (text.empty() || text.back() == '\n') return false;
  std::size_t last_nl = text.rfind('\n');
  std::size_t tail_start = last_nl == std::string::npos ? 0 : last_nl + 1;
  std::string_view tail(text.data() + tail_start, text.size() - tail_start);
  if (nlohmann::json::accept(tail)) {
    text += '\n';
  } else {
    text.resize(tail_start);
  }
  write_file_atomic(path, text);
  return true;
}

JsonlAppender::JsonlAppender(fs::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path_.parent_path(), ec);
  }
}

void JsonlAppender::append(const nlohmann::json& value) {
  std::string line = value.dump() + "\n";
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path_.string());
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) throw IoError("append failed: " + path_.string());
}

}  // namespace sparqlbench::util
