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

#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sparqlbench::util {

namespace fs = std::filesystem;

// All of these throw IoError on failure.
std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view content);
// Write to a sibling temp file, then rename over the target.
void write_file_atomic(const fs::path& path, std::string_view content);

// Parses a JSONL file. Blank lines are skipped. A malformed line throws
// IoError unless it is the final line and lacks a newline terminator, in
// which case it is treated as a torn write and reported via `torn_tail`.
std::vector<nlohmann::json> read_jsonl(const fs::path& path,
                                       bool* torn_tail = nullptr);

// Makes a JSONL file safe to append to after an interrupted write: a
// complete but unterminated last line gets its newline, a partial one is
// cut off. Returns true when the file was changed.
bool repair_jsonl_tail(const fs::path& path);

// Appends one JSON object per line. Thread-safe; one writer per file.
class JsonlAppender {
 public:
  explicit JsonlAppender(fs::path path);
  void append(const nlohmann::json& value);
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::mutex mu_;
};

}  // namespace sparqlbench::util
