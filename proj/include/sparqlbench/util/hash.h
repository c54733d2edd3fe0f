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

#include <cstdint>
#include <string>
#include <string_view>

namespace sparqlbench::util {

std::string sha256_hex(std::string_view data);

uint64_t fnv1a64(std::string_view data);

// splitmix64 finalizer; used to derive independent per-item seeds.
uint64_t mix64(uint64_t x);

uint64_t derive_seed(uint64_t run_seed, std::string_view scope,
                     std::string_view key);

}  // namespace sparqlbench::util
