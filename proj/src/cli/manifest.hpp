// Copyright 2026 The collmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cli/json_writer.hpp"

namespace collmeas::cli {

inline constexpr const char *kToolVersion = "1.0.0";

std::string sha256_hex(const std::string &bytes);

/// Writes `contents` to `path` (binary, LF preserved) and returns its SHA-256.
std::string write_output(const std::filesystem::path &path, const std::string &contents);

struct RunManifest {
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  double duration_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> outputs;  // (path, sha256)

  Json to_json() const;
};

}  // namespace collmeas::cli
