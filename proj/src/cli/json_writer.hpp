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

#include <string>

#include "json.hpp"

namespace collmeas::cli {

using Json = nlohmann::ordered_json;

/// Fixed scientific notation, 12 significant digits ("%.11e").
std::string format_real(double value);

/// Serializes with reals in format_real, two-space indent, trailing newline.
/// Non-finite reals become null.
std::string dump_json(const Json &value);

}  // namespace collmeas::cli
