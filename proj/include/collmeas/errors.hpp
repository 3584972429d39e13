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

#include <stdexcept>
#include <string>

namespace collmeas {

/// Input outside an operation's mathematical domain (bad angle, index, concurrence, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Strategy evaluation produced an all-zero coincidence vector, so post-selection is undefined.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver failed to converge. `diagnostics` carries the last iterate and residuals.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string &what, std::string diagnostics)
      : std::runtime_error(what + " [" + diagnostics + "]"), diagnostics_(std::move(diagnostics)) {}

  const std::string &diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace collmeas
