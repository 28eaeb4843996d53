// Copyright 2026 the maskenc authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maskenc {

/// Base class for all failures raised by this library. Precondition
/// violations use std::invalid_argument directly.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (JSON, compressed run-length strings).
struct parse_error : error {
  std::size_t byte_offset;
  parse_error(const std::string& what, std::size_t offset)
      : error(what + " (byte " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
};

/// Binary container violations: bad magic, unsupported version, truncation.
struct format_error : error {
  using error::error;
};

/// Cross-artifact consistency failures, e.g. codes that do not match the
/// codebook they are decoded with.
struct validation_error : error {
  using error::error;
};

}  // namespace maskenc
