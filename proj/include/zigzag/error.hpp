// Copyright 2026 The Zigzag Authors
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

#include <stdexcept>
#include <string>

namespace zigzag {

// Exit codes of the CLI are the integer values of these kinds.
enum class ErrorKind : int {
  kInvalid = 2,    // bad input or schema violation
  kResource = 3,   // memory / size cap
  kNumerical = 4,  // NaN, positivity violation, diverging step control
  kIo = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string field, const std::string& message)
      : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}
  Error(ErrorKind kind, const std::string& message) : Error(kind, "", message) {}

  ErrorKind kind() const { return kind_; }
  const std::string& field() const { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

inline void require(bool ok, ErrorKind kind, const std::string& field, const std::string& message) {
  if (!ok) throw Error(kind, field, message);
}

}  // namespace zigzag
