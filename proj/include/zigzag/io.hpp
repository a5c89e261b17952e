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

#include <string>
#include <string_view>

namespace zigzag {

// Write to <path>.tmp and rename over <path>; creates parent directories.
void atomic_write(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);
std::string sha256_hex(std::string_view data);

// Shortest round-trip decimal form, locale independent.
std::string fmt_double(double v);

}  // namespace zigzag
