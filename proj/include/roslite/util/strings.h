// Copyright 2026 The roslite Authors.
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

#ifndef ROSLITE_UTIL_STRINGS_H_
#define ROSLITE_UTIL_STRINGS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace roslite::util {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_whitespace(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);
std::string to_lower(std::string_view s);

// Identifier per `[A-Za-z][A-Za-z0-9_]*`.
bool is_identifier(std::string_view s);

bool is_valid_utf8(std::string_view s);

std::string hex_encode(std::span<const std::uint8_t> bytes);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace roslite::util

#endif  // ROSLITE_UTIL_STRINGS_H_
