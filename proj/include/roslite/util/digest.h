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

#ifndef ROSLITE_UTIL_DIGEST_H_
#define ROSLITE_UTIL_DIGEST_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Thin wrappers over OpenSSL's digest and base64 primitives.
namespace roslite::util {

std::string md5_hex(std::string_view data);
std::string md5_hex(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 20> sha1(std::string_view data);

std::string base64_encode(std::span<const std::uint8_t> data);
std::string base64_encode(std::string_view data);
// nullopt on malformed input (bad alphabet, bad padding, length not a multiple of 4).
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

}  // namespace roslite::util

#endif  // ROSLITE_UTIL_DIGEST_H_
