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

#ifndef ROSLITE_ASSET_CACHE_H_
#define ROSLITE_ASSET_CACHE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "roslite/util/error.h"

namespace roslite::asset {

class CacheIoError : public Error {
 public:
  using Error::Error;
};

struct CacheEntry {
  std::string checksum;
  std::vector<std::uint8_t> payload;
};

// Directory-backed store of processed assets keyed by URI, one file per URI
// holding the source checksum and the payload. I/O failures and corrupt
// files degrade to misses; they never throw out of get/put.
class AssetCache {
 public:
  // Creates the directory if needed; throws CacheIoError when impossible.
  explicit AssetCache(std::filesystem::path dir);

  // Any entry for `uri`. With `checksum`, a different stored checksum is
  // evicted and reported as a miss.
  std::optional<CacheEntry> get(const std::string& uri, const std::string& checksum = "");
  // Replaces the entry (write to a temp file, then rename).
  void put(const std::string& uri, const std::string& checksum, const std::vector<std::uint8_t>& payload);
  void erase(const std::string& uri);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const std::string& uri) const;
  std::uint64_t hits() const { return hits_.load(); }
  std::uint64_t misses() const { return misses_.load(); }
  std::uint64_t io_errors() const { return io_errors_.load(); }

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
  std::atomic<std::uint64_t> hits_{0}, misses_{0}, io_errors_{0};
};

}  // namespace roslite::asset

#endif  // ROSLITE_ASSET_CACHE_H_
