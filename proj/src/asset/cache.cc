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

#include "roslite/asset/cache.h"

#include <unistd.h>

#include <fstream>
#include <iterator>

#include "roslite/util/digest.h"

namespace roslite::asset {

namespace fs = std::filesystem;

// Layout: magic line, checksum line, uri line, payload md5 line, payload.
static constexpr std::string_view kMagic = "roslite-asset-cache 1";

AssetCache::AssetCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) throw CacheIoError("cannot use cache directory " + dir_.string());
}

fs::path AssetCache::path_for(const std::string& uri) const { return dir_ / (util::md5_hex(uri) + ".asset"); }

std::optional<CacheEntry> AssetCache::get(const std::string& uri, const std::string& checksum) {
  std::lock_guard lock(mu_);
  fs::path p = path_for(uri);
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    misses_.fetch_add(1);
    return std::nullopt;
  }
  std::string magic, stored_checksum, stored_uri, digest;
  std::getline(in, magic);
  std::getline(in, stored_checksum);
  std::getline(in, stored_uri);
  std::getline(in, digest);
  bool header_ok = static_cast<bool>(in);
  std::vector<std::uint8_t> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  bool valid = header_ok && magic == kMagic && stored_uri == uri && util::md5_hex(payload) == digest;
  if (!valid || (!checksum.empty() && stored_checksum != checksum)) {
    in.close();
    std::error_code ec;
    fs::remove(p, ec);
    if (!valid) io_errors_.fetch_add(1);
    misses_.fetch_add(1);
    return std::nullopt;
  }
  hits_.fetch_add(1);
  return CacheEntry{stored_checksum, std::move(payload)};
}

void AssetCache::put(const std::string& uri, const std::string& checksum, const std::vector<std::uint8_t>& payload) {
  std::lock_guard lock(mu_);
  fs::path p = path_for(uri);
  fs::path tmp = p;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << kMagic << '\n' << checksum << '\n' << uri << '\n' << util::md5_hex(payload) << '\n';
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out) {
      io_errors_.fetch_add(1);
      std::error_code ec;
      fs::remove(tmp, ec);
      return;
    }
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) {
    io_errors_.fetch_add(1);
    fs::remove(tmp, ec);
  }
}

void AssetCache::erase(const std::string& uri) {
  std::lock_guard lock(mu_);
  std::error_code ec;
  fs::remove(path_for(uri), ec);
}

}  // namespace roslite::asset
