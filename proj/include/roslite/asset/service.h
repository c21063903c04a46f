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

#ifndef ROSLITE_ASSET_SERVICE_H_
#define ROSLITE_ASSET_SERVICE_H_

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "roslite/asset/cache.h"
#include "roslite/asset/mesh.h"
#include "roslite/node/node.h"

namespace roslite::asset {

inline constexpr std::string_view kServiceType = "asset_msgs/GetModel";
inline constexpr std::string_view kMeshType = "asset_msgs/NormalizedMesh";
inline constexpr std::string_view kDefaultServiceName = "/iviz/get_model";
inline constexpr std::size_t kMaxResponseBytes = 64u << 20;

struct LoaderOptions {
  std::vector<std::filesystem::path> roots;
  std::string service_name{kDefaultServiceName};
  std::size_t max_response = kMaxResponseBytes;
  std::size_t max_file = kMaxResponseBytes;
};

// Builds an asset_msgs/GetModel response. Never throws: every failure is
// success=false with a message.
serde::DynamicValue load_asset(const std::string& uri, bool want_raw, const LoaderOptions& options);

// Serves load_asset over a node.
class LoaderService {
 public:
  LoaderService(std::shared_ptr<node::Node> node, LoaderOptions options);
  ~LoaderService();
  LoaderService(const LoaderService&) = delete;
  LoaderService& operator=(const LoaderService&) = delete;

  const std::string& name() const { return name_; }
  std::uint64_t requests() const { return requests_.load(); }
  std::uint64_t failures() const { return failures_.load(); }

 private:
  std::shared_ptr<node::Node> node_;
  LoaderOptions options_;
  std::string name_;
  std::atomic<std::uint64_t> requests_{0}, failures_{0};
};

class AssetUnavailable : public Error {
 public:
  using Error::Error;
};

struct FetchResult {
  NormalizedMesh mesh;
  std::string checksum;
  std::string format;
  // Wire bytes of the asset_msgs/NormalizedMesh, identical with or without cache.
  std::vector<std::uint8_t> payload;
  bool from_cache = false;
};

struct RawAsset {
  std::string format;
  std::string checksum;
  std::vector<std::uint8_t> bytes;
};

// Fetches processed meshes through the loader service, consulting `cache`
// (optional) first.
class AssetClient {
 public:
  AssetClient(std::shared_ptr<node::Node> node, std::shared_ptr<AssetCache> cache = nullptr,
              std::string service_name = std::string(kDefaultServiceName));

  // Throws AssetUnavailable (success=false), node::ServiceNotFound, TimeoutError.
  FetchResult fetch(const std::string& uri);
  RawAsset fetch_raw(const std::string& uri);
  std::uint64_t service_calls() const { return service_calls_.load(); }

 private:
  serde::DynamicValue call(const std::string& uri, bool want_raw);

  std::shared_ptr<node::Node> node_;
  std::shared_ptr<AssetCache> cache_;
  std::string service_name_;
  std::atomic<std::uint64_t> service_calls_{0};
};

}  // namespace roslite::asset

#endif  // ROSLITE_ASSET_SERVICE_H_
