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

#include "roslite/asset/service.h"

#include <fstream>
#include <iterator>

#include "roslite/asset/resolver.h"
#include "roslite/serde/codec.h"
#include "roslite/util/digest.h"
#include "roslite/util/strings.h"

namespace roslite::asset {

namespace fs = std::filesystem;
using serde::DynamicValue;

namespace {

const msg::SchemaRegistry& registry() { return msg::builtin_corpus(); }

DynamicValue empty_mesh_value() { return to_dynamic(NormalizedMesh{}); }

DynamicValue response(bool success, std::string message, std::string format, std::string checksum,
                      DynamicValue mesh, std::vector<std::uint8_t> raw) {
  return DynamicValue::record({{"success", success},
                               {"message", std::move(message)},
                               {"format", std::move(format)},
                               {"checksum", std::move(checksum)},
                               {"mesh", std::move(mesh)},
                               {"raw", std::move(raw)}});
}

DynamicValue failure(std::string message) { return response(false, std::move(message), "", "", empty_mesh_value(), {}); }

std::vector<std::uint8_t> read_file(const fs::path& path, std::size_t limit) {
  std::error_code ec;
  auto size = fs::file_size(path, ec);
  if (ec) throw NotFound(path.string() + " not found");
  if (size > limit) throw MeshError("file is " + std::to_string(size) + " bytes, limit " + std::to_string(limit));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound(path.string() + " cannot be opened");
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

DynamicValue load_asset(const std::string& uri, bool want_raw, const LoaderOptions& options) {
  try {
    fs::path path = resolve_uri(uri, options.roots);
    std::vector<std::uint8_t> bytes = read_file(path, options.max_file);
    std::string checksum = util::md5_hex(bytes);
    std::string ext = util::to_lower(path.extension().string());
    if (!ext.empty() && ext.front() == '.') ext.erase(0, 1);
    DynamicValue out;
    if (want_raw) {
      out = response(true, "raw", ext, checksum, empty_mesh_value(), std::move(bytes));
    } else {
      NormalizedMesh mesh;
      MeshStats stats;
      if (ext == "stl") {
        mesh = parse_stl(bytes, &stats);
      } else if (ext == "obj") {
        mesh = parse_obj(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), &stats);
      } else {
        return failure("unsupported mesh format '" + ext + "'; request want_raw for the file bytes");
      }
      std::string message = std::to_string(mesh.triangle_count()) + " triangles";
      if (stats.degenerate_dropped) message += ", " + std::to_string(stats.degenerate_dropped) + " degenerate dropped";
      out = response(true, message, ext, checksum, to_dynamic(mesh), {});
    }
    const msg::SrvSpec& srv = registry().service_at(kServiceType);
    std::size_t size = serde::serialized_size(srv.response, out, registry());
    if (size > options.max_response) {
      return failure("response too large: " + std::to_string(size) + " bytes exceeds " +
                     std::to_string(options.max_response));
    }
    return out;
  } catch (const NotFound& e) {
    return failure(std::string("not found: ") + e.what());
  } catch (const std::exception& e) {
    return failure(e.what());
  }
}

LoaderService::LoaderService(std::shared_ptr<node::Node> node, LoaderOptions options)
    : node_(std::move(node)), options_(std::move(options)), name_(node_->resolve(options_.service_name)) {
  node_->advertise_service(name_, std::string(kServiceType), [this](const DynamicValue& req) {
    requests_.fetch_add(1);
    const auto* uri = req.find("uri");
    const auto* raw = req.find("want_raw");
    DynamicValue res = load_asset(uri && uri->is<std::string>() ? uri->get<std::string>() : "",
                                  raw && raw->is<bool>() && raw->get<bool>(), options_);
    if (!res.at("success").get<bool>()) failures_.fetch_add(1);
    return res;
  });
}

LoaderService::~LoaderService() {
  try {
    node_->unadvertise_service(name_);
  } catch (const std::exception&) {
  }
}

AssetClient::AssetClient(std::shared_ptr<node::Node> node, std::shared_ptr<AssetCache> cache,
                         std::string service_name)
    : node_(std::move(node)), cache_(std::move(cache)), service_name_(std::move(service_name)) {}

DynamicValue AssetClient::call(const std::string& uri, bool want_raw) {
  service_calls_.fetch_add(1);
  DynamicValue res = node_->call_service(service_name_, std::string(kServiceType),
                                         DynamicValue::record({{"uri", uri}, {"want_raw", want_raw}}));
  if (!res.at("success").get<bool>()) throw AssetUnavailable(uri + ": " + res.at("message").get<std::string>());
  return res;
}

FetchResult AssetClient::fetch(const std::string& uri) {
  const msg::MsgSpec& spec = registry().at(kMeshType);
  if (cache_) {
    if (auto hit = cache_->get(uri)) {
      try {
        FetchResult r;
        r.mesh = from_dynamic(serde::deserialize(spec, hit->payload, registry()));
        r.checksum = hit->checksum;
        std::string ext = util::to_lower(fs::path(uri).extension().string());
        r.format = ext.empty() ? ext : ext.substr(1);
        r.payload = std::move(hit->payload);
        r.from_cache = true;
        return r;
      } catch (const std::exception&) {
        cache_->erase(uri);
      }
    }
  }
  DynamicValue res = call(uri, false);
  FetchResult r;
  r.payload = serde::serialize(spec, res.at("mesh"), registry());
  r.mesh = from_dynamic(res.at("mesh"));
  r.checksum = res.at("checksum").get<std::string>();
  r.format = res.at("format").get<std::string>();
  if (cache_) cache_->put(uri, r.checksum, r.payload);
  return r;
}

RawAsset AssetClient::fetch_raw(const std::string& uri) {
  DynamicValue res = call(uri, true);
  RawAsset r;
  r.format = res.at("format").get<std::string>();
  r.checksum = res.at("checksum").get<std::string>();
  const auto& raw = res.at("raw");
  const std::vector<std::uint8_t>* packed = nullptr;
  if (raw.is<DynamicValue::PackedArray>()) packed = std::get_if<std::vector<std::uint8_t>>(&raw.get<DynamicValue::PackedArray>());
  if (packed) {
    r.bytes = *packed;
  } else {
    for (std::size_t i = 0; i < raw.array_size(); ++i) {
      r.bytes.push_back(static_cast<std::uint8_t>(raw.array_element(i).as_double()));
    }
  }
  // A changed source invalidates what the cache holds for this URI.
  if (cache_) cache_->get(uri, r.checksum);
  return r;
}

}  // namespace roslite::asset
