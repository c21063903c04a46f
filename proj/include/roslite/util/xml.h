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

#ifndef ROSLITE_UTIL_XML_H_
#define ROSLITE_UTIL_XML_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roslite/util/error.h"

// Small recursive-descent XML reader covering what XML-RPC and URDF use:
// elements, attributes, character data, CDATA, comments, processing
// instructions and a skipped DOCTYPE. Entities: the five predefined ones plus
// numeric references.
namespace roslite::xml {

class XmlSyntaxError : public Error {
 public:
  XmlSyntaxError(std::size_t offset, const std::string& reason)
      : Error("xml syntax error at offset " + std::to_string(offset) + ": " + reason), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class DepthExceeded : public XmlSyntaxError {
 public:
  DepthExceeded(std::size_t offset, int limit)
      : XmlSyntaxError(offset, "nesting deeper than " + std::to_string(limit)) {}
};

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  // Character data directly inside this element, concatenated.
  std::string text;

  const std::string* attr(std::string_view key) const;
  const Element* child(std::string_view child_name) const;
  std::vector<const Element*> children_named(std::string_view child_name) const;
};

inline constexpr int kDefaultMaxDepth = 64;

Element parse(std::string_view document, int max_depth = kDefaultMaxDepth);

std::string escape(std::string_view text);

}  // namespace roslite::xml

#endif  // ROSLITE_UTIL_XML_H_
