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

#ifndef ROSLITE_TESTS_SUPPORT_RANDOM_VALUE_H_
#define ROSLITE_TESTS_SUPPORT_RANDOM_VALUE_H_

#include <random>
#include <string>

#include "roslite/msg/registry.h"
#include "roslite/serde/dynamic_value.h"

namespace roslite::testing {

struct RandomValueOptions {
  std::size_t max_array = 8;
  std::size_t max_string = 12;
  // Allow NaN/Inf and arbitrary bit patterns for floats.
  bool wild_floats = true;
  // Emit numeric arrays as Seq of scalars some of the time (the codec must
  // accept both layouts).
  bool mix_array_layouts = true;
};

// Builds a random value conforming to `spec`.
serde::DynamicValue random_value(const msg::MsgSpec& spec, const msg::SchemaRegistry& registry, std::mt19937_64& rng,
                                 const RandomValueOptions& options = {});

std::string random_utf8(std::mt19937_64& rng, std::size_t max_len);

}  // namespace roslite::testing

#endif  // ROSLITE_TESTS_SUPPORT_RANDOM_VALUE_H_
