/*
 * Copyright 2026 The acger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "acger/model.hpp"

namespace acger {

// Checkpoint layout:
//   line 1   "ACGER-CHECKPOINT 1"
//   line 2   byte length L of the JSON header
//   L bytes  JSON header: dims, schema and its hash, universe, variant,
//            rosters, event contexts, slot names and shapes
//   "\n"
//   payload  every slot's values (row-major, registration order) and then
//            the per-user expertise counts, as little-endian IEEE-754 doubles
void save_checkpoint(const Model& model, const std::string& path);

// Throws a data error on a malformed file, on slots whose names or shapes
// disagree with the recorded configuration, or when expected_schema is given
// and its hash differs from the recorded one.
Model load_checkpoint(const std::string& path, const ContextSchema* expected_schema = nullptr);

std::string schema_hash(const ContextSchema& schema);

}  // namespace acger
