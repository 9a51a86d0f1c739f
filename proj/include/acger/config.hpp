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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "acger/dataset.hpp"
#include "acger/model.hpp"
#include "acger/synthgen.hpp"
#include "acger/training.hpp"
#include "acger/variants.hpp"

namespace acger {

// Flat key/value settings for every stage of a run. Every key always holds a
// value, so dump() is the fully resolved configuration.
class RunConfig {
 public:
  RunConfig();

  // Unknown keys and unparsable values are usage errors. Setting `variant`
  // to a preset label rewrites the four variant_* keys.
  void set(std::string_view key, std::string_view value);
  const std::string& get(std::string_view key) const;
  bool has_key(std::string_view key) const;

  // `key = value` lines; blank lines and # comments are skipped.
  void load_file(const std::string& path);
  std::string dump() const;
  const std::map<std::string, std::string, std::less<>>& values() const noexcept {
    return values_;
  }

  TrainConfig train_config() const;
  ModelDims dims() const;
  VariantConfig variant() const;
  bool share_fm() const;
  SynthConfig synth_config() const;
  // data_dir defaults plus explicit per-file overrides.
  DataPaths data_paths() const;
  bool has_data() const;

  std::size_t get_size(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;

  static const std::vector<std::string>& keys();

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

// Resolved configuration, input digests and outputs of one command.
struct RunManifest {
  std::string command;
  RunConfig config;
  std::map<std::string, std::string> inputs;  // path -> sha256
  std::vector<std::string> outputs;
};

void write_manifest(const RunManifest& manifest, const std::string& path);
// Throws a data error when an input's digest no longer matches.
RunManifest load_manifest(const std::string& path, bool verify_inputs = true);

std::vector<std::size_t> parse_size_list(std::string_view text);

}  // namespace acger
