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

#include "acger/params.hpp"

#include <algorithm>

#include "acger/error.hpp"

namespace acger {

SlotId ModelParams::add(std::string name, std::size_t rows, std::size_t cols,
                        SlotKind kind) {
  if (rows == 0 || cols == 0) {
    throw_usage("parameter '" + name + "' must have positive shape");
  }
  if (index_.count(name) != 0) {
    throw_usage("parameter '" + name + "' registered twice");
  }
  const SlotId id = slots_.size();
  index_.emplace(name, id);
  slots_.push_back(ParamSlot{std::move(name), kind, DenseMatrix(rows, cols)});
  return id;
}

std::optional<SlotId> ModelParams::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

SlotId ModelParams::at(std::string_view name) const {
  auto id = find(name);
  if (!id) {
    throw_usage("unknown parameter '" + std::string(name) + "'");
  }
  return *id;
}

std::size_t ModelParams::total_entries() const {
  std::size_t n = 0;
  for (const auto& s : slots_) {
    n += s.value.size();
  }
  return n;
}

DenseVector lookup(const ParamSlot& table, std::size_t id) {
  if (id >= table.value.rows()) {
    throw_data("lookup: id " + std::to_string(id) + " out of range for table '" +
               table.name + "' with " + std::to_string(table.value.rows()) + " rows");
  }
  auto row = table.value.row(id);
  return DenseVector(std::vector<double>(row.begin(), row.end()));
}

Gradients::Gradients(const ModelParams& params) {
  const std::size_t n = params.size();
  grads_.reserve(n);
  is_table_.resize(n);
  slot_touched_.assign(n, 0);
  row_flags_.resize(n);
  rows_.resize(n);
  for (SlotId i = 0; i < n; ++i) {
    const auto& v = params[i].value;
    grads_.emplace_back(v.rows(), v.cols());
    is_table_[i] = params[i].kind == SlotKind::table ? 1 : 0;
    if (is_table_[i]) {
      row_flags_[i].assign(v.rows(), 0);
    }
  }
}

void Gradients::touch(SlotId id) {
  slot_touched_[id] = 1;
}

void Gradients::touch_row(SlotId id, std::size_t row) {
  slot_touched_[id] = 1;
  if (!is_table_[id]) {
    return;
  }
  if (!row_flags_[id][row]) {
    row_flags_[id][row] = 1;
    rows_[id].push_back(row);
  }
}

void Gradients::reset() {
  for (SlotId i = 0; i < grads_.size(); ++i) {
    if (!slot_touched_[i]) {
      continue;
    }
    if (is_table_[i]) {
      for (std::size_t r : rows_[i]) {
        auto row = grads_[i].row(r);
        std::fill(row.begin(), row.end(), 0.0);
        row_flags_[i][r] = 0;
      }
      rows_[i].clear();
    } else {
      grads_[i].fill(0.0);
    }
    slot_touched_[i] = 0;
  }
}

}  // namespace acger
