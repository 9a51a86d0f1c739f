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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acger/numerics.hpp"

namespace acger {

using SlotId = std::size_t;

// Embedding tables are updated row-sparsely; everything else is dense.
enum class SlotKind : std::uint8_t { dense = 0, table = 1 };

struct ParamSlot {
  std::string name;
  SlotKind kind = SlotKind::dense;
  DenseMatrix value;

  bool operator==(const ParamSlot&) const = default;
};

// Named registry of every trainable tensor. Each tensor lives in exactly one
// slot; model components refer to slots by id.
class ModelParams {
 public:
  SlotId add(std::string name, std::size_t rows, std::size_t cols,
             SlotKind kind = SlotKind::dense);

  std::size_t size() const noexcept { return slots_.size(); }
  ParamSlot& operator[](SlotId id) { return slots_[id]; }
  const ParamSlot& operator[](SlotId id) const { return slots_[id]; }
  std::optional<SlotId> find(std::string_view name) const;
  SlotId at(std::string_view name) const;

  std::size_t total_entries() const;

  bool operator==(const ModelParams& other) const { return slots_ == other.slots_; }

 private:
  std::vector<ParamSlot> slots_;
  std::map<std::string, SlotId, std::less<>> index_;
};

// Row `id` of an embedding table. Throws naming the table when out of range.
DenseVector lookup(const ParamSlot& table, std::size_t id);

// Accumulated gradient per slot, same shape as the parameter. Tracks which
// slots (and which rows of table slots) received gradient so that optimizer
// steps and regularization stay sparse.
class Gradients {
 public:
  explicit Gradients(const ModelParams& params);

  std::size_t size() const noexcept { return grads_.size(); }
  DenseMatrix& grad(SlotId id) { return grads_[id]; }
  const DenseMatrix& grad(SlotId id) const { return grads_[id]; }

  void touch(SlotId id);
  void touch_row(SlotId id, std::size_t row);
  bool touched(SlotId id) const { return slot_touched_[id] != 0; }
  bool is_table(SlotId id) const { return is_table_[id] != 0; }
  // Rows of a table slot that received gradient, in first-touch order.
  const std::vector<std::size_t>& touched_rows(SlotId id) const { return rows_[id]; }

  // Zeroes every touched region and clears the touch records.
  void reset();

 private:
  std::vector<DenseMatrix> grads_;
  std::vector<std::uint8_t> is_table_;
  std::vector<std::uint8_t> slot_touched_;
  std::vector<std::vector<std::uint8_t>> row_flags_;
  std::vector<std::vector<std::size_t>> rows_;
};

}  // namespace acger
