// Copyright 2026 The HQNN Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * HQNN checkpoint container (little-endian):
 *
 *   "HQNN" | version u32 = 1 | model kind u8 (0 classical, 1 hybrid)
 *   hybrid only: qubits u8 | feature-map reps u8 | ansatz reps u8 | classes u16
 *   tensor count u32
 *   per tensor: name length u16 | UTF-8 name | rank u8 | dims u32 × rank |
 *               payload f64 × prod(dims)
 *
 * Every layer of a stack writes `<stack>.<i>.<tag>.config` holding its
 * hyperparameters (possibly empty: dims [0]), followed by its `.weight` and
 * `.bias` tensors when it has them. The hybrid head weights are
 * `qnn.weights`. This makes a checkpoint self-describing.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "hqnn/hybrid/model.hpp"

namespace hqnn::hybrid {

std::vector<std::uint8_t> encode_checkpoint(const Model &model);
std::unique_ptr<Model> decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const Model &model, const std::filesystem::path &path);
std::unique_ptr<Model> load_checkpoint(const std::filesystem::path &path);

/// Length of the encoded checkpoint in bytes.
std::size_t model_size_bytes(const Model &model);

} // namespace hqnn::hybrid
