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

#pragma once

#include <cstdint>
#include <span>

#include "hqnn/nn/tensor.hpp"

namespace hqnn::hybrid {

inline constexpr double kProbClamp = 1e-12;

/// Mean cross-entropy of [batch x c] class probabilities. For c = 2 this is
/// the binary form with p = P(class 1); otherwise the mean of -log p_label.
/// Probabilities are clamped to [1e-12, 1 - 1e-12].
double cross_entropy(const nn::Tensor &probs, std::span<const std::uint8_t> labels);

/// dL/d(probs) for cross_entropy(), evaluated at the clamped probabilities.
nn::Tensor cross_entropy_grad(const nn::Tensor &probs,
                              std::span<const std::uint8_t> labels);

} // namespace hqnn::hybrid
