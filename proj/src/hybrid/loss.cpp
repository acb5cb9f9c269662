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

#include "hqnn/hybrid/loss.hpp"

#include <algorithm>
#include <cmath>

#include "hqnn/error.hpp"

namespace hqnn::hybrid {

namespace {

void check_inputs(const nn::Tensor &probs, std::span<const std::uint8_t> labels) {
    if (probs.rank() != 2 || probs.dim(1) < 2 || probs.dim(0) != labels.size()) {
        throw ShapeError("cross_entropy: probabilities " + nn::shape_string(probs.shape) +
                         " do not match " + std::to_string(labels.size()) + " label(s)");
    }
    for (std::uint8_t l : labels) {
        if (l >= probs.dim(1)) {
            throw DataError("label " + std::to_string(l) + " out of range for " +
                            std::to_string(probs.dim(1)) + " classes");
        }
    }
}

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

} // namespace

double cross_entropy(const nn::Tensor &probs, std::span<const std::uint8_t> labels) {
    check_inputs(probs, labels);
    const std::size_t c = probs.dim(1);
    double total = 0.0;
    for (std::size_t b = 0; b < labels.size(); ++b) {
        if (c == 2) {
            const double p = clamp_prob(probs[2 * b + 1]);
            const double y = labels[b];
            total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        } else {
            total -= std::log(clamp_prob(probs[b * c + labels[b]]));
        }
    }
    return total / static_cast<double>(labels.size());
}

nn::Tensor cross_entropy_grad(const nn::Tensor &probs,
                              std::span<const std::uint8_t> labels) {
    check_inputs(probs, labels);
    const std::size_t c = probs.dim(1);
    const auto n = static_cast<double>(labels.size());
    nn::Tensor g(probs.shape);
    for (std::size_t b = 0; b < labels.size(); ++b) {
        if (c == 2) {
            const double p = clamp_prob(probs[2 * b + 1]);
            const double y = labels[b];
            g[2 * b + 1] = (-y / p + (1.0 - y) / (1.0 - p)) / n;
        } else {
            g[b * c + labels[b]] = -1.0 / (clamp_prob(probs[b * c + labels[b]]) * n);
        }
    }
    return g;
}

} // namespace hqnn::hybrid
