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

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "hqnn/nn/layers.hpp"

namespace hqnn::hybrid {

enum class OptimizerKind { Adam, Sgd };

OptimizerKind parse_optimizer(std::string_view name);

class Optimizer {
  public:
    virtual ~Optimizer() = default;
    /// Updates every parameter from its accumulated gradient. The parameter
    /// list must keep the same order and shapes across calls.
    virtual void step(std::span<const nn::ParamRef> params) = 0;
};

/// p <- p - lr * g
class Sgd final : public Optimizer {
  public:
    explicit Sgd(double lr) : lr_(lr) {}
    void step(std::span<const nn::ParamRef> params) override;

  private:
    double lr_;
};

/// Bias-corrected Adam.
class Adam final : public Optimizer {
  public:
    explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}
    void step(std::span<const nn::ParamRef> params) override;

  private:
    double lr_, beta1_, beta2_, eps_;
    long step_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double lr);

} // namespace hqnn::hybrid
