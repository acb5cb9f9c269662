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

#include "hqnn/hybrid/optimizer.hpp"

#include <cmath>
#include <string>

#include "hqnn/error.hpp"

namespace hqnn::hybrid {

OptimizerKind parse_optimizer(std::string_view name) {
    if (name == "adam") {
        return OptimizerKind::Adam;
    }
    if (name == "sgd") {
        return OptimizerKind::Sgd;
    }
    throw ConfigError("unknown optimizer '" + std::string(name) + "' (adam|sgd)");
}

void Sgd::step(std::span<const nn::ParamRef> params) {
    for (const nn::ParamRef &p : params) {
        for (std::size_t i = 0; i < p.value->size(); ++i) {
            (*p.value)[i] -= lr_ * (*p.grad)[i];
        }
    }
}

void Adam::step(std::span<const nn::ParamRef> params) {
    if (m_.empty()) {
        for (const nn::ParamRef &p : params) {
            m_.emplace_back(p.value->size(), 0.0);
            v_.emplace_back(p.value->size(), 0.0);
        }
    }
    if (m_.size() != params.size()) {
        throw ConfigError("Adam: parameter list changed between steps");
    }
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    for (std::size_t k = 0; k < params.size(); ++k) {
        const nn::ParamRef &p = params[k];
        auto &m = m_[k];
        auto &v = v_[k];
        if (m.size() != p.value->size()) {
            throw ShapeError("Adam: parameter " + p.name + " changed size");
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double g = (*p.grad)[i];
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            (*p.value)[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
        }
    }
}

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double lr) {
    if (!(lr > 0.0)) {
        throw ConfigError("learning rate must be positive");
    }
    if (kind == OptimizerKind::Adam) {
        return std::make_unique<Adam>(lr);
    }
    return std::make_unique<Sgd>(lr);
}

} // namespace hqnn::hybrid
