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
 * End-to-end classifiers: a classical backbone feeding either a sampler QNN
 * head (HybridModel) or a sigmoid head (ClassicalModel).
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hqnn/nn/backbone.hpp"
#include "hqnn/nn/layers.hpp"
#include "hqnn/qnn.hpp"

namespace hqnn::hybrid {

enum class ModelKind : std::uint8_t { Classical = 0, Hybrid = 1 };

const char *model_kind_name(ModelKind kind);

class Model {
  public:
    virtual ~Model() = default;

    [[nodiscard]] virtual ModelKind kind() const = 0;
    [[nodiscard]] virtual std::size_t num_classes() const = 0;
    [[nodiscard]] virtual std::unique_ptr<Model> clone() const = 0;

    /// Class probabilities [batch x num_classes]; caches state for backward().
    virtual nn::Tensor forward(const nn::Tensor &batch) = 0;

    /// Backpropagates dL/d(class probabilities) from the last forward() and
    /// accumulates gradients into every parameter.
    virtual void backward(const nn::Tensor &grad_probs) = 0;

    /// Every trainable tensor, named as in the checkpoint.
    virtual std::vector<nn::ParamRef> parameters() = 0;

    [[nodiscard]] virtual const nn::LayerStack &backbone() const = 0;

    void zero_grad();
    [[nodiscard]] std::size_t num_parameters();

    /// Copies parameter values from a model of identical architecture.
    void assign_parameters(Model &other);
};

struct HybridConfig {
    nn::BackboneConfig backbone; // out_features is overridden by `qubits`
    unsigned qubits = 1;
    unsigned feature_map_reps = 1;
    unsigned ansatz_reps = 1;
    std::size_t num_classes = 2;
    std::uint64_t seed = 0;
};

/// Backbone -> Z feature map + RealAmplitudes sampler -> outcome folding.
/// Outcome k maps to class k mod num_classes.
class HybridModel final : public Model {
  public:
    explicit HybridModel(const HybridConfig &config);
    HybridModel(nn::LayerStack backbone, unsigned qubits, unsigned feature_map_reps,
                unsigned ansatz_reps, std::size_t num_classes,
                std::vector<double> qnn_weights);
    HybridModel(const HybridModel &other);
    HybridModel &operator=(const HybridModel &) = delete;

    [[nodiscard]] ModelKind kind() const override { return ModelKind::Hybrid; }
    [[nodiscard]] std::size_t num_classes() const override { return classes_; }
    [[nodiscard]] std::unique_ptr<Model> clone() const override;
    nn::Tensor forward(const nn::Tensor &batch) override;
    void backward(const nn::Tensor &grad_probs) override;
    std::vector<nn::ParamRef> parameters() override;
    [[nodiscard]] const nn::LayerStack &backbone() const override { return backbone_; }

    [[nodiscard]] const SamplerQnn &qnn() const { return qnn_; }
    [[nodiscard]] std::span<const double> qnn_weights() const { return weights_.data; }
    void set_qnn_weights(std::span<const double> w);
    [[nodiscard]] unsigned feature_map_reps() const { return fm_reps_; }
    [[nodiscard]] unsigned ansatz_reps() const { return ansatz_reps_; }

    /// Fault injection for verification tooling; see ShiftRule.
    void set_shift_rule(const ShiftRule &rule) { rule_ = rule; }

  private:
    void check();

    nn::LayerStack backbone_;
    SamplerQnn qnn_;
    unsigned fm_reps_, ansatz_reps_;
    std::size_t classes_;
    nn::Tensor weights_, grad_weights_;
    ShiftRule rule_;
    std::optional<nn::Tensor> features_;
};

struct ClassicalConfig {
    nn::BackboneConfig backbone;
    /// 0 gives Dense(f -> 1) + Sigmoid; otherwise Dense(f -> h) + ReLU +
    /// Dense(h -> 1) + Sigmoid.
    std::size_t hidden_units = 0;
    std::uint64_t seed = 0;
};

/// Backbone -> dense head -> sigmoid; returns [1 - p, p] per sample.
class ClassicalModel final : public Model {
  public:
    explicit ClassicalModel(const ClassicalConfig &config);
    ClassicalModel(nn::LayerStack backbone, nn::LayerStack head);
    ClassicalModel(const ClassicalModel &other);
    ClassicalModel &operator=(const ClassicalModel &) = delete;

    [[nodiscard]] ModelKind kind() const override { return ModelKind::Classical; }
    [[nodiscard]] std::size_t num_classes() const override { return 2; }
    [[nodiscard]] std::unique_ptr<Model> clone() const override;
    nn::Tensor forward(const nn::Tensor &batch) override;
    void backward(const nn::Tensor &grad_probs) override;
    std::vector<nn::ParamRef> parameters() override;
    [[nodiscard]] const nn::LayerStack &backbone() const override { return backbone_; }
    [[nodiscard]] const nn::LayerStack &head() const { return head_; }

  private:
    nn::LayerStack backbone_;
    nn::LayerStack head_;
    std::optional<std::size_t> batch_;
};

/// Decision rule. Binary: 0 iff P(0) > P(1), so ties give 1.
/// Multi-class: argmax, ties resolved toward the highest index.
std::vector<std::uint8_t> predict(const nn::Tensor &probs);
std::vector<std::uint8_t> predict(Model &model, const nn::Tensor &batch);

} // namespace hqnn::hybrid
