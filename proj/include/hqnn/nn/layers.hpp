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
 * Classical layers with hand-derived backward passes.
 *
 * Image tensors are [batch x channels x height x width]; dense tensors are
 * [batch x features]. Each layer caches what its backward pass needs during
 * forward(); backward() accumulates parameter gradients into the layer and
 * returns the gradient with respect to the layer input.
 */

#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hqnn/nn/tensor.hpp"

namespace hqnn::nn {

enum class LayerKind : std::uint8_t {
    Dense,
    Conv2D,
    ReLU,
    MaxPool2D,
    GlobalAvgPool,
    Flatten,
    Sigmoid,
};

const char *layer_name(LayerKind kind);

/// Lower-case identifier used in checkpoint tensor names.
const char *layer_tag(LayerKind kind);

/// A trainable tensor together with its accumulated gradient.
struct ParamRef {
    std::string name;
    Tensor *value;
    Tensor *grad;
};

class Layer {
  public:
    virtual ~Layer() = default;

    [[nodiscard]] virtual LayerKind kind() const = 0;
    [[nodiscard]] virtual std::unique_ptr<Layer> clone() const = 0;

    /// Shape produced for `input`; throws ShapeError when the input is not
    /// accepted.
    [[nodiscard]] virtual Shape output_shape(const Shape &input) const = 0;

    virtual Tensor forward(const Tensor &input) = 0;
    virtual Tensor backward(const Tensor &grad_output) = 0;

    /// Constructor arguments as reals, in declaration order.
    [[nodiscard]] virtual std::vector<double> hyperparameters() const { return {}; }

    virtual std::vector<ParamRef> params() { return {}; }

    /// Distance of the last forward input from the nearest point where this
    /// layer is not differentiable. Infinity for smooth layers.
    [[nodiscard]] virtual double kink_margin() const {
        return std::numeric_limits<double>::infinity();
    }

    void zero_grad();
    [[nodiscard]] std::size_t num_parameters();
};

using LayerPtr = std::unique_ptr<Layer>;
using LayerStack = std::vector<LayerPtr>;

class Dense final : public Layer {
  public:
    Dense(std::size_t in, std::size_t out);

    [[nodiscard]] LayerKind kind() const override { return LayerKind::Dense; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;
    [[nodiscard]] Shape output_shape(const Shape &input) const override;
    Tensor forward(const Tensor &input) override;
    Tensor backward(const Tensor &grad_output) override;
    [[nodiscard]] std::vector<double> hyperparameters() const override;
    std::vector<ParamRef> params() override;

    [[nodiscard]] std::size_t in_features() const { return in_; }
    [[nodiscard]] std::size_t out_features() const { return out_; }
    Tensor &weight() { return weight_; } // [out x in]
    Tensor &bias() { return bias_; }

  private:
    std::size_t in_, out_;
    Tensor weight_, bias_, grad_weight_, grad_bias_;
    Tensor input_;
    bool has_input_ = false;
};

class Conv2D final : public Layer {
  public:
    Conv2D(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
           std::size_t stride = 1, std::size_t padding = 0);

    [[nodiscard]] LayerKind kind() const override { return LayerKind::Conv2D; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;
    [[nodiscard]] Shape output_shape(const Shape &input) const override;
    Tensor forward(const Tensor &input) override;
    Tensor backward(const Tensor &grad_output) override;
    [[nodiscard]] std::vector<double> hyperparameters() const override;
    std::vector<ParamRef> params() override;

    Tensor &weight() { return weight_; } // [out_ch x in_ch x k x k]
    Tensor &bias() { return bias_; }

  private:
    std::size_t in_ch_, out_ch_, k_, stride_, pad_;
    Tensor weight_, bias_, grad_weight_, grad_bias_;
    Tensor input_;
    bool has_input_ = false;
};

class ReLU final : public Layer {
  public:
    [[nodiscard]] LayerKind kind() const override { return LayerKind::ReLU; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;
    [[nodiscard]] Shape output_shape(const Shape &input) const override { return input; }
    Tensor forward(const Tensor &input) override;
    Tensor backward(const Tensor &grad_output) override;
    [[nodiscard]] double kink_margin() const override;

  private:
    Tensor input_;
    bool has_input_ = false;
};

class MaxPool2D final : public Layer {
  public:
    MaxPool2D(std::size_t kernel, std::size_t stride);

    [[nodiscard]] LayerKind kind() const override { return LayerKind::MaxPool2D; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;
    [[nodiscard]] Shape output_shape(const Shape &input) const override;
    Tensor forward(const Tensor &input) override;
    Tensor backward(const Tensor &grad_output) override;
    [[nodiscard]] std::vector<double> hyperparameters() const override;
    [[nodiscard]] double kink_margin() const override { return margin_; }

  private:
    std::size_t k_, stride_;
    Shape input_shape_;
    std::vector<std::size_t> argmax_; // flat input index per output element
    double margin_ = std::numeric_limits<double>::infinity();
    bool has_input_ = false;
};

/// [B x C x H x W] -> [B x C x 1 x 1]
class GlobalAvgPool final : public Layer {
  public:
    [[nodiscard]] LayerKind kind() const override { return LayerKind::GlobalAvgPool; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;
    [[nodiscard]] Shape output_shape(const Shape &input) const override;
    Tensor forward(const Tensor &input) override;
    Tensor backward(const Tensor &grad_output) override;

  private:
    Shape input_shape_;
    bool has_input_ = false;
};

/// [B x ...] -> [B x prod(...)]
class Flatten final : public Layer {
  public:
    [[nodiscard]] LayerKind kind() const override { return LayerKind::Flatten; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;
    [[nodiscard]] Shape output_shape(const Shape &input) const override;
    Tensor forward(const Tensor &input) override;
    Tensor backward(const Tensor &grad_output) override;

  private:
    Shape input_shape_;
    bool has_input_ = false;
};

class Sigmoid final : public Layer {
  public:
    [[nodiscard]] LayerKind kind() const override { return LayerKind::Sigmoid; }
    [[nodiscard]] std::unique_ptr<Layer> clone() const override;
    [[nodiscard]] Shape output_shape(const Shape &input) const override { return input; }
    Tensor forward(const Tensor &input) override;
    Tensor backward(const Tensor &grad_output) override;

  private:
    Tensor output_;
    bool has_output_ = false;
};

/// Rebuilds a layer from its kind and hyperparameters() values.
LayerPtr make_layer(LayerKind kind, const std::vector<double> &hyper);

/// Uniform ±sqrt(6 / (fan_in + fan_out)) weights, zero biases.
void init_glorot_uniform(Layer &layer, std::mt19937_64 &rng);

LayerStack clone_stack(const LayerStack &stack);
Tensor forward_stack(LayerStack &stack, const Tensor &input);
/// Runs backward through `stack` in reverse order.
Tensor backward_stack(LayerStack &stack, const Tensor &grad_output);
Shape output_shape(const LayerStack &stack, const Shape &input);

// Free-function spellings used by tests and tooling.
inline Tensor layer_forward(Layer &layer, const Tensor &input) {
    return layer.forward(input);
}
inline Tensor layer_backward(Layer &layer, const Tensor &grad_output) {
    return layer.backward(grad_output);
}

} // namespace hqnn::nn
