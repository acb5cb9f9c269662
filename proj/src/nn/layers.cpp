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

#include "hqnn/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "hqnn/error.hpp"
#include "hqnn/simd/kernels.hpp"

namespace hqnn::nn {

namespace {

void require_forward(bool cached, const char *layer) {
    if (!cached) {
        throw StateError(std::string(layer) + ": backward called before forward");
    }
}

void require_shape(const Tensor &t, const Shape &expected, const char *layer) {
    if (t.shape != expected) {
        throw ShapeError(std::string(layer) + ": expected gradient of shape " +
                         shape_string(expected) + ", got " + shape_string(t.shape));
    }
}

void require_rank(const Shape &s, std::size_t rank, const char *layer) {
    if (s.size() != rank) {
        throw ShapeError(std::string(layer) + ": expected rank-" + std::to_string(rank) +
                         " input, got " + shape_string(s));
    }
}

std::size_t to_size(double v) { return static_cast<std::size_t>(v); }

} // namespace

const char *layer_name(LayerKind kind) {
    switch (kind) {
    case LayerKind::Dense:
        return "Dense";
    case LayerKind::Conv2D:
        return "Conv2D";
    case LayerKind::ReLU:
        return "ReLU";
    case LayerKind::MaxPool2D:
        return "MaxPool2D";
    case LayerKind::GlobalAvgPool:
        return "GlobalAvgPool";
    case LayerKind::Flatten:
        return "Flatten";
    case LayerKind::Sigmoid:
        return "Sigmoid";
    }
    return "?";
}

const char *layer_tag(LayerKind kind) {
    switch (kind) {
    case LayerKind::Dense:
        return "dense";
    case LayerKind::Conv2D:
        return "conv2d";
    case LayerKind::ReLU:
        return "relu";
    case LayerKind::MaxPool2D:
        return "maxpool2d";
    case LayerKind::GlobalAvgPool:
        return "globalavgpool";
    case LayerKind::Flatten:
        return "flatten";
    case LayerKind::Sigmoid:
        return "sigmoid";
    }
    return "?";
}

void Layer::zero_grad() {
    for (ParamRef &p : params()) {
        p.grad->fill(0.0);
    }
}

std::size_t Layer::num_parameters() {
    std::size_t n = 0;
    for (ParamRef &p : params()) {
        n += p.value->size();
    }
    return n;
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::size_t in, std::size_t out)
    : in_(in), out_(out), weight_({out, in}), bias_({out}), grad_weight_({out, in}),
      grad_bias_({out}) {}

std::unique_ptr<Layer> Dense::clone() const { return std::make_unique<Dense>(*this); }

Shape Dense::output_shape(const Shape &input) const {
    require_rank(input, 2, "Dense");
    if (input[1] != in_) {
        throw ShapeError("Dense: expected " + std::to_string(in_) + " features, got " +
                         std::to_string(input[1]));
    }
    return {input[0], out_};
}

Tensor Dense::forward(const Tensor &input) {
    Tensor out(output_shape(input.shape));
    const auto &k = simd::active();
    const std::size_t batch = input.dim(0);
    for (std::size_t b = 0; b < batch; ++b) {
        const std::span<const double> x = input.span().subspan(b * in_, in_);
        for (std::size_t o = 0; o < out_; ++o) {
            out[b * out_ + o] = k.dot(weight_.span().subspan(o * in_, in_), x) + bias_[o];
        }
    }
    input_ = input;
    has_input_ = true;
    return out;
}

Tensor Dense::backward(const Tensor &grad_output) {
    require_forward(has_input_, "Dense");
    const std::size_t batch = input_.dim(0);
    require_shape(grad_output, {batch, out_}, "Dense");
    const auto &k = simd::active();
    Tensor grad_in(input_.shape);
    for (std::size_t b = 0; b < batch; ++b) {
        const std::span<const double> x = input_.span().subspan(b * in_, in_);
        const std::span<double> gx = grad_in.span().subspan(b * in_, in_);
        for (std::size_t o = 0; o < out_; ++o) {
            const double g = grad_output[b * out_ + o];
            k.axpy(g, x, grad_weight_.span().subspan(o * in_, in_));
            grad_bias_[o] += g;
            k.axpy(g, weight_.span().subspan(o * in_, in_), gx);
        }
    }
    return grad_in;
}

std::vector<double> Dense::hyperparameters() const {
    return {static_cast<double>(in_), static_cast<double>(out_)};
}

std::vector<ParamRef> Dense::params() {
    return {{"weight", &weight_, &grad_weight_}, {"bias", &bias_, &grad_bias_}};
}

// ---------------------------------------------------------------- Conv2D

Conv2D::Conv2D(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
               std::size_t stride, std::size_t padding)
    : in_ch_(in_channels), out_ch_(out_channels), k_(kernel), stride_(stride),
      pad_(padding), weight_({out_channels, in_channels, kernel, kernel}),
      bias_({out_channels}), grad_weight_({out_channels, in_channels, kernel, kernel}),
      grad_bias_({out_channels}) {
    if (stride == 0) {
        throw ConfigError("Conv2D: stride must be >= 1");
    }
}

std::unique_ptr<Layer> Conv2D::clone() const { return std::make_unique<Conv2D>(*this); }

Shape Conv2D::output_shape(const Shape &input) const {
    require_rank(input, 4, "Conv2D");
    if (input[1] != in_ch_) {
        throw ShapeError("Conv2D: expected " + std::to_string(in_ch_) +
                         " input channels, got " + std::to_string(input[1]));
    }
    const std::size_t h = input[2] + 2 * pad_;
    const std::size_t w = input[3] + 2 * pad_;
    if (k_ > h || k_ > w) {
        throw ShapeError("Conv2D: kernel " + std::to_string(k_) +
                         " larger than padded input " + std::to_string(h) + "×" +
                         std::to_string(w));
    }
    return {input[0], out_ch_, (h - k_) / stride_ + 1, (w - k_) / stride_ + 1};
}

Tensor Conv2D::forward(const Tensor &input) {
    Tensor out(output_shape(input.shape));
    const std::size_t batch = input.dim(0), H = input.dim(2), W = input.dim(3);
    const std::size_t OH = out.dim(2), OW = out.dim(3);
    const auto &kern = simd::active();
    const auto p = static_cast<std::ptrdiff_t>(pad_);
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t oc = 0; oc < out_ch_; ++oc) {
            double *plane = out.data.data() + (b * out_ch_ + oc) * OH * OW;
            std::fill(plane, plane + OH * OW, bias_[oc]);
            for (std::size_t ic = 0; ic < in_ch_; ++ic) {
                const double *in_plane = input.data.data() + (b * in_ch_ + ic) * H * W;
                for (std::size_t ky = 0; ky < k_; ++ky) {
                    for (std::size_t kx = 0; kx < k_; ++kx) {
                        const double w = weight_[((oc * in_ch_ + ic) * k_ + ky) * k_ + kx];
                        const auto dx = static_cast<std::ptrdiff_t>(kx) - p;
                        for (std::size_t oy = 0; oy < OH; ++oy) {
                            const auto iy = static_cast<std::ptrdiff_t>(oy * stride_ + ky) - p;
                            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(H)) {
                                continue;
                            }
                            const double *in_row = in_plane + iy * W;
                            double *out_row = plane + oy * OW;
                            if (stride_ == 1) {
                                const auto lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, -dx));
                                const auto hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                                    static_cast<std::ptrdiff_t>(W) - dx, 0,
                                    static_cast<std::ptrdiff_t>(OW)));
                                if (lo < hi) {
                                    kern.axpy(w, {in_row + lo + dx, hi - lo},
                                              {out_row + lo, hi - lo});
                                }
                            } else {
                                for (std::size_t ox = 0; ox < OW; ++ox) {
                                    const auto ix = static_cast<std::ptrdiff_t>(ox * stride_) + dx;
                                    if (ix >= 0 && ix < static_cast<std::ptrdiff_t>(W)) {
                                        out_row[ox] += w * in_row[ix];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    input_ = input;
    has_input_ = true;
    return out;
}

Tensor Conv2D::backward(const Tensor &grad_output) {
    require_forward(has_input_, "Conv2D");
    require_shape(grad_output, output_shape(input_.shape), "Conv2D");
    const std::size_t batch = input_.dim(0), H = input_.dim(2), W = input_.dim(3);
    const std::size_t OH = grad_output.dim(2), OW = grad_output.dim(3);
    const auto &kern = simd::active();
    const auto p = static_cast<std::ptrdiff_t>(pad_);
    Tensor grad_in(input_.shape);
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t oc = 0; oc < out_ch_; ++oc) {
            const double *g_plane = grad_output.data.data() + (b * out_ch_ + oc) * OH * OW;
            double gb = 0.0;
            for (std::size_t i = 0; i < OH * OW; ++i) {
                gb += g_plane[i];
            }
            grad_bias_[oc] += gb;
            for (std::size_t ic = 0; ic < in_ch_; ++ic) {
                const std::size_t plane_off = (b * in_ch_ + ic) * H * W;
                const double *in_plane = input_.data.data() + plane_off;
                double *gi_plane = grad_in.data.data() + plane_off;
                for (std::size_t ky = 0; ky < k_; ++ky) {
                    for (std::size_t kx = 0; kx < k_; ++kx) {
                        const std::size_t widx = ((oc * in_ch_ + ic) * k_ + ky) * k_ + kx;
                        const double w = weight_[widx];
                        const auto dx = static_cast<std::ptrdiff_t>(kx) - p;
                        double gw = 0.0;
                        for (std::size_t oy = 0; oy < OH; ++oy) {
                            const auto iy = static_cast<std::ptrdiff_t>(oy * stride_ + ky) - p;
                            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(H)) {
                                continue;
                            }
                            const double *in_row = in_plane + iy * W;
                            double *gi_row = gi_plane + iy * W;
                            const double *g_row = g_plane + oy * OW;
                            if (stride_ == 1) {
                                const auto lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, -dx));
                                const auto hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                                    static_cast<std::ptrdiff_t>(W) - dx, 0,
                                    static_cast<std::ptrdiff_t>(OW)));
                                if (lo < hi) {
                                    gw += kern.dot({g_row + lo, hi - lo}, {in_row + lo + dx, hi - lo});
                                    kern.axpy(w, {g_row + lo, hi - lo}, {gi_row + lo + dx, hi - lo});
                                }
                            } else {
                                for (std::size_t ox = 0; ox < OW; ++ox) {
                                    const auto ix = static_cast<std::ptrdiff_t>(ox * stride_) + dx;
                                    if (ix >= 0 && ix < static_cast<std::ptrdiff_t>(W)) {
                                        gw += g_row[ox] * in_row[ix];
                                        gi_row[ix] += w * g_row[ox];
                                    }
                                }
                            }
                        }
                        grad_weight_[widx] += gw;
                    }
                }
            }
        }
    }
    return grad_in;
}

std::vector<double> Conv2D::hyperparameters() const {
    return {static_cast<double>(in_ch_), static_cast<double>(out_ch_),
            static_cast<double>(k_), static_cast<double>(stride_),
            static_cast<double>(pad_)};
}

std::vector<ParamRef> Conv2D::params() {
    return {{"weight", &weight_, &grad_weight_}, {"bias", &bias_, &grad_bias_}};
}

// ---------------------------------------------------------------- ReLU

std::unique_ptr<Layer> ReLU::clone() const { return std::make_unique<ReLU>(*this); }

Tensor ReLU::forward(const Tensor &input) {
    Tensor out = input;
    for (double &v : out.data) {
        v = v > 0.0 ? v : 0.0;
    }
    input_ = input;
    has_input_ = true;
    return out;
}

Tensor ReLU::backward(const Tensor &grad_output) {
    require_forward(has_input_, "ReLU");
    require_shape(grad_output, input_.shape, "ReLU");
    Tensor g = grad_output;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(input_[i] > 0.0)) {
            g[i] = 0.0; // subgradient 0 at the kink
        }
    }
    return g;
}

double ReLU::kink_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : input_.data) {
        m = std::min(m, std::abs(v));
    }
    return m;
}

// ---------------------------------------------------------------- MaxPool2D

MaxPool2D::MaxPool2D(std::size_t kernel, std::size_t stride) : k_(kernel), stride_(stride) {
    if (kernel == 0 || stride == 0) {
        throw ConfigError("MaxPool2D: kernel and stride must be >= 1");
    }
}

std::unique_ptr<Layer> MaxPool2D::clone() const { return std::make_unique<MaxPool2D>(*this); }

Shape MaxPool2D::output_shape(const Shape &input) const {
    require_rank(input, 4, "MaxPool2D");
    if (k_ > input[2] || k_ > input[3]) {
        throw ShapeError("MaxPool2D: window " + std::to_string(k_) +
                         " larger than input " + shape_string(input));
    }
    return {input[0], input[1], (input[2] - k_) / stride_ + 1,
            (input[3] - k_) / stride_ + 1};
}

Tensor MaxPool2D::forward(const Tensor &input) {
    Tensor out(output_shape(input.shape));
    const std::size_t planes = input.dim(0) * input.dim(1);
    const std::size_t H = input.dim(2), W = input.dim(3);
    const std::size_t OH = out.dim(2), OW = out.dim(3);
    argmax_.assign(out.size(), 0);
    margin_ = std::numeric_limits<double>::infinity();
    for (std::size_t pl = 0; pl < planes; ++pl) {
        const std::size_t in_off = pl * H * W;
        for (std::size_t oy = 0; oy < OH; ++oy) {
            for (std::size_t ox = 0; ox < OW; ++ox) {
                double best = -std::numeric_limits<double>::infinity();
                double second = best;
                std::size_t best_idx = 0;
                for (std::size_t ky = 0; ky < k_; ++ky) {
                    for (std::size_t kx = 0; kx < k_; ++kx) {
                        const std::size_t idx =
                            in_off + (oy * stride_ + ky) * W + (ox * stride_ + kx);
                        const double v = input[idx];
                        if (v > best) { // strict: first maximal index wins
                            second = best;
                            best = v;
                            best_idx = idx;
                        } else if (v > second) {
                            second = v;
                        }
                    }
                }
                const std::size_t o = (pl * OH + oy) * OW + ox;
                out[o] = best;
                argmax_[o] = best_idx;
                if (k_ > 1) {
                    margin_ = std::min(margin_, best - second);
                }
            }
        }
    }
    input_shape_ = input.shape;
    has_input_ = true;
    return out;
}

Tensor MaxPool2D::backward(const Tensor &grad_output) {
    require_forward(has_input_, "MaxPool2D");
    require_shape(grad_output, output_shape(input_shape_), "MaxPool2D");
    Tensor g(input_shape_);
    for (std::size_t o = 0; o < grad_output.size(); ++o) {
        g[argmax_[o]] += grad_output[o];
    }
    return g;
}

std::vector<double> MaxPool2D::hyperparameters() const {
    return {static_cast<double>(k_), static_cast<double>(stride_)};
}

// ---------------------------------------------------------------- GlobalAvgPool

std::unique_ptr<Layer> GlobalAvgPool::clone() const {
    return std::make_unique<GlobalAvgPool>(*this);
}

Shape GlobalAvgPool::output_shape(const Shape &input) const {
    require_rank(input, 4, "GlobalAvgPool");
    return {input[0], input[1], 1, 1};
}

Tensor GlobalAvgPool::forward(const Tensor &input) {
    Tensor out(output_shape(input.shape));
    const std::size_t area = input.dim(2) * input.dim(3);
    for (std::size_t pl = 0; pl < out.size(); ++pl) {
        double s = 0.0;
        for (std::size_t i = 0; i < area; ++i) {
            s += input[pl * area + i];
        }
        out[pl] = s / static_cast<double>(area);
    }
    input_shape_ = input.shape;
    has_input_ = true;
    return out;
}

Tensor GlobalAvgPool::backward(const Tensor &grad_output) {
    require_forward(has_input_, "GlobalAvgPool");
    require_shape(grad_output, output_shape(input_shape_), "GlobalAvgPool");
    Tensor g(input_shape_);
    const std::size_t area = input_shape_[2] * input_shape_[3];
    for (std::size_t pl = 0; pl < grad_output.size(); ++pl) {
        const double v = grad_output[pl] / static_cast<double>(area);
        std::fill_n(g.data.begin() + static_cast<std::ptrdiff_t>(pl * area), area, v);
    }
    return g;
}

// ---------------------------------------------------------------- Flatten

std::unique_ptr<Layer> Flatten::clone() const { return std::make_unique<Flatten>(*this); }

Shape Flatten::output_shape(const Shape &input) const {
    if (input.size() < 2) {
        throw ShapeError("Flatten: expected rank >= 2 input, got " + shape_string(input));
    }
    return {input[0], shape_size(input) / input[0]};
}

Tensor Flatten::forward(const Tensor &input) {
    Tensor out(output_shape(input.shape), input.data);
    input_shape_ = input.shape;
    has_input_ = true;
    return out;
}

Tensor Flatten::backward(const Tensor &grad_output) {
    require_forward(has_input_, "Flatten");
    require_shape(grad_output, output_shape(input_shape_), "Flatten");
    return Tensor(input_shape_, grad_output.data);
}

// ---------------------------------------------------------------- Sigmoid

std::unique_ptr<Layer> Sigmoid::clone() const { return std::make_unique<Sigmoid>(*this); }

Tensor Sigmoid::forward(const Tensor &input) {
    Tensor out = input;
    for (double &v : out.data) {
        if (v >= 0.0) {
            v = 1.0 / (1.0 + std::exp(-v));
        } else {
            const double e = std::exp(v);
            v = e / (1.0 + e);
        }
    }
    output_ = out;
    has_output_ = true;
    return out;
}

Tensor Sigmoid::backward(const Tensor &grad_output) {
    require_forward(has_output_, "Sigmoid");
    require_shape(grad_output, output_.shape, "Sigmoid");
    Tensor g = grad_output;
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] *= output_[i] * (1.0 - output_[i]);
    }
    return g;
}

// ---------------------------------------------------------------- helpers

LayerPtr make_layer(LayerKind kind, const std::vector<double> &hyper) {
    auto expect = [&](std::size_t n) {
        if (hyper.size() != n) {
            throw ConfigError(std::string(layer_name(kind)) + " takes " +
                              std::to_string(n) + " hyperparameters, got " +
                              std::to_string(hyper.size()));
        }
        for (double v : hyper) {
            if (!(v >= 0.0) || v != std::floor(v)) {
                throw ConfigError(std::string(layer_name(kind)) +
                                  " hyperparameters must be non-negative integers");
            }
        }
    };
    switch (kind) {
    case LayerKind::Dense:
        expect(2);
        return std::make_unique<Dense>(to_size(hyper[0]), to_size(hyper[1]));
    case LayerKind::Conv2D:
        expect(5);
        return std::make_unique<Conv2D>(to_size(hyper[0]), to_size(hyper[1]),
                                        to_size(hyper[2]), to_size(hyper[3]),
                                        to_size(hyper[4]));
    case LayerKind::MaxPool2D:
        expect(2);
        return std::make_unique<MaxPool2D>(to_size(hyper[0]), to_size(hyper[1]));
    case LayerKind::ReLU:
        expect(0);
        return std::make_unique<ReLU>();
    case LayerKind::GlobalAvgPool:
        expect(0);
        return std::make_unique<GlobalAvgPool>();
    case LayerKind::Flatten:
        expect(0);
        return std::make_unique<Flatten>();
    case LayerKind::Sigmoid:
        expect(0);
        return std::make_unique<Sigmoid>();
    }
    throw ConfigError("unknown layer kind");
}

void init_glorot_uniform(Layer &layer, std::mt19937_64 &rng) {
    double fan_in = 0, fan_out = 0;
    const auto h = layer.hyperparameters();
    if (layer.kind() == LayerKind::Dense) {
        fan_in = h[0];
        fan_out = h[1];
    } else if (layer.kind() == LayerKind::Conv2D) {
        fan_in = h[0] * h[2] * h[2];
        fan_out = h[1] * h[2] * h[2];
    } else {
        return;
    }
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (ParamRef &p : layer.params()) {
        if (p.name == "weight") {
            for (double &v : p.value->data) {
                v = dist(rng);
            }
        } else {
            p.value->fill(0.0);
        }
    }
}

LayerStack clone_stack(const LayerStack &stack) {
    LayerStack out;
    out.reserve(stack.size());
    for (const auto &l : stack) {
        out.push_back(l->clone());
    }
    return out;
}

Tensor forward_stack(LayerStack &stack, const Tensor &input) {
    Tensor x = input;
    for (auto &l : stack) {
        x = l->forward(x);
    }
    return x;
}

Tensor backward_stack(LayerStack &stack, const Tensor &grad_output) {
    Tensor g = grad_output;
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        g = (*it)->backward(g);
    }
    return g;
}

Shape output_shape(const LayerStack &stack, const Shape &input) {
    Shape s = input;
    for (const auto &l : stack) {
        s = l->output_shape(s);
    }
    return s;
}

} // namespace hqnn::nn
