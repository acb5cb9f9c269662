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

#include "hqnn/hybrid/model.hpp"

#include <random>

#include "hqnn/error.hpp"

namespace hqnn::hybrid {

namespace {

void append_stack_params(std::vector<nn::ParamRef> &out, nn::LayerStack &stack,
                         const std::string &prefix) {
    for (std::size_t i = 0; i < stack.size(); ++i) {
        for (nn::ParamRef &p : stack[i]->params()) {
            p.name = prefix + "." + std::to_string(i) + "." +
                     nn::layer_tag(stack[i]->kind()) + "." + p.name;
            out.push_back(p);
        }
    }
}

std::size_t stack_output_width(const nn::LayerStack &stack) {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        if ((*it)->kind() == nn::LayerKind::Dense) {
            return static_cast<std::size_t>((*it)->hyperparameters()[1]);
        }
    }
    return 0;
}

} // namespace

const char *model_kind_name(ModelKind kind) {
    return kind == ModelKind::Hybrid ? "hybrid" : "classical";
}

void Model::zero_grad() {
    for (nn::ParamRef &p : parameters()) {
        p.grad->fill(0.0);
    }
}

std::size_t Model::num_parameters() {
    std::size_t n = 0;
    for (nn::ParamRef &p : parameters()) {
        n += p.value->size();
    }
    return n;
}

void Model::assign_parameters(Model &other) {
    auto dst = parameters();
    auto src = other.parameters();
    if (dst.size() != src.size()) {
        throw ConfigError("cannot copy parameters between different architectures");
    }
    for (std::size_t i = 0; i < dst.size(); ++i) {
        if (dst[i].name != src[i].name || dst[i].value->shape != src[i].value->shape) {
            throw ConfigError("parameter mismatch at " + dst[i].name);
        }
        dst[i].value->data = src[i].value->data;
    }
}

// ---------------------------------------------------------------- HybridModel

HybridModel::HybridModel(const HybridConfig &config)
    : qnn_(make_sampler_head(config.qubits, config.feature_map_reps, config.ansatz_reps)),
      fm_reps_(config.feature_map_reps), ansatz_reps_(config.ansatz_reps),
      classes_(config.num_classes) {
    nn::BackboneConfig bc = config.backbone;
    bc.out_features = config.qubits;
    bc.seed = config.seed;
    backbone_ = nn::build_backbone(bc);
    weights_ = nn::Tensor({qnn_.num_weights()});
    grad_weights_ = nn::Tensor({qnn_.num_weights()});
    std::mt19937_64 rng(config.seed + 1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double &w : weights_.data) {
        w = dist(rng);
    }
    check();
}

HybridModel::HybridModel(nn::LayerStack backbone, unsigned qubits,
                         unsigned feature_map_reps, unsigned ansatz_reps,
                         std::size_t num_classes, std::vector<double> qnn_weights)
    : backbone_(std::move(backbone)),
      qnn_(make_sampler_head(qubits, feature_map_reps, ansatz_reps)),
      fm_reps_(feature_map_reps), ansatz_reps_(ansatz_reps), classes_(num_classes) {
    if (qnn_weights.size() != qnn_.num_weights()) {
        throw ConfigError("expected " + std::to_string(qnn_.num_weights()) +
                          " quantum weights, got " + std::to_string(qnn_weights.size()));
    }
    weights_ = nn::Tensor({qnn_.num_weights()}, std::move(qnn_weights));
    grad_weights_ = nn::Tensor({qnn_.num_weights()});
    check();
}

HybridModel::HybridModel(const HybridModel &other)
    : backbone_(nn::clone_stack(other.backbone_)), qnn_(other.qnn_),
      fm_reps_(other.fm_reps_), ansatz_reps_(other.ansatz_reps_),
      classes_(other.classes_), weights_(other.weights_),
      grad_weights_(other.grad_weights_), rule_(other.rule_) {}

void HybridModel::check() {
    if (classes_ < 2 || classes_ > qnn_.output_dim()) {
        throw ConfigError("class count " + std::to_string(classes_) + " outside [2, " +
                          std::to_string(qnn_.output_dim()) + "] for " +
                          std::to_string(qnn_.num_qubits()) + " qubit(s)");
    }
    if (stack_output_width(backbone_) != qnn_.num_inputs()) {
        throw ConfigError("backbone output width " +
                          std::to_string(stack_output_width(backbone_)) +
                          " does not match " + std::to_string(qnn_.num_inputs()) +
                          " QNN input(s)");
    }
}

std::unique_ptr<Model> HybridModel::clone() const {
    return std::make_unique<HybridModel>(*this);
}

void HybridModel::set_qnn_weights(std::span<const double> w) {
    if (w.size() != weights_.size()) {
        throw BindingError("expected " + std::to_string(weights_.size()) +
                           " quantum weights");
    }
    weights_.data.assign(w.begin(), w.end());
}

nn::Tensor HybridModel::forward(const nn::Tensor &batch) {
    nn::Tensor features = nn::forward_stack(backbone_, batch);
    if (features.rank() != 2 || features.dim(1) != qnn_.num_inputs()) {
        throw ConfigError("backbone produced " + nn::shape_string(features.shape) +
                          ", QNN expects " + std::to_string(qnn_.num_inputs()) +
                          " feature(s)");
    }
    const std::size_t batch_size = features.dim(0);
    const std::size_t n_in = qnn_.num_inputs();
    nn::Tensor probs({batch_size, classes_});
    for (std::size_t b = 0; b < batch_size; ++b) {
        const auto dist =
            qnn_.forward(features.span().subspan(b * n_in, n_in), weights_.data);
        for (std::size_t k = 0; k < dist.size(); ++k) {
            probs[b * classes_ + k % classes_] += dist[k];
        }
    }
    features_ = std::move(features);
    return probs;
}

void HybridModel::backward(const nn::Tensor &grad_probs) {
    if (!features_) {
        throw StateError("HybridModel: backward called before forward");
    }
    const std::size_t batch_size = features_->dim(0);
    if (grad_probs.shape != nn::Shape{batch_size, classes_}) {
        throw ShapeError("HybridModel: gradient shape " +
                         nn::shape_string(grad_probs.shape) + " does not match output");
    }
    const std::size_t n_in = qnn_.num_inputs();
    const std::size_t n_w = qnn_.num_weights();
    nn::Tensor grad_features(features_->shape);
    for (std::size_t b = 0; b < batch_size; ++b) {
        const QnnGradients jac =
            qnn_.backward(features_->span().subspan(b * n_in, n_in), weights_.data, rule_);
        for (std::size_t k = 0; k < jac.output_dim; ++k) {
            const double g = grad_probs[b * classes_ + k % classes_];
            if (g == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < n_w; ++j) {
                grad_weights_[j] += g * jac.d_weight(k, j);
            }
            for (std::size_t i = 0; i < n_in; ++i) {
                grad_features[b * n_in + i] += g * jac.d_input(k, i);
            }
        }
    }
    nn::backward_stack(backbone_, grad_features);
}

std::vector<nn::ParamRef> HybridModel::parameters() {
    std::vector<nn::ParamRef> out;
    append_stack_params(out, backbone_, "backbone");
    out.push_back({"qnn.weights", &weights_, &grad_weights_});
    return out;
}

// ---------------------------------------------------------------- ClassicalModel

ClassicalModel::ClassicalModel(const ClassicalConfig &config) {
    nn::BackboneConfig bc = config.backbone;
    bc.seed = config.seed;
    backbone_ = nn::build_backbone(bc);
    const std::size_t f = bc.out_features;
    if (config.hidden_units == 0) {
        head_.push_back(std::make_unique<nn::Dense>(f, 1));
    } else {
        head_.push_back(std::make_unique<nn::Dense>(f, config.hidden_units));
        head_.push_back(std::make_unique<nn::ReLU>());
        head_.push_back(std::make_unique<nn::Dense>(config.hidden_units, 1));
    }
    head_.push_back(std::make_unique<nn::Sigmoid>());
    std::mt19937_64 rng(config.seed + 1);
    for (auto &l : head_) {
        nn::init_glorot_uniform(*l, rng);
    }
}

ClassicalModel::ClassicalModel(nn::LayerStack backbone, nn::LayerStack head)
    : backbone_(std::move(backbone)), head_(std::move(head)) {
    if (head_.empty() || head_.back()->kind() != nn::LayerKind::Sigmoid ||
        stack_output_width(head_) != 1) {
        throw ConfigError("classical head must end in Dense(· -> 1) + Sigmoid");
    }
}

ClassicalModel::ClassicalModel(const ClassicalModel &other)
    : backbone_(nn::clone_stack(other.backbone_)), head_(nn::clone_stack(other.head_)) {}

std::unique_ptr<Model> ClassicalModel::clone() const {
    return std::make_unique<ClassicalModel>(*this);
}

nn::Tensor ClassicalModel::forward(const nn::Tensor &batch) {
    const nn::Tensor p = nn::forward_stack(head_, nn::forward_stack(backbone_, batch));
    const std::size_t batch_size = p.dim(0);
    nn::Tensor probs({batch_size, 2});
    for (std::size_t b = 0; b < batch_size; ++b) {
        probs[2 * b] = 1.0 - p[b];
        probs[2 * b + 1] = p[b];
    }
    batch_ = batch_size;
    return probs;
}

void ClassicalModel::backward(const nn::Tensor &grad_probs) {
    if (!batch_) {
        throw StateError("ClassicalModel: backward called before forward");
    }
    if (grad_probs.shape != nn::Shape{*batch_, 2}) {
        throw ShapeError("ClassicalModel: gradient shape " +
                         nn::shape_string(grad_probs.shape) + " does not match output");
    }
    nn::Tensor gp({*batch_, 1});
    for (std::size_t b = 0; b < *batch_; ++b) {
        gp[b] = grad_probs[2 * b + 1] - grad_probs[2 * b];
    }
    nn::backward_stack(backbone_, nn::backward_stack(head_, gp));
}

std::vector<nn::ParamRef> ClassicalModel::parameters() {
    std::vector<nn::ParamRef> out;
    append_stack_params(out, backbone_, "backbone");
    append_stack_params(out, head_, "head");
    return out;
}

// ---------------------------------------------------------------- predict

std::vector<std::uint8_t> predict(const nn::Tensor &probs) {
    if (probs.rank() != 2 || probs.dim(1) < 2) {
        throw ShapeError("predict expects [batch × c] probabilities with c >= 2");
    }
    const std::size_t c = probs.dim(1);
    std::vector<std::uint8_t> labels(probs.dim(0));
    for (std::size_t b = 0; b < labels.size(); ++b) {
        const double *row = probs.data.data() + b * c;
        if (c == 2) {
            labels[b] = row[0] > row[1] ? 0 : 1;
            continue;
        }
        std::size_t best = 0;
        for (std::size_t k = 1; k < c; ++k) {
            if (row[k] >= row[best]) {
                best = k;
            }
        }
        labels[b] = static_cast<std::uint8_t>(best);
    }
    return labels;
}

std::vector<std::uint8_t> predict(Model &model, const nn::Tensor &batch) {
    return predict(model.forward(batch));
}

} // namespace hqnn::hybrid
