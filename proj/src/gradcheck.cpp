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

#include "hqnn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "hqnn/hybrid/loss.hpp"
#include "hqnn/hybrid/model.hpp"
#include "hqnn/nn/layers.hpp"
#include "hqnn/qnn.hpp"

namespace hqnn::gradcheck {

namespace {

using nn::Tensor;

std::size_t uniform_int(std::mt19937_64 &rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<double> uniform_vector(std::mt19937_64 &rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double &x : v) {
        x = uniform(rng, lo, hi);
    }
    return v;
}

Tensor random_tensor(std::mt19937_64 &rng, nn::Shape shape) {
    Tensor t(std::move(shape));
    for (double &v : t.data) {
        v = uniform(rng, -1.0, 1.0);
    }
    return t;
}

double central_difference(const std::function<double()> &f, double &x, double h) {
    const double orig = x;
    x = orig + h;
    const double fp = f();
    x = orig - h;
    const double fm = f();
    x = orig;
    return (fp - fm) / (2 * h);
}

// Relative error is only reported for gradients of non-trivial size.
constexpr double kRelReportScale = 1e-3;

void record_abs(ComponentResult &res, double analytic, double numeric, double tol) {
    const double err = std::abs(analytic - numeric);
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    ++res.checks;
    res.max_abs_error = std::max(res.max_abs_error, err);
    if (scale >= kRelReportScale) {
        res.max_rel_error = std::max(res.max_rel_error, err / scale);
    }
    if (!(err <= tol)) {
        res.passed = false;
    }
}

void record_rel(ComponentResult &res, double analytic, double numeric) {
    const double err = std::abs(analytic - numeric);
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    ++res.checks;
    res.max_abs_error = std::max(res.max_abs_error, err);
    if (scale >= kRelReportScale) {
        res.max_rel_error = std::max(res.max_rel_error, err / scale);
    }
    if (!close_relative(analytic, numeric)) {
        res.passed = false;
    }
}

// ---------------------------------------------------------------- quantum

void check_qnn(ComponentResult &res, const SamplerQnn &qnn, std::vector<double> inputs,
               std::vector<double> weights, const ShiftRule &rule) {
    const QnnGradients g = qnn.backward(inputs, weights, rule);
    auto sweep = [&](std::vector<double> &vec, bool is_input) {
        for (std::size_t i = 0; i < vec.size(); ++i) {
            const double orig = vec[i];
            vec[i] = orig + kQuantumStep;
            const auto plus = qnn.forward(inputs, weights);
            vec[i] = orig - kQuantumStep;
            const auto minus = qnn.forward(inputs, weights);
            vec[i] = orig;
            for (std::size_t k = 0; k < qnn.output_dim(); ++k) {
                const double numeric = (plus[k] - minus[k]) / (2 * kQuantumStep);
                const double analytic = is_input ? g.d_input(k, i) : g.d_weight(k, i);
                record_abs(res, analytic, numeric, kQuantumTolerance);
            }
        }
    };
    sweep(inputs, true);
    sweep(weights, false);
}

ComponentResult quantum_random(const std::string &name, std::mt19937_64 &rng,
                               RandomCircuitSpec spec, std::size_t trials,
                               const ShiftRule &rule) {
    ComponentResult res{name, "quantum"};
    for (std::size_t t = 0; t < trials; ++t) {
        spec.num_qubits = static_cast<unsigned>(uniform_int(rng, 1, 3));
        spec.depth = uniform_int(rng, 4, 20);
        SamplerQnn qnn(random_circuit(rng, spec));
        check_qnn(res, qnn, uniform_vector(rng, qnn.num_inputs(), -3.2, 3.2),
                  uniform_vector(rng, qnn.num_weights(), -3.2, 3.2), rule);
    }
    return res;
}

ComponentResult quantum_head(std::mt19937_64 &rng, std::size_t trials,
                             const ShiftRule &rule) {
    ComponentResult res{"feature-map head", "quantum"};
    for (std::size_t t = 0; t < trials; ++t) {
        const auto n = static_cast<unsigned>(uniform_int(rng, 1, 3));
        const SamplerQnn qnn = make_sampler_head(n, static_cast<unsigned>(uniform_int(rng, 1, 2)),
                                                 static_cast<unsigned>(uniform_int(rng, 1, 2)));
        check_qnn(res, qnn, uniform_vector(rng, qnn.num_inputs(), -2.0, 2.0),
                  uniform_vector(rng, qnn.num_weights(), -3.2, 3.2), rule);
    }
    return res;
}

// ---------------------------------------------------------------- classical

/// Loss = <r, layer(x)>; checks dL/dx and every parameter gradient.
void check_layer(ComponentResult &res, nn::Layer &layer, Tensor input, std::mt19937_64 &rng) {
    Tensor out = layer.forward(input);
    const Tensor r = random_tensor(rng, out.shape);
    layer.zero_grad();
    const Tensor grad_in = layer.backward(r);
    std::vector<Tensor> grad_params;
    for (nn::ParamRef &p : layer.params()) {
        grad_params.push_back(*p.grad);
    }
    auto loss = [&] {
        const Tensor o = layer.forward(input);
        double s = 0.0;
        for (std::size_t i = 0; i < o.size(); ++i) {
            s += r[i] * o[i];
        }
        return s;
    };
    for (std::size_t i = 0; i < input.size(); ++i) {
        record_rel(res, grad_in[i], central_difference(loss, input[i], kClassicalStep));
    }
    auto params = layer.params();
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t i = 0; i < params[p].value->size(); ++i) {
            record_rel(res, grad_params[p][i],
                       central_difference(loss, (*params[p].value)[i], kClassicalStep));
        }
    }
}

/// Pushes every entry at least `margin` away from zero.
void avoid_zero(Tensor &t, double margin) {
    for (double &v : t.data) {
        if (std::abs(v) < margin) {
            v = v < 0 ? v - margin : v + margin;
        }
    }
}

ComponentResult classical_layer(nn::LayerKind kind, std::mt19937_64 &rng, std::size_t trials) {
    ComponentResult res{nn::layer_name(kind), "classical"};
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t batch = uniform_int(rng, 1, 3);
        switch (kind) {
        case nn::LayerKind::Dense: {
            const std::size_t in = uniform_int(rng, 1, 6), out = uniform_int(rng, 1, 4);
            nn::Dense layer(in, out);
            nn::init_glorot_uniform(layer, rng);
            for (double &b : layer.bias().data) {
                b = uniform(rng, -0.5, 0.5);
            }
            check_layer(res, layer, random_tensor(rng, {batch, in}), rng);
            break;
        }
        case nn::LayerKind::Conv2D: {
            const std::size_t in = uniform_int(rng, 1, 3), out = uniform_int(rng, 1, 3);
            const std::size_t k = uniform_int(rng, 1, 3), stride = uniform_int(rng, 1, 2);
            const std::size_t pad = uniform_int(rng, 0, 1);
            const std::size_t h = uniform_int(rng, std::max<std::size_t>(k, 3), 6);
            const std::size_t w = uniform_int(rng, std::max<std::size_t>(k, 3), 6);
            nn::Conv2D layer(in, out, k, stride, pad);
            nn::init_glorot_uniform(layer, rng);
            for (double &b : layer.bias().data) {
                b = uniform(rng, -0.5, 0.5);
            }
            check_layer(res, layer, random_tensor(rng, {batch, in, h, w}), rng);
            break;
        }
        case nn::LayerKind::ReLU: {
            nn::ReLU layer;
            Tensor x = random_tensor(rng, {batch, uniform_int(rng, 1, 8)});
            avoid_zero(x, 1e-2);
            check_layer(res, layer, x, rng);
            break;
        }
        case nn::LayerKind::MaxPool2D: {
            nn::MaxPool2D layer(2, uniform_int(rng, 1, 2));
            Tensor x;
            do {
                x = random_tensor(rng, {batch, uniform_int(rng, 1, 2), uniform_int(rng, 2, 6),
                                        uniform_int(rng, 2, 6)});
                layer.forward(x);
            } while (layer.kink_margin() < 1e-3);
            check_layer(res, layer, x, rng);
            break;
        }
        case nn::LayerKind::GlobalAvgPool: {
            nn::GlobalAvgPool layer;
            check_layer(res, layer,
                        random_tensor(rng, {batch, uniform_int(rng, 1, 3), uniform_int(rng, 1, 5),
                                            uniform_int(rng, 1, 5)}),
                        rng);
            break;
        }
        case nn::LayerKind::Flatten: {
            nn::Flatten layer;
            check_layer(res, layer,
                        random_tensor(rng, {batch, uniform_int(rng, 1, 3), uniform_int(rng, 1, 4)}),
                        rng);
            break;
        }
        case nn::LayerKind::Sigmoid: {
            nn::Sigmoid layer;
            Tensor x = random_tensor(rng, {batch, uniform_int(rng, 1, 8)});
            for (double &v : x.data) {
                v *= 4.0;
            }
            check_layer(res, layer, x, rng);
            break;
        }
        }
    }
    return res;
}

double min_kink_margin(const nn::LayerStack &stack) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto &l : stack) {
        m = std::min(m, l->kink_margin());
    }
    return m;
}

double model_kink_margin(const hybrid::Model &model) {
    double m = min_kink_margin(model.backbone());
    if (const auto *c = dynamic_cast<const hybrid::ClassicalModel *>(&model)) {
        m = std::min(m, min_kink_margin(c->head()));
    }
    return m;
}

/// Full-model check: cross-entropy on a 4-sample batch, every parameter.
void check_model(ComponentResult &res, hybrid::Model &model, const Tensor &batch,
                 const std::vector<std::uint8_t> &labels) {
    model.zero_grad();
    const Tensor probs = model.forward(batch);
    model.backward(hybrid::cross_entropy_grad(probs, labels));
    auto params = model.parameters();
    std::vector<Tensor> grads;
    for (auto &p : params) {
        grads.push_back(*p.grad);
    }
    auto loss = [&] { return hybrid::cross_entropy(model.forward(batch), labels); };
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t i = 0; i < params[p].value->size(); ++i) {
            record_rel(res, grads[p][i],
                       central_difference(loss, (*params[p].value)[i], kClassicalStep));
        }
    }
}

nn::BackboneConfig tiny_backbone() {
    nn::BackboneConfig bc;
    bc.input_shape = {1, 6, 6};
    bc.stages = {nn::ConvStage{2, 3, 1, 1, 2, 2}};
    return bc;
}

template <typename MakeModel>
ComponentResult model_component(const std::string &name, std::mt19937_64 &rng,
                                std::size_t trials, MakeModel make) {
    ComponentResult res{name, "classical"};
    for (std::size_t t = 0; t < trials; ++t) {
        std::unique_ptr<hybrid::Model> model;
        Tensor batch;
        // Resample until no ReLU input or pooling window sits near a kink.
        do {
            model = make(rng());
            batch = random_tensor(rng, {4, 1, 6, 6});
            model->forward(batch);
        } while (model_kink_margin(*model) < 1e-3);
        std::vector<std::uint8_t> labels(4);
        for (auto &l : labels) {
            l = static_cast<std::uint8_t>(uniform_int(rng, 0, model->num_classes() - 1));
        }
        check_model(res, *model, batch, labels);
    }
    return res;
}

} // namespace

ParameterizedCircuit random_circuit(std::mt19937_64 &rng, const RandomCircuitSpec &spec) {
    std::vector<GateKind> kinds{GateKind::H};
    if (spec.use_ry) {
        kinds.push_back(GateKind::RY);
    }
    if (spec.use_rz) {
        kinds.push_back(GateKind::RZ);
    }
    if (spec.num_qubits >= 2) {
        kinds.push_back(GateKind::CNOT);
    }
    std::vector<CircuitOp> ops;
    std::set<std::size_t> used;
    std::size_t fresh = 0;
    auto symbol_name = [](std::size_t id) {
        return (id % 2 == 0 ? "x_" : "θ_") + std::to_string(id / 2);
    };
    for (std::size_t d = 0; d < spec.depth; ++d) {
        const GateKind kind = kinds[uniform_int(rng, 0, kinds.size() - 1)];
        CircuitOp op{kind, static_cast<unsigned>(uniform_int(rng, 0, spec.num_qubits - 1)), 0,
                     std::nullopt};
        if (kind == GateKind::CNOT) {
            op.control = static_cast<unsigned>(uniform_int(rng, 0, spec.num_qubits - 2));
            if (op.control >= op.target) {
                ++op.control;
            }
        } else if (is_rotation(kind)) {
            if (uniform(rng, 0.0, 1.0) < 0.1) {
                op.angle = ParamExpr::constant(uniform(rng, -3.2, 3.2));
            } else {
                const std::size_t id =
                    spec.symbol_pool == 0 ? fresh++ : uniform_int(rng, 0, spec.symbol_pool - 1);
                used.insert(id);
                double coeff = 1.0, offset = 0.0;
                if (spec.random_affine) {
                    coeff = uniform(rng, 0.5, 2.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1 : 1);
                    offset = uniform(rng, -1.0, 1.0);
                }
                op.angle = ParamExpr::linear(symbol_name(id), coeff, offset);
            }
        }
        ops.push_back(op);
    }
    std::vector<std::string> inputs, weights;
    for (std::size_t id : used) {
        (id % 2 == 0 ? inputs : weights).push_back(symbol_name(id));
    }
    return {spec.num_qubits, std::move(ops), std::move(inputs), std::move(weights)};
}

bool close_relative(double analytic, double numeric, double rel_tol, double abs_floor) {
    const double err = std::abs(analytic - numeric);
    return err <= abs_floor ||
           err <= rel_tol * std::max(std::abs(analytic), std::abs(numeric));
}

bool Report::passed() const {
    return std::all_of(components.begin(), components.end(),
                       [](const ComponentResult &c) { return c.passed; });
}

std::vector<std::string> Report::failing() const {
    std::vector<std::string> out;
    for (const auto &c : components) {
        if (!c.passed) {
            out.push_back(c.name);
        }
    }
    return out;
}

Report run(const Options &options) {
    std::mt19937_64 rng(options.seed);
    ShiftRule rule;
    if (options.inject_ry_sign_error) {
        rule.ry_scale = -1.0;
    }
    Report report;
    const std::size_t qt = options.quantum_trials;

    RandomCircuitSpec ry_only;
    ry_only.use_rz = false;
    report.components.push_back(quantum_random("RY", rng, ry_only, qt, rule));

    RandomCircuitSpec rz_only;
    rz_only.use_ry = false;
    rz_only.random_affine = true;
    report.components.push_back(quantum_random("RZ", rng, rz_only, qt, rule));

    RandomCircuitSpec shared;
    shared.symbol_pool = 3;
    shared.random_affine = true;
    report.components.push_back(quantum_random("shared-parameter", rng, shared, qt, rule));

    report.components.push_back(quantum_head(rng, qt, rule));

    for (auto kind : {nn::LayerKind::Dense, nn::LayerKind::Conv2D, nn::LayerKind::ReLU,
                      nn::LayerKind::MaxPool2D, nn::LayerKind::GlobalAvgPool,
                      nn::LayerKind::Flatten, nn::LayerKind::Sigmoid}) {
        report.components.push_back(classical_layer(kind, rng, options.classical_trials));
    }

    report.components.push_back(model_component(
        "hybrid model", rng, options.classical_trials, [&](std::uint64_t seed) {
            hybrid::HybridConfig hc;
            hc.backbone = tiny_backbone();
            hc.qubits = static_cast<unsigned>(1 + seed % 2);
            hc.seed = seed;
            auto m = std::make_unique<hybrid::HybridModel>(hc);
            m->set_shift_rule(rule);
            return std::unique_ptr<hybrid::Model>(std::move(m));
        }));
    report.components.push_back(model_component(
        "classical model", rng, options.classical_trials, [&](std::uint64_t seed) {
            hybrid::ClassicalConfig cc;
            cc.backbone = tiny_backbone();
            cc.hidden_units = seed % 2 == 0 ? 0 : 3;
            cc.seed = seed;
            return std::unique_ptr<hybrid::Model>(std::make_unique<hybrid::ClassicalModel>(cc));
        }));
    return report;
}

} // namespace hqnn::gradcheck
