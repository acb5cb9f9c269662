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

#include "hqnn/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hqnn/error.hpp"

namespace hqnn {

namespace {

std::string indexed(const char *prefix, std::size_t i) {
    return std::string(prefix) + std::to_string(i);
}

void check_size(unsigned n, const char *what) {
    if (n < 1 || n > kMaxQubits) {
        throw ConfigError(std::string(what) + " " + std::to_string(n) +
                          " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
}

void check_reps(unsigned reps) {
    if (reps < 1) {
        throw ConfigError("reps must be >= 1");
    }
}

std::string format_number(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

} // namespace

ParameterizedCircuit::ParameterizedCircuit(unsigned num_qubits)
    : num_qubits_(num_qubits) {
    check_size(num_qubits, "qubit count");
}

ParameterizedCircuit::ParameterizedCircuit(unsigned num_qubits,
                                           std::vector<CircuitOp> ops,
                                           std::vector<std::string> input_params,
                                           std::vector<std::string> weight_params)
    : num_qubits_(num_qubits), ops_(std::move(ops)), inputs_(std::move(input_params)),
      weights_(std::move(weight_params)) {
    check_size(num_qubits, "qubit count");

    std::map<std::string, int> uses;
    for (const auto &s : inputs_) {
        if (!uses.emplace(s, 0).second) {
            throw ConfigError("duplicate parameter symbol " + s);
        }
    }
    for (const auto &s : weights_) {
        if (!uses.emplace(s, 0).second) {
            throw ConfigError("parameter symbol " + s + " declared twice");
        }
    }
    for (const CircuitOp &op : ops_) {
        if (op.target >= num_qubits_ ||
            (op.kind == GateKind::CNOT &&
             (op.control >= num_qubits_ || op.control == op.target))) {
            throw CircuitError(std::string(gate_name(op.kind)) +
                               " addresses an invalid qubit");
        }
        if (is_rotation(op.kind) != op.angle.has_value()) {
            throw ConfigError(std::string(gate_name(op.kind)) +
                              (op.angle ? " takes no angle" : " needs an angle"));
        }
        if (op.angle && op.angle->symbol) {
            auto it = uses.find(*op.angle->symbol);
            if (it == uses.end()) {
                throw ConfigError("undeclared parameter symbol " + *op.angle->symbol);
            }
            if (op.angle->coefficient == 0.0) {
                throw ConfigError("zero coefficient on symbol " + *op.angle->symbol);
            }
            ++it->second;
        }
    }
    for (const auto &[sym, n] : uses) {
        if (n == 0) {
            throw ConfigError("parameter symbol " + sym + " is never used");
        }
    }
}

ParameterizedCircuit z_feature_map(unsigned num_features, unsigned reps) {
    check_size(num_features, "feature count");
    check_reps(reps);
    std::vector<CircuitOp> ops;
    for (unsigned r = 0; r < reps; ++r) {
        for (unsigned q = 0; q < num_features; ++q) {
            ops.push_back({GateKind::H, q, 0, std::nullopt});
        }
        for (unsigned q = 0; q < num_features; ++q) {
            ops.push_back({GateKind::RZ, q, 0, ParamExpr::linear(indexed("x_", q), 2.0)});
        }
    }
    std::vector<std::string> inputs;
    for (unsigned q = 0; q < num_features; ++q) {
        inputs.push_back(indexed("x_", q));
    }
    return {num_features, std::move(ops), std::move(inputs), {}};
}

ParameterizedCircuit real_amplitudes(unsigned num_qubits, unsigned reps) {
    check_size(num_qubits, "qubit count");
    check_reps(reps);
    std::vector<CircuitOp> ops;
    std::vector<std::string> weights;
    auto ry_layer = [&] {
        for (unsigned q = 0; q < num_qubits; ++q) {
            const std::string sym = indexed("θ_", weights.size());
            weights.push_back(sym);
            ops.push_back({GateKind::RY, q, 0, ParamExpr::linear(sym)});
        }
    };
    for (unsigned r = 0; r < reps; ++r) {
        ry_layer();
        for (unsigned q = 0; q + 1 < num_qubits; ++q) {
            ops.push_back({GateKind::CNOT, q + 1, q, std::nullopt});
        }
    }
    ry_layer();
    return {num_qubits, std::move(ops), {}, std::move(weights)};
}

ParameterizedCircuit compose(const ParameterizedCircuit &front,
                             const ParameterizedCircuit &back) {
    if (front.num_qubits() != back.num_qubits()) {
        throw CompositionError("cannot compose a " + std::to_string(front.num_qubits()) +
                               "-qubit circuit with a " +
                               std::to_string(back.num_qubits()) + "-qubit circuit");
    }
    std::set<std::string> seen(front.input_params().begin(), front.input_params().end());
    seen.insert(front.weight_params().begin(), front.weight_params().end());
    for (const auto *list : {&back.input_params(), &back.weight_params()}) {
        for (const auto &s : *list) {
            if (seen.contains(s)) {
                throw CompositionError("parameter symbol " + s + " appears in both circuits");
            }
        }
    }
    std::vector<CircuitOp> ops = front.ops();
    ops.insert(ops.end(), back.ops().begin(), back.ops().end());
    std::vector<std::string> inputs = front.input_params();
    inputs.insert(inputs.end(), back.input_params().begin(), back.input_params().end());
    std::vector<std::string> weights = front.weight_params();
    weights.insert(weights.end(), back.weight_params().begin(), back.weight_params().end());
    return {front.num_qubits(), std::move(ops), std::move(inputs), std::move(weights)};
}

std::vector<ResolvedOp> resolve(const ParameterizedCircuit &circuit) {
    std::map<std::string, std::pair<ParamSource, std::size_t>> slots;
    for (std::size_t i = 0; i < circuit.input_params().size(); ++i) {
        slots[circuit.input_params()[i]] = {ParamSource::Input, i};
    }
    for (std::size_t i = 0; i < circuit.weight_params().size(); ++i) {
        slots[circuit.weight_params()[i]] = {ParamSource::Weight, i};
    }
    std::vector<ResolvedOp> out;
    out.reserve(circuit.ops().size());
    for (const CircuitOp &op : circuit.ops()) {
        ResolvedOp r;
        r.gate = Gate{op.kind, 0.0, op.target, op.control};
        if (op.angle) {
            r.coefficient = op.angle->coefficient;
            r.offset = op.angle->offset;
            if (op.angle->symbol) {
                const auto &[src, idx] = slots.at(*op.angle->symbol);
                r.source = src;
                r.index = idx;
            } else {
                r.gate.angle = op.angle->offset;
            }
        }
        out.push_back(r);
    }
    return out;
}

std::vector<Gate> bind(std::span<const ResolvedOp> ops, std::size_t num_inputs,
                       std::size_t num_weights, std::span<const double> inputs,
                       std::span<const double> weights) {
    if (inputs.size() != num_inputs) {
        throw BindingError("expected " + std::to_string(num_inputs) + " inputs, got " +
                           std::to_string(inputs.size()));
    }
    if (weights.size() != num_weights) {
        throw BindingError("expected " + std::to_string(num_weights) + " weights, got " +
                           std::to_string(weights.size()));
    }
    std::vector<Gate> gates;
    gates.reserve(ops.size());
    for (const ResolvedOp &op : ops) {
        Gate g = op.gate;
        if (op.source == ParamSource::Input) {
            g.angle = op.coefficient * inputs[op.index] + op.offset;
        } else if (op.source == ParamSource::Weight) {
            g.angle = op.coefficient * weights[op.index] + op.offset;
        }
        gates.push_back(g);
    }
    return gates;
}

std::vector<Gate> bind(const ParameterizedCircuit &circuit,
                       std::span<const double> inputs,
                       std::span<const double> weights) {
    const auto ops = resolve(circuit);
    return hqnn::bind(std::span<const ResolvedOp>(ops), circuit.input_params().size(), circuit.weight_params().size(),
                inputs, weights);
}

std::string render(const ParameterizedCircuit &circuit) {
    std::ostringstream out;
    for (const CircuitOp &op : circuit.ops()) {
        out << gate_name(op.kind);
        if (op.angle) {
            const ParamExpr &e = *op.angle;
            out << '(';
            if (e.symbol) {
                if (e.coefficient != 1.0) {
                    out << format_number(e.coefficient) << "·";
                }
                out << *e.symbol;
                if (e.offset != 0.0) {
                    out << (e.offset > 0 ? " + " : " - ") << format_number(std::abs(e.offset));
                }
            } else {
                out << format_number(e.offset);
            }
            out << ')';
        }
        if (op.kind == GateKind::CNOT) {
            out << " q" << op.control << ", q" << op.target;
        } else {
            out << " q" << op.target;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace hqnn
