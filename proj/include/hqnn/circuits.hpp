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
 * Symbolic parameterized circuits, the Z feature map and the RealAmplitudes
 * ansatz.
 *
 * A rotation angle is a linear expression `coefficient * value(symbol) +
 * offset`. Symbols are split into input parameters (classical features,
 * named x_i) and trainable weights (named θ_j).
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hqnn/statevec.hpp"

namespace hqnn {

struct ParamExpr {
    std::optional<std::string> symbol; // nullopt for a constant angle
    double coefficient = 1.0;
    double offset = 0.0;

    static ParamExpr constant(double angle) { return {std::nullopt, 1.0, angle}; }
    static ParamExpr linear(std::string sym, double coeff = 1.0, double off = 0.0) {
        return {std::move(sym), coeff, off};
    }
};

struct CircuitOp {
    GateKind kind = GateKind::H;
    unsigned target = 0;
    unsigned control = 0;          // CNOT only
    std::optional<ParamExpr> angle; // RY/RZ only
};

class ParameterizedCircuit {
  public:
    /// Empty circuit on `num_qubits` qubits.
    explicit ParameterizedCircuit(unsigned num_qubits);

    /// Validates every structural invariant; throws ConfigError/CircuitError.
    ParameterizedCircuit(unsigned num_qubits, std::vector<CircuitOp> ops,
                         std::vector<std::string> input_params,
                         std::vector<std::string> weight_params);

    [[nodiscard]] unsigned num_qubits() const { return num_qubits_; }
    [[nodiscard]] const std::vector<CircuitOp> &ops() const { return ops_; }
    [[nodiscard]] const std::vector<std::string> &input_params() const { return inputs_; }
    [[nodiscard]] const std::vector<std::string> &weight_params() const { return weights_; }

  private:
    unsigned num_qubits_;
    std::vector<CircuitOp> ops_;
    std::vector<std::string> inputs_;
    std::vector<std::string> weights_;
};

/// Per repetition: H on every qubit, then RZ(2·x_i) on qubit i.
ParameterizedCircuit z_feature_map(unsigned num_features, unsigned reps = 1);

/// `reps` blocks of [RY layer, linear CNOT chain], then a final RY layer.
ParameterizedCircuit real_amplitudes(unsigned num_qubits, unsigned reps = 1);

/// `front` followed by `back`.
ParameterizedCircuit compose(const ParameterizedCircuit &front,
                             const ParameterizedCircuit &back);

/// Parameter slot of a resolved op.
enum class ParamSource : unsigned char { None, Input, Weight };

/// CircuitOp with its symbol replaced by an index into the input or weight
/// vector.
struct ResolvedOp {
    Gate gate;
    ParamSource source = ParamSource::None;
    std::size_t index = 0;
    double coefficient = 1.0;
    double offset = 0.0;
};

std::vector<ResolvedOp> resolve(const ParameterizedCircuit &circuit);

/// Evaluates every angle against the given vectors.
std::vector<Gate> bind(const ParameterizedCircuit &circuit,
                       std::span<const double> inputs,
                       std::span<const double> weights);

/// Same as bind() on an already resolved op list.
std::vector<Gate> bind(std::span<const ResolvedOp> ops, std::size_t num_inputs,
                       std::size_t num_weights, std::span<const double> inputs,
                       std::span<const double> weights);

/// One gate per line, e.g. `RY(θ_0) q0`.
std::string render(const ParameterizedCircuit &circuit);

} // namespace hqnn
