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
 * Sampler QNN: maps (inputs, weights) to the full outcome distribution of a
 * parameterized circuit started from |0...0>, with exact parameter-shift
 * Jacobians.
 */

#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "hqnn/circuits.hpp"
#include "hqnn/statevec.hpp"

namespace hqnn {

/// Dense row-major [outcome x parameter] Jacobians.
struct QnnGradients {
    std::size_t output_dim = 0;
    std::size_t num_inputs = 0;
    std::size_t num_weights = 0;
    std::vector<double> input_jacobian;
    std::vector<double> weight_jacobian;

    [[nodiscard]] double d_input(std::size_t outcome, std::size_t i) const {
        return input_jacobian[outcome * num_inputs + i];
    }
    [[nodiscard]] double d_weight(std::size_t outcome, std::size_t j) const {
        return weight_jacobian[outcome * num_weights + j];
    }
};

/// Shift-rule settings. `kind_scale` multiplies the gate-level derivative of
/// every gate of that kind; it exists so verification tooling can inject a
/// known fault and must stay 1.0 in normal use.
struct ShiftRule {
    double shift = std::numbers::pi / 2;
    double ry_scale = 1.0;
    double rz_scale = 1.0;
};

class SamplerQnn {
  public:
    explicit SamplerQnn(ParameterizedCircuit circuit);

    [[nodiscard]] const ParameterizedCircuit &circuit() const { return circuit_; }
    [[nodiscard]] unsigned num_qubits() const { return circuit_.num_qubits(); }
    [[nodiscard]] std::size_t num_inputs() const { return circuit_.input_params().size(); }
    [[nodiscard]] std::size_t num_weights() const { return circuit_.weight_params().size(); }
    [[nodiscard]] std::size_t output_dim() const { return std::size_t{1} << num_qubits(); }

    /// Exact outcome probabilities.
    [[nodiscard]] OutcomeDistribution forward(std::span<const double> inputs,
                                              std::span<const double> weights) const;

    /// Empirical frequencies from `shots` samples.
    [[nodiscard]] OutcomeDistribution forward_sampled(std::span<const double> inputs,
                                                      std::span<const double> weights,
                                                      std::uint64_t shots,
                                                      std::uint64_t seed) const;

    /// Parameter-shift Jacobians of every outcome probability. Each
    /// parameterized gate occurrence is shifted separately and scaled by its
    /// linear coefficient, so shared symbols accumulate correctly.
    [[nodiscard]] QnnGradients backward(std::span<const double> inputs,
                                        std::span<const double> weights,
                                        const ShiftRule &rule = {}) const;

  private:
    ParameterizedCircuit circuit_;
    std::vector<ResolvedOp> ops_;
};

/// Z feature map (fm_reps) followed by RealAmplitudes (ansatz_reps).
SamplerQnn make_sampler_head(unsigned num_qubits, unsigned fm_reps = 1,
                             unsigned ansatz_reps = 1);

// Free-function spellings of the member operations.
OutcomeDistribution qnn_forward(const SamplerQnn &qnn, std::span<const double> inputs,
                                std::span<const double> weights);
OutcomeDistribution qnn_forward_sampled(const SamplerQnn &qnn,
                                        std::span<const double> inputs,
                                        std::span<const double> weights,
                                        std::uint64_t shots, std::uint64_t seed);
QnnGradients qnn_backward(const SamplerQnn &qnn, std::span<const double> inputs,
                          std::span<const double> weights, const ShiftRule &rule = {});

} // namespace hqnn
