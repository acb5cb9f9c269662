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

#include "hqnn/qnn.hpp"

#include "hqnn/error.hpp"

namespace hqnn {

SamplerQnn::SamplerQnn(ParameterizedCircuit circuit)
    : circuit_(std::move(circuit)), ops_(resolve(circuit_)) {}

OutcomeDistribution SamplerQnn::forward(std::span<const double> inputs,
                                        std::span<const double> weights) const {
    const auto gates = hqnn::bind(std::span<const ResolvedOp>(ops_), num_inputs(), num_weights(), inputs, weights);
    return probabilities(run_circuit(Statevector(num_qubits()), gates));
}

OutcomeDistribution SamplerQnn::forward_sampled(std::span<const double> inputs,
                                                std::span<const double> weights,
                                                std::uint64_t shots,
                                                std::uint64_t seed) const {
    const auto gates = hqnn::bind(std::span<const ResolvedOp>(ops_), num_inputs(), num_weights(), inputs, weights);
    const auto counts = sample_counts(run_circuit(Statevector(num_qubits()), gates),
                                      shots, seed);
    OutcomeDistribution out;
    out.probs.assign(output_dim(), 0.0);
    for (const auto &[k, c] : counts) {
        out.probs[k] = static_cast<double>(c) / static_cast<double>(shots);
    }
    return out;
}

QnnGradients SamplerQnn::backward(std::span<const double> inputs,
                                  std::span<const double> weights,
                                  const ShiftRule &rule) const {
    const auto gates = hqnn::bind(std::span<const ResolvedOp>(ops_), num_inputs(), num_weights(), inputs, weights);
    QnnGradients g;
    g.output_dim = output_dim();
    g.num_inputs = num_inputs();
    g.num_weights = num_weights();
    g.input_jacobian.assign(g.output_dim * g.num_inputs, 0.0);
    g.weight_jacobian.assign(g.output_dim * g.num_weights, 0.0);

    // `prefix` holds the state before gate i; each shifted evaluation reuses it.
    Statevector prefix(num_qubits());
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const ResolvedOp &op = ops_[i];
        if (op.source != ParamSource::None) {
            auto shifted = [&](double delta) {
                Statevector s = prefix;
                Gate gi = gates[i];
                gi.angle += delta;
                s.apply(gi);
                for (std::size_t j = i + 1; j < gates.size(); ++j) {
                    s.apply(gates[j]);
                }
                return probabilities(s);
            };
            const OutcomeDistribution plus = shifted(rule.shift);
            const OutcomeDistribution minus = shifted(-rule.shift);
            const double kind_scale =
                op.gate.kind == GateKind::RY ? rule.ry_scale : rule.rz_scale;
            const double scale = 0.5 * kind_scale * op.coefficient;
            std::vector<double> &jac =
                op.source == ParamSource::Input ? g.input_jacobian : g.weight_jacobian;
            const std::size_t cols =
                op.source == ParamSource::Input ? g.num_inputs : g.num_weights;
            for (std::size_t k = 0; k < g.output_dim; ++k) {
                jac[k * cols + op.index] += scale * (plus[k] - minus[k]);
            }
        }
        prefix.apply(gates[i]);
    }
    return g;
}

SamplerQnn make_sampler_head(unsigned num_qubits, unsigned fm_reps,
                             unsigned ansatz_reps) {
    return SamplerQnn(compose(z_feature_map(num_qubits, fm_reps),
                              real_amplitudes(num_qubits, ansatz_reps)));
}

OutcomeDistribution qnn_forward(const SamplerQnn &qnn, std::span<const double> inputs,
                                std::span<const double> weights) {
    return qnn.forward(inputs, weights);
}

OutcomeDistribution qnn_forward_sampled(const SamplerQnn &qnn,
                                        std::span<const double> inputs,
                                        std::span<const double> weights,
                                        std::uint64_t shots, std::uint64_t seed) {
    return qnn.forward_sampled(inputs, weights, shots, seed);
}

QnnGradients qnn_backward(const SamplerQnn &qnn, std::span<const double> inputs,
                          std::span<const double> weights, const ShiftRule &rule) {
    return qnn.backward(inputs, weights, rule);
}

} // namespace hqnn
