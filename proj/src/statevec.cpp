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

#include "hqnn/statevec.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "hqnn/error.hpp"

namespace hqnn {

const char *gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::H:
        return "H";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CNOT:
        return "CNOT";
    }
    return "?";
}

simd::Mat2 gate_matrix(const Gate &gate) {
    switch (gate.kind) {
    case GateKind::H: {
        const double s = 1.0 / std::sqrt(2.0);
        return {s, s, s, -s};
    }
    case GateKind::RY: {
        const double c = std::cos(gate.angle / 2);
        const double s = std::sin(gate.angle / 2);
        return {c, -s, s, c};
    }
    case GateKind::RZ: {
        const double c = std::cos(gate.angle / 2);
        const double s = std::sin(gate.angle / 2);
        return {cplx(c, -s), 0.0, 0.0, cplx(c, s)};
    }
    case GateKind::CNOT:
        break;
    }
    throw CircuitError("CNOT has no single-qubit matrix");
}

Statevector::Statevector(unsigned num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(num_qubits) +
                          " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    amps_.assign(std::size_t{1} << num_qubits, cplx(0.0, 0.0));
    amps_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<cplx> amplitudes) {
    const std::size_t n = amplitudes.size();
    if (n < 2 || (n & (n - 1)) != 0) {
        throw ConfigError("amplitude count " + std::to_string(n) +
                          " is not a power of two >= 2");
    }
    const auto q = static_cast<unsigned>(std::countr_zero(n));
    if (q > kMaxQubits) {
        throw ConfigError("too many amplitudes for a " +
                          std::to_string(kMaxQubits) + "-qubit cap");
    }
    Statevector s;
    s.num_qubits_ = q;
    s.amps_ = std::move(amplitudes);
    if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
        throw ConfigError("amplitudes are not normalized");
    }
    return s;
}

void Statevector::apply(const Gate &gate) {
    if (gate.target >= num_qubits_) {
        throw CircuitError(std::string(gate_name(gate.kind)) + " target q" +
                           std::to_string(gate.target) + " outside " +
                           std::to_string(num_qubits_) + "-qubit register");
    }
    if (gate.kind == GateKind::CNOT) {
        if (gate.control >= num_qubits_ || gate.control == gate.target) {
            throw CircuitError("invalid CNOT control q" +
                               std::to_string(gate.control));
        }
        const std::size_t cmask = std::size_t{1} << gate.control;
        const std::size_t tmask = std::size_t{1} << gate.target;
        for (std::size_t k = 0; k < amps_.size(); ++k) {
            // visit each swapped pair once, from its target-0 member
            if ((k & cmask) != 0 && (k & tmask) == 0) {
                std::swap(amps_[k], amps_[k | tmask]);
            }
        }
        return;
    }
    simd::active().apply_1q(amps_, gate.target, gate_matrix(gate));
}

double Statevector::norm_squared() const {
    double s = 0.0;
    for (const cplx &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

Statevector init_zero(unsigned num_qubits) { return Statevector(num_qubits); }

Statevector apply_gate(Statevector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

Statevector run_circuit(Statevector state, std::span<const Gate> gates) {
    for (const Gate &g : gates) {
        state.apply(g);
    }
    return state;
}

OutcomeDistribution probabilities(const Statevector &state) {
    OutcomeDistribution out;
    out.probs.resize(state.dim());
    simd::active().abs2(state.amplitudes(), out.probs);
    return out;
}

std::map<std::uint64_t, std::uint64_t> sample_counts(const Statevector &state,
                                                     std::uint64_t shots,
                                                     std::uint64_t seed) {
    if (shots == 0) {
        throw ConfigError("shots must be >= 1");
    }
    const OutcomeDistribution p = probabilities(state);
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::uint64_t> dist(p.probs.begin(), p.probs.end());
    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++counts[dist(rng)];
    }
    return counts;
}

} // namespace hqnn
