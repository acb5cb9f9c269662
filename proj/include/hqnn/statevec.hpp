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
 * Dense statevector simulation for small registers.
 *
 * Outcome indices are little-endian: bit j of index k is the value measured
 * on qubit j. Gate matrices:
 *   H     = 1/sqrt(2) [[1, 1], [1, -1]]
 *   RY(a) = [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]]
 *   RZ(a) = diag(exp(-i a/2), exp(+i a/2))
 *   CNOT flips the target when the control bit is 1.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "hqnn/simd/kernels.hpp"

namespace hqnn {

using cplx = std::complex<double>;

inline constexpr unsigned kMaxQubits = 20;

enum class GateKind : std::uint8_t { H, RY, RZ, CNOT };

const char *gate_name(GateKind kind);

/// True for gate kinds that carry a rotation angle.
constexpr bool is_rotation(GateKind kind) {
    return kind == GateKind::RY || kind == GateKind::RZ;
}

struct Gate {
    GateKind kind = GateKind::H;
    double angle = 0.0; // radians; RY and RZ only
    unsigned target = 0;
    unsigned control = 0; // CNOT only

    static Gate h(unsigned q) { return {GateKind::H, 0.0, q, 0}; }
    static Gate ry(double a, unsigned q) { return {GateKind::RY, a, q, 0}; }
    static Gate rz(double a, unsigned q) { return {GateKind::RZ, a, q, 0}; }
    static Gate cnot(unsigned c, unsigned t) { return {GateKind::CNOT, 0.0, t, c}; }
};

/// 2x2 matrix of a single-qubit gate. CNOT has no 2x2 form.
simd::Mat2 gate_matrix(const Gate &gate);

class Statevector {
  public:
    /// |0...0> on `num_qubits` qubits.
    explicit Statevector(unsigned num_qubits);

    /// Wraps explicit amplitudes; the length must be a power of two and the
    /// vector normalized within 1e-10.
    static Statevector from_amplitudes(std::vector<cplx> amplitudes);

    [[nodiscard]] unsigned num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] const cplx &operator[](std::size_t k) const { return amps_[k]; }

    /// Applies `gate` in place.
    void apply(const Gate &gate);

    [[nodiscard]] double norm_squared() const;

  private:
    Statevector() = default;

    unsigned num_qubits_ = 0;
    std::vector<cplx> amps_;
};

struct OutcomeDistribution {
    std::vector<double> probs;

    [[nodiscard]] std::size_t size() const { return probs.size(); }
    double operator[](std::size_t k) const { return probs[k]; }
};

Statevector init_zero(unsigned num_qubits);
Statevector apply_gate(Statevector state, const Gate &gate);
Statevector run_circuit(Statevector state, std::span<const Gate> gates);
OutcomeDistribution probabilities(const Statevector &state);

/// Draws `shots` i.i.d. outcomes from probabilities(state). Deterministic for
/// a given seed; only outcomes that occurred appear in the map.
std::map<std::uint64_t, std::uint64_t> sample_counts(const Statevector &state,
                                                     std::uint64_t shots,
                                                     std::uint64_t seed);

} // namespace hqnn
