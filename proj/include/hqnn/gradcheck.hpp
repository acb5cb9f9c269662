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
 * Analytic-versus-numeric gradient verification for every differentiable
 * component: parameter-shift Jacobians against central differences
 * (h = 1e-6, absolute tolerance 1e-6) and hand-written layer backward passes
 * against central differences (h = 1e-5, relative tolerance 1e-4 with a
 * 1e-7 absolute floor).
 */

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hqnn/circuits.hpp"

namespace hqnn::gradcheck {

inline constexpr double kQuantumStep = 1e-6;
inline constexpr double kQuantumTolerance = 1e-6;
inline constexpr double kClassicalStep = 1e-5;
inline constexpr double kClassicalRelTolerance = 1e-4;
inline constexpr double kClassicalAbsFloor = 1e-7;

struct RandomCircuitSpec {
    unsigned num_qubits = 1;
    std::size_t depth = 10;
    bool use_ry = true;
    bool use_rz = true;
    /// Size of the symbol pool rotations draw from; 0 gives every rotation
    /// its own symbol. A small pool forces shared parameters.
    std::size_t symbol_pool = 0;
    /// Random linear coefficients and offsets instead of 1·p + 0.
    bool random_affine = false;
};

/// Random circuit over {H, RY, RZ, CNOT}. Symbols alternate between the input
/// and weight lists. May contain constant-angle rotations.
ParameterizedCircuit random_circuit(std::mt19937_64 &rng, const RandomCircuitSpec &spec);

/// Passes when |a - n| <= floor or |a - n| <= rel_tol * max(|a|, |n|).
bool close_relative(double analytic, double numeric, double rel_tol = kClassicalRelTolerance,
                    double abs_floor = kClassicalAbsFloor);

struct ComponentResult {
    std::string name;
    std::string category; // "quantum" or "classical"
    std::size_t checks = 0;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    bool passed = true;
};

struct Options {
    std::uint64_t seed = 0;
    std::size_t quantum_trials = 20; // per quantum component
    std::size_t classical_trials = 5; // per classical component
    /// Flip the sign of the RY shift-rule derivative (detector self-test).
    bool inject_ry_sign_error = false;
};

struct Report {
    std::vector<ComponentResult> components;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::vector<std::string> failing() const;
};

Report run(const Options &options);

} // namespace hqnn::gradcheck
