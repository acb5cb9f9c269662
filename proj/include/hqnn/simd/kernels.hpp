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
 * Data-parallel inner loops shared by the statevector simulator and the
 * classical layers. Each kernel has a scalar reference implementation and,
 * on x86-64, an AVX2+FMA variant. The variant is picked once at startup from
 * the CPU feature flags; setting HQNN_SIMD=scalar forces the reference path.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace hqnn::simd {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
    cplx m00, m01, m10, m11;
};

struct KernelTable {
    std::string_view name;

    /// Applies `m` to qubit `target` of a little-endian amplitude vector.
    void (*apply_1q)(std::span<cplx> amps, unsigned target, const Mat2 &m);

    /// out[k] = |amps[k]|^2
    void (*abs2)(std::span<const cplx> amps, std::span<double> out);

    double (*dot)(std::span<const double> a, std::span<const double> b);

    /// y += alpha * x
    void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);
};

const KernelTable &scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks it.
const KernelTable *avx2_kernels();

/// The table selected for this process.
const KernelTable &active();

} // namespace hqnn::simd
