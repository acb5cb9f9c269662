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

#include "hqnn/simd/kernels.hpp"

namespace hqnn::simd {

namespace {

void apply_1q_scalar(std::span<cplx> amps, unsigned target, const Mat2 &m) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a0 = amps[i];
            const cplx a1 = amps[i + stride];
            amps[i] = m.m00 * a0 + m.m01 * a1;
            amps[i + stride] = m.m10 * a0 + m.m11 * a1;
        }
    }
}

void abs2_scalar(std::span<const cplx> amps, std::span<double> out) {
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double re = amps[k].real();
        const double im = amps[k].imag();
        out[k] = re * re + im * im;
    }
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

const KernelTable kScalar{"scalar", &apply_1q_scalar, &abs2_scalar, &dot_scalar,
                          &axpy_scalar};

} // namespace

const KernelTable &scalar_kernels() { return kScalar; }

} // namespace hqnn::simd
