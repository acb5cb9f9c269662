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

// Compiled with -mavx2 -mfma. Nothing here may run before the dispatcher has
// confirmed CPU support.

#include "hqnn/simd/kernels.hpp"

#include <immintrin.h>

namespace hqnn::simd::detail {

namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d c, __m256d a) {
    const __m256d c_re = _mm256_movedup_pd(c);
    const __m256d c_im = _mm256_permute_pd(c, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(c_re, a, _mm256_mul_pd(c_im, a_sw));
}

inline __m256d broadcast(const cplx &z) {
    return _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag());
}

void apply_1q_avx2(std::span<cplx> amps, unsigned target, const Mat2 &m) {
    double *p = reinterpret_cast<double *>(amps.data());
    const std::size_t dim = amps.size();
    if (target == 0) {
        // Pair (2k, 2k+1) shares one register.
        const __m256d first = _mm256_setr_pd(m.m00.real(), m.m00.imag(),
                                             m.m10.real(), m.m10.imag());
        const __m256d second = _mm256_setr_pd(m.m01.real(), m.m01.imag(),
                                              m.m11.real(), m.m11.imag());
        for (std::size_t k = 0; k < dim; k += 2) {
            const __m256d v = _mm256_loadu_pd(p + 2 * k);
            const __m256d a0 = _mm256_permute2f128_pd(v, v, 0x00);
            const __m256d a1 = _mm256_permute2f128_pd(v, v, 0x11);
            _mm256_storeu_pd(p + 2 * k,
                             _mm256_add_pd(cmul(first, a0), cmul(second, a1)));
        }
        return;
    }
    const std::size_t stride = std::size_t{1} << target;
    const __m256d m00 = broadcast(m.m00);
    const __m256d m01 = broadcast(m.m01);
    const __m256d m10 = broadcast(m.m10);
    const __m256d m11 = broadcast(m.m11);
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; i += 2) {
            double *lo = p + 2 * i;
            double *hi = p + 2 * (i + stride);
            const __m256d a0 = _mm256_loadu_pd(lo);
            const __m256d a1 = _mm256_loadu_pd(hi);
            _mm256_storeu_pd(lo, _mm256_add_pd(cmul(m00, a0), cmul(m01, a1)));
            _mm256_storeu_pd(hi, _mm256_add_pd(cmul(m10, a0), cmul(m11, a1)));
        }
    }
}

void abs2_avx2(std::span<const cplx> amps, std::span<double> out) {
    const double *p = reinterpret_cast<const double *>(amps.data());
    const std::size_t n = amps.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d a = _mm256_loadu_pd(p + 2 * k);
        const __m256d b = _mm256_loadu_pd(p + 2 * k + 4);
        // hadd gives [p0, p2, p1, p3]
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        _mm256_storeu_pd(out.data() + k, _mm256_permute4x64_pd(h, 0b11011000));
    }
    for (; k < n; ++k) {
        const double re = amps[k].real();
        const double im = amps[k].imag();
        out[k] = re * re + im * im;
    }
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i),
                               _mm256_loadu_pd(b.data() + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4),
                               _mm256_loadu_pd(b.data() + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i),
                               _mm256_loadu_pd(b.data() + i), acc0);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d s2 = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
    for (; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yv = _mm256_loadu_pd(y.data() + i);
        _mm256_storeu_pd(y.data() + i,
                         _mm256_fmadd_pd(av, _mm256_loadu_pd(x.data() + i), yv));
    }
    for (; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

const KernelTable kAvx2{"avx2", &apply_1q_avx2, &abs2_avx2, &dot_avx2, &axpy_avx2};

} // namespace

const KernelTable &avx2_table() { return kAvx2; }

} // namespace hqnn::simd::detail
