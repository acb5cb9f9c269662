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

#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into the library's kernels.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "hqnn/statevec.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// Row-major dense complex matrix.
struct Matrix {
    std::size_t n = 0;
    std::vector<cplx> a;

    explicit Matrix(std::size_t dim) : n(dim), a(dim * dim) {}

    static Matrix identity(std::size_t dim) {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    cplx &operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
    cplx operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

inline Matrix mul(const Matrix &x, const Matrix &y) {
    Matrix z(x.n);
    for (std::size_t i = 0; i < x.n; ++i) {
        for (std::size_t k = 0; k < x.n; ++k) {
            const cplx v = x(i, k);
            for (std::size_t j = 0; j < x.n; ++j) {
                z(i, j) += v * y(k, j);
            }
        }
    }
    return z;
}

inline Matrix kron(const Matrix &x, const Matrix &y) {
    Matrix z(x.n * y.n);
    for (std::size_t i = 0; i < x.n; ++i) {
        for (std::size_t j = 0; j < x.n; ++j) {
            for (std::size_t k = 0; k < y.n; ++k) {
                for (std::size_t l = 0; l < y.n; ++l) {
                    z(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
                }
            }
        }
    }
    return z;
}

/// 2x2 matrix from the textbook definitions.
inline Matrix single(const hqnn::Gate &g) {
    Matrix m(2);
    const double c = std::cos(g.angle / 2);
    const double s = std::sin(g.angle / 2);
    switch (g.kind) {
    case hqnn::GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        m(0, 0) = r;
        m(0, 1) = r;
        m(1, 0) = r;
        m(1, 1) = -r;
        break;
    }
    case hqnn::GateKind::RY:
        m(0, 0) = c;
        m(0, 1) = -s;
        m(1, 0) = s;
        m(1, 1) = c;
        break;
    case hqnn::GateKind::RZ:
        m(0, 0) = std::polar(1.0, -g.angle / 2);
        m(1, 1) = std::polar(1.0, g.angle / 2);
        break;
    case hqnn::GateKind::CNOT:
        break;
    }
    return m;
}

/// Full 2^n x 2^n operator. Qubit q is bit q of the basis index, so it is
/// the q-th factor counted from the right of the Kronecker product.
inline Matrix full(const hqnn::Gate &g, unsigned n) {
    const std::size_t dim = std::size_t{1} << n;
    if (g.kind == hqnn::GateKind::CNOT) {
        Matrix m(dim);
        for (std::size_t col = 0; col < dim; ++col) {
            std::size_t row = col;
            if ((col >> g.control) & 1U) {
                row ^= std::size_t{1} << g.target;
            }
            m(row, col) = 1.0;
        }
        return m;
    }
    Matrix m = Matrix::identity(1);
    for (unsigned q = n; q-- > 0;) {
        m = kron(m, q == g.target ? single(g) : Matrix::identity(2));
    }
    return m;
}

inline Matrix circuit_unitary(const std::vector<hqnn::Gate> &gates, unsigned n) {
    Matrix u = Matrix::identity(std::size_t{1} << n);
    for (const auto &g : gates) {
        u = mul(full(g, n), u);
    }
    return u;
}

/// U |0...0> is the first column of U.
inline std::vector<cplx> run(const std::vector<hqnn::Gate> &gates, unsigned n) {
    const Matrix u = circuit_unitary(gates, n);
    std::vector<cplx> out(u.n);
    for (std::size_t i = 0; i < u.n; ++i) {
        out[i] = u(i, 0);
    }
    return out;
}

inline std::vector<hqnn::Gate> random_gates(std::mt19937_64 &rng, unsigned n,
                                            std::size_t depth) {
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    std::uniform_int_distribution<unsigned> qubit(0, n - 1);
    std::uniform_int_distribution<int> kind(0, n > 1 ? 3 : 2);
    std::vector<hqnn::Gate> gates;
    for (std::size_t i = 0; i < depth; ++i) {
        const unsigned t = qubit(rng);
        switch (kind(rng)) {
        case 0:
            gates.push_back(hqnn::Gate::h(t));
            break;
        case 1:
            gates.push_back(hqnn::Gate::ry(angle(rng), t));
            break;
        case 2:
            gates.push_back(hqnn::Gate::rz(angle(rng), t));
            break;
        default: {
            unsigned c = qubit(rng);
            while (c == t) {
                c = qubit(rng);
            }
            gates.push_back(hqnn::Gate::cnot(c, t));
        }
        }
    }
    return gates;
}

/// Closed-form P(1) of the one-qubit head H, RZ(2x), RY(a), RY(b).
inline double head_p1(double x, double a, double b) {
    return (1.0 + std::sin(a + b) * std::cos(2 * x)) / 2.0;
}

/// Plain batch gradient-descent logistic regression on R^d.
struct Logistic {
    std::vector<double> w;
    double b = 0.0;

    void fit(const std::vector<std::vector<double>> &x, const std::vector<int> &y,
             int iters = 500, double lr = 0.1) {
        const std::size_t d = x.front().size();
        w.assign(d, 0.0);
        b = 0.0;
        for (int it = 0; it < iters; ++it) {
            std::vector<double> gw(d, 0.0);
            double gb = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double err = prob(x[i]) - y[i];
                for (std::size_t j = 0; j < d; ++j) {
                    gw[j] += err * x[i][j];
                }
                gb += err;
            }
            for (std::size_t j = 0; j < d; ++j) {
                w[j] -= lr * gw[j] / static_cast<double>(x.size());
            }
            b -= lr * gb / static_cast<double>(x.size());
        }
    }

    [[nodiscard]] double prob(const std::vector<double> &xi) const {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) {
            z += w[j] * xi[j];
        }
        return 1.0 / (1.0 + std::exp(-z));
    }

    [[nodiscard]] double accuracy(const std::vector<std::vector<double>> &x,
                                  const std::vector<int> &y) const {
        std::size_t ok = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            ok += static_cast<int>(prob(x[i]) > 0.5) == y[i];
        }
        return static_cast<double>(ok) / static_cast<double>(x.size());
    }
};

} // namespace oracle
