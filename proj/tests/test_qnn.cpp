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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "hqnn/error.hpp"
#include "hqnn/gradcheck.hpp"
#include "hqnn/qnn.hpp"
#include "oracles.hpp"

using namespace hqnn;
using std::numbers::pi;

namespace {

using Vec = std::vector<double>;

/// Central differences of every outcome probability w.r.t. entry i of `v`.
Vec fd_column(const SamplerQnn &q, Vec in, Vec w, bool wrt_weight, std::size_t i,
              double h = 1e-6) {
    Vec &v = wrt_weight ? w : in;
    const double orig = v[i];
    v[i] = orig + h;
    const auto fp = q.forward(in, w).probs;
    v[i] = orig - h;
    const auto fm = q.forward(in, w).probs;
    Vec col(fp.size());
    for (std::size_t k = 0; k < fp.size(); ++k) {
        col[k] = (fp[k] - fm[k]) / (2 * h);
    }
    return col;
}

Vec uniform(std::mt19937_64 &rng, std::size_t n, double lo = -pi, double hi = pi) {
    std::uniform_real_distribution<double> d(lo, hi);
    Vec v(n);
    for (auto &x : v) {
        x = d(rng);
    }
    return v;
}

void require_fd_match(const SamplerQnn &q, const Vec &in, const Vec &w) {
    const QnnGradients g = q.backward(in, w);
    for (std::size_t i = 0; i < q.num_inputs(); ++i) {
        const Vec col = fd_column(q, in, w, false, i);
        for (std::size_t k = 0; k < q.output_dim(); ++k) {
            REQUIRE(std::abs(g.d_input(k, i) - col[k]) <= 1e-6);
        }
    }
    for (std::size_t j = 0; j < q.num_weights(); ++j) {
        const Vec col = fd_column(q, in, w, true, j);
        for (std::size_t k = 0; k < q.output_dim(); ++k) {
            REQUIRE(std::abs(g.d_weight(k, j) - col[k]) <= 1e-6);
        }
    }
}

} // namespace

TEST_CASE("sampler head shape") {
    const auto q = make_sampler_head(1);
    CHECK(q.num_inputs() == 1);
    CHECK(q.num_weights() == 2);
    CHECK(q.output_dim() == 2);
    const auto q3 = make_sampler_head(3, 2, 2);
    CHECK(q3.num_inputs() == 3);
    CHECK(q3.num_weights() == 9);
    CHECK(q3.output_dim() == 8);
}

TEST_CASE("qnn_forward closed-form examples") {
    const auto q = make_sampler_head(1);
    const auto p = qnn_forward(q, Vec{0.0}, Vec{pi / 4, pi / 4});
    CHECK(std::abs(p[0]) <= 1e-12);
    CHECK(std::abs(p[1] - 1.0) <= 1e-12);
    for (double x : {-2.0, 0.0, 0.3, 1.7}) {
        const auto r = qnn_forward(q, Vec{x}, Vec{0.0, 0.0});
        CHECK(std::abs(r[0] - 0.5) <= 1e-12);
        CHECK(std::abs(r[1] - 0.5) <= 1e-12);
    }
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const Vec x = uniform(rng, 1), w = uniform(rng, 2);
        const auto r = qnn_forward(q, x, w);
        REQUIRE(std::abs(r[1] - oracle::head_p1(x[0], w[0], w[1])) <= 1e-12);
    }
}

TEST_CASE("closed form itself agrees with the dense-matrix oracle") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const Vec v = uniform(rng, 3);
        const std::vector<Gate> g = {Gate::h(0), Gate::rz(2 * v[0], 0), Gate::ry(v[1], 0),
                                     Gate::ry(v[2], 0)};
        const auto amp = oracle::run(g, 1);
        REQUIRE(std::abs(std::norm(amp[1]) - oracle::head_p1(v[0], v[1], v[2])) <= 1e-12);
    }
}

TEST_CASE("multi-qubit forward matches the dense-matrix oracle") {
    std::mt19937_64 rng(3);
    for (unsigned n = 2; n <= 3; ++n) {
        const auto q = make_sampler_head(n, 2, 2);
        for (int t = 0; t < 10; ++t) {
            const Vec x = uniform(rng, q.num_inputs()), w = uniform(rng, q.num_weights());
            const auto p = q.forward(x, w);
            const auto amp = oracle::run(hqnn::bind(q.circuit(), x, w), n);
            double sum = 0;
            for (std::size_t k = 0; k < amp.size(); ++k) {
                REQUIRE(std::abs(p[k] - std::norm(amp[k])) <= 1e-12);
                REQUIRE(p[k] >= 0.0);
                sum += p[k];
            }
            REQUIRE(std::abs(sum - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("qnn_forward argument checks") {
    const auto q = make_sampler_head(1);
    CHECK_THROWS_AS(q.forward(Vec{}, Vec{0.0, 0.0}), BindingError);
    CHECK_THROWS_AS(q.forward(Vec{0.0}, Vec{0.0}), BindingError);
    CHECK_THROWS_AS(q.backward(Vec{0.0}, Vec{0.0, 0.0, 0.0}), BindingError);
}

TEST_CASE("qnn_forward_sampled") {
    const auto q = make_sampler_head(1);
    // x = 0, theta sum = pi/2 is the deterministic |1> state.
    for (std::uint64_t shots : {1ULL, 7ULL, 1000ULL}) {
        const auto p = qnn_forward_sampled(q, Vec{0.0}, Vec{pi / 4, pi / 4}, shots, 5);
        CHECK(p[0] == 0.0);
        CHECK(p[1] == 1.0);
    }
    const std::uint64_t shots = 100000;
    const auto p = qnn_forward_sampled(q, Vec{0.4}, Vec{0.0, 0.0}, shots, 8);
    const double bound = 3 * std::sqrt(0.25 / shots);
    CHECK(std::abs(p[0] - 0.5) <= bound);
    CHECK(std::abs(p[1] - 0.5) <= bound);
    CHECK(p[0] + p[1] == 1.0);
    CHECK(qnn_forward_sampled(q, Vec{0.4}, Vec{0.0, 0.0}, shots, 8).probs == p.probs);
    CHECK_THROWS_AS(qnn_forward_sampled(q, Vec{0.4}, Vec{0.0, 0.0}, 0, 8), ConfigError);
}

TEST_CASE("qnn_backward closed-form examples") {
    const auto q = make_sampler_head(1);
    auto g = qnn_backward(q, Vec{0.0}, Vec{0.0, 0.0});
    CHECK(std::abs(g.d_weight(1, 0) - 0.5) <= 1e-12);
    CHECK(std::abs(g.d_weight(1, 1) - 0.5) <= 1e-12);
    g = qnn_backward(q, Vec{0.0}, Vec{pi / 4, pi / 4});
    CHECK(std::abs(g.d_input(1, 0)) <= 1e-12);

    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const Vec x = uniform(rng, 1), w = uniform(rng, 2);
        g = qnn_backward(q, x, w);
        const double s = w[0] + w[1];
        REQUIRE(std::abs(g.d_weight(1, 0) - std::cos(s) * std::cos(2 * x[0]) / 2) <= 1e-12);
        REQUIRE(std::abs(g.d_input(1, 0) + std::sin(s) * std::sin(2 * x[0])) <= 1e-12);
    }
}

TEST_CASE("shift rule matches finite differences on random circuits") {
    std::mt19937_64 rng(5);
    int configs = 0;
    for (unsigned n = 1; n <= 3; ++n) {
        for (int t = 0; t < 20; ++t) {
            gradcheck::RandomCircuitSpec spec;
            spec.num_qubits = n;
            spec.depth = 1 + t % 20;
            spec.random_affine = t % 2 == 1;
            spec.symbol_pool = t % 3 == 0 ? 3 : 0;
            const SamplerQnn q(gradcheck::random_circuit(rng, spec));
            require_fd_match(q, uniform(rng, q.num_inputs()), uniform(rng, q.num_weights()));
            ++configs;
        }
    }
    CHECK(configs >= 50);
}

TEST_CASE("shared parameter gradient is the sum over its occurrences") {
    // One symbol in three gates with different coefficients.
    const std::vector<CircuitOp> ops = {
        {GateKind::H, 0, 0, std::nullopt},
        {GateKind::RY, 0, 0, ParamExpr::linear("t", 1.0)},
        {GateKind::RZ, 0, 0, ParamExpr::linear("t", -0.5, 0.3)},
        {GateKind::RY, 0, 0, ParamExpr::linear("t", 2.0)},
    };
    const SamplerQnn shared(ParameterizedCircuit(1, ops, {}, {"t"}));
    // Same circuit with one symbol per occurrence.
    const std::vector<CircuitOp> split_ops = {
        {GateKind::H, 0, 0, std::nullopt},
        {GateKind::RY, 0, 0, ParamExpr::linear("a", 1.0)},
        {GateKind::RZ, 0, 0, ParamExpr::linear("b", -0.5, 0.3)},
        {GateKind::RY, 0, 0, ParamExpr::linear("c", 2.0)},
    };
    const SamplerQnn split(ParameterizedCircuit(1, split_ops, {}, {"a", "b", "c"}));
    for (double t : {-1.3, 0.0, 0.42, 2.5}) {
        const auto g = shared.backward(Vec{}, Vec{t});
        const auto gs = split.backward(Vec{}, Vec{t, t, t});
        for (std::size_t k = 0; k < 2; ++k) {
            const double sum = gs.d_weight(k, 0) + gs.d_weight(k, 1) + gs.d_weight(k, 2);
            REQUIRE(std::abs(g.d_weight(k, 0) - sum) <= 1e-12);
        }
        require_fd_match(shared, Vec{}, Vec{t});
    }
}

TEST_CASE("feature-map input gradient carries the chain factor 2") {
    // Same circuit with the feature angle exposed as a free weight a = 2x.
    const std::vector<CircuitOp> ops = {
        {GateKind::H, 0, 0, std::nullopt},
        {GateKind::RZ, 0, 0, ParamExpr::linear("a")},
        {GateKind::RY, 0, 0, ParamExpr::linear("θ_0")},
        {GateKind::RY, 0, 0, ParamExpr::linear("θ_1")},
    };
    const SamplerQnn angle(ParameterizedCircuit(1, ops, {}, {"a", "θ_0", "θ_1"}));
    const auto head = make_sampler_head(1);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 20; ++i) {
        const Vec x = uniform(rng, 1), w = uniform(rng, 2);
        const auto gx = head.backward(x, w);
        const auto ga = angle.backward(Vec{}, Vec{2 * x[0], w[0], w[1]});
        for (std::size_t k = 0; k < 2; ++k) {
            REQUIRE(std::abs(gx.d_input(k, 0) - 2 * ga.d_weight(k, 0)) <= 1e-12);
        }
    }
}

TEST_CASE("jacobian columns sum to zero") {
    std::mt19937_64 rng(7);
    for (unsigned n = 1; n <= 3; ++n) {
        const auto q = make_sampler_head(n, 1, 2);
        const auto g = q.backward(uniform(rng, q.num_inputs()), uniform(rng, q.num_weights()));
        for (std::size_t i = 0; i < q.num_inputs(); ++i) {
            double s = 0;
            for (std::size_t k = 0; k < q.output_dim(); ++k) {
                s += g.d_input(k, i);
            }
            REQUIRE(std::abs(s) <= 1e-10);
        }
        for (std::size_t j = 0; j < q.num_weights(); ++j) {
            double s = 0;
            for (std::size_t k = 0; k < q.output_dim(); ++k) {
                s += g.d_weight(k, j);
            }
            REQUIRE(std::abs(s) <= 1e-10);
        }
    }
}

TEST_CASE("gradcheck report passes by default and names RY under the injected fault") {
    gradcheck::Options opt;
    opt.seed = 3;
    CHECK(gradcheck::run(opt).passed());
    opt.inject_ry_sign_error = true;
    const auto bad = gradcheck::run(opt);
    CHECK_FALSE(bad.passed());
    const auto names = bad.failing();
    CHECK(std::find(names.begin(), names.end(), "RY") != names.end());
    CHECK(std::find(names.begin(), names.end(), "RZ") == names.end());
}
