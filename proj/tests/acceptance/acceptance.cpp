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

// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

#include "hqnn/binary_io.hpp"
#include "hqnn/circuits.hpp"
#include "hqnn/data.hpp"
#include "hqnn/gradcheck.hpp"
#include "hqnn/hybrid/checkpoint.hpp"
#include "hqnn/hybrid/loss.hpp"
#include "hqnn/hybrid/model.hpp"
#include "hqnn/hybrid/train.hpp"
#include "hqnn/nn/backbone.hpp"
#include "hqnn/qnn.hpp"
#include "hqnn/statevec.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hqnn;

namespace {

using Clock = std::chrono::steady_clock;
using Vec = std::vector<double>;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << v;
    return s.str();
}

std::string fixed(double v, int digits = 2) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

int run_cli(std::vector<std::string> args, std::string *out = nullptr) {
    args.insert(args.begin(), "hqnn");
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    if (out != nullptr) {
        *out = o.str();
    }
    if (code != 0) {
        std::cerr << e.str();
    }
    return code;
}

Vec uniform(std::mt19937_64 &rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    Vec v(n);
    for (auto &x : v) {
        x = d(rng);
    }
    return v;
}

nn::Tensor normal_tensor(std::mt19937_64 &rng, nn::Shape s) {
    std::normal_distribution<double> d;
    nn::Tensor t(std::move(s));
    for (auto &v : t.data) {
        v = d(rng);
    }
    return t;
}

double rel_excess(double a, double n, double floor = 1e-7) {
    const double err = std::abs(a - n);
    if (err <= floor) {
        return 0.0;
    }
    return err / std::max(std::abs(a), std::abs(n));
}

// ---------------------------------------------------------------- criteria

Verdict quantum_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<unsigned> qubits(1, 3);
    std::uniform_int_distribution<std::size_t> depth(0, 20);
    double max_err = 0;
    double sim_seconds = 0;
    for (int i = 0; i < 100; ++i) {
        const unsigned n = qubits(rng);
        const auto gates = oracle::random_gates(rng, n, depth(rng));
        const auto t0 = Clock::now();
        const auto s = run_circuit(init_zero(n), gates);
        sim_seconds += seconds_since(t0);
        const auto ref = oracle::run(gates, n);
        for (std::size_t k = 0; k < ref.size(); ++k) {
            max_err = std::max(max_err, std::abs(s[k] - ref[k]));
        }
    }
    return {max_err <= 1e-12 && sim_seconds < 5.0,
            "100 circuits, max amplitude error " + sci(max_err) + ", simulator time " +
                fixed(sim_seconds, 4) + " s"};
}

Verdict closed_form_head() {
    const auto q = make_sampler_head(1);
    std::mt19937_64 rng(202);
    double max_err = 0, formula_err = 0;
    for (int i = 0; i < 100; ++i) {
        const Vec v = uniform(rng, 3, -std::numbers::pi, std::numbers::pi);
        const double expect = oracle::head_p1(v[0], v[1], v[2]);
        const auto p = qnn_forward(q, Vec{v[0]}, Vec{v[1], v[2]});
        max_err = std::max(max_err, std::abs(p[1] - expect));
        // The formula itself against the dense-matrix simulator.
        const auto amp = oracle::run({Gate::h(0), Gate::rz(2 * v[0], 0), Gate::ry(v[1], 0),
                                      Gate::ry(v[2], 0)},
                                     1);
        formula_err = std::max(formula_err, std::abs(std::norm(amp[1]) - expect));
    }
    return {max_err <= 1e-12 && formula_err <= 1e-12,
            "100 draws, |qnn_forward - closed form| <= " + sci(max_err) +
                ", |closed form - oracle| <= " + sci(formula_err)};
}

Verdict shift_rule() {
    std::mt19937_64 rng(303);
    double max_err = 0;
    int configs = 0, shared = 0;
    const double h = 1e-6;
    for (int t = 0; t < 60; ++t) {
        gradcheck::RandomCircuitSpec spec;
        spec.num_qubits = 1 + static_cast<unsigned>(t % 3);
        spec.depth = 2 + static_cast<std::size_t>(t % 19);
        spec.random_affine = t % 2 == 0;
        spec.symbol_pool = t % 3 == 1 ? 2 : 0;
        const SamplerQnn q(gradcheck::random_circuit(rng, spec));
        Vec in = uniform(rng, q.num_inputs(), -3, 3), w = uniform(rng, q.num_weights(), -3, 3);
        const auto g = q.backward(in, w);
        for (int which = 0; which < 2; ++which) {
            Vec &vec = which == 0 ? in : w;
            for (std::size_t i = 0; i < vec.size(); ++i) {
                const double orig = vec[i];
                vec[i] = orig + h;
                const auto fp = q.forward(in, w);
                vec[i] = orig - h;
                const auto fm = q.forward(in, w);
                vec[i] = orig;
                for (std::size_t k = 0; k < q.output_dim(); ++k) {
                    const double num = (fp[k] - fm[k]) / (2 * h);
                    const double ana = which == 0 ? g.d_input(k, i) : g.d_weight(k, i);
                    max_err = std::max(max_err, std::abs(ana - num));
                }
            }
        }
        ++configs;
        shared += spec.symbol_pool > 0;
    }
    const int gc = run_cli({"gradcheck", "--seed", "7"});
    return {max_err <= 1e-6 && configs >= 50 && shared > 0 && gc == 0,
            std::to_string(configs) + " configurations (" + std::to_string(shared) +
                " shared-parameter), max |error| " + sci(max_err) + ", gradcheck exit " +
                std::to_string(gc)};
}

/// Worst relative error of a layer's input and parameter gradients.
double layer_fd(nn::Layer &layer, const nn::Shape &shape, std::mt19937_64 &rng) {
    nn::init_glorot_uniform(layer, rng);
    nn::Tensor x;
    do {
        x = normal_tensor(rng, shape);
        layer.forward(x);
    } while (layer.kink_margin() < 1e-3);
    const nn::Tensor r = normal_tensor(rng, layer.output_shape(shape));
    const auto probe = [&](const nn::Tensor &in) {
        const auto y = layer.forward(in);
        double s = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            s += y[i] * r[i];
        }
        return s;
    };
    layer.zero_grad();
    layer.forward(x);
    const auto gx = layer.backward(r);
    const double h = 1e-5;
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        nn::Tensor a = x, b = x;
        a[i] += h;
        b[i] -= h;
        worst = std::max(worst, rel_excess(gx[i], (probe(a) - probe(b)) / (2 * h)));
    }
    for (auto &p : layer.params()) {
        const auto grad = *p.grad;
        for (std::size_t i = 0; i < p.value->size(); ++i) {
            const double o = (*p.value)[i];
            (*p.value)[i] = o + h;
            const double fp = probe(x);
            (*p.value)[i] = o - h;
            const double fm = probe(x);
            (*p.value)[i] = o;
            worst = std::max(worst, rel_excess(grad[i], (fp - fm) / (2 * h)));
        }
    }
    return worst;
}

double hybrid_fd(std::mt19937_64 &rng, unsigned qubits) {
    std::unique_ptr<hybrid::HybridModel> m;
    nn::Tensor x;
    const auto margin = [](const hybrid::Model &model) {
        double v = std::numeric_limits<double>::infinity();
        for (const auto &l : model.backbone()) {
            v = std::min(v, l->kink_margin());
        }
        return v;
    };
    do {
        hybrid::HybridConfig cfg;
        cfg.backbone.input_shape = {1, 6, 6};
        cfg.backbone.stages = {{2, 3, 1, 1, 2, 2}};
        cfg.qubits = qubits;
        cfg.seed = rng();
        cfg.backbone.seed = cfg.seed;
        m = std::make_unique<hybrid::HybridModel>(cfg);
        x = normal_tensor(rng, {4, 1, 6, 6});
        m->forward(x);
    } while (margin(*m) < 1e-3);
    const std::vector<std::uint8_t> labels{0, 1, 1, 0};
    m->zero_grad();
    m->backward(hybrid::cross_entropy_grad(m->forward(x), labels));
    auto params = m->parameters();
    std::vector<Vec> grads;
    for (auto &p : params) {
        grads.push_back(p.grad->data);
    }
    const double h = 1e-5;
    double worst = 0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t i = 0; i < params[p].value->size(); ++i) {
            double &v = (*params[p].value)[i];
            const double o = v;
            v = o + h;
            const double fp = hybrid::cross_entropy(m->forward(x), labels);
            v = o - h;
            const double fm = hybrid::cross_entropy(m->forward(x), labels);
            v = o;
            worst = std::max(worst, rel_excess(grads[p][i], (fp - fm) / (2 * h)));
        }
    }
    return worst;
}

Verdict classical_gradients() {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<std::size_t> small(1, 3), side(3, 7);
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t b = small(rng), c = small(rng), hgt = side(rng), wid = side(rng);
        nn::Dense dense(side(rng), small(rng));
        worst = std::max(worst, layer_fd(dense, {b, dense.in_features()}, rng));
        nn::Conv2D conv(c, small(rng), small(rng), 1 + t % 2, t % 2);
        worst = std::max(worst, layer_fd(conv, {b, c, hgt, wid}, rng));
        nn::ReLU relu;
        worst = std::max(worst, layer_fd(relu, {b, c, hgt}, rng));
        nn::MaxPool2D pool(2, 1 + t % 2);
        worst = std::max(worst, layer_fd(pool, {b, c, hgt, wid}, rng));
        nn::GlobalAvgPool gap;
        worst = std::max(worst, layer_fd(gap, {b, c, hgt, wid}, rng));
        nn::Flatten flat;
        worst = std::max(worst, layer_fd(flat, {b, c, hgt, wid}, rng));
        nn::Sigmoid sig;
        worst = std::max(worst, layer_fd(sig, {b, wid}, rng));
    }
    const double layers = worst;
    for (int t = 0; t < 10; ++t) {
        worst = std::max(worst, hybrid_fd(rng, 1 + static_cast<unsigned>(t % 2)));
    }
    return {worst <= 1e-4, "7 layer kinds x 20 instances, worst relative error " + sci(layers) +
                               "; hybrid model x 10, overall worst " + sci(worst) +
                               " (errors under the 1e-7 absolute floor count as 0)"};
}

Verdict decision_rule() {
    std::size_t checked = 0, wrong = 0;
    for (int i = 0; i <= 10000; ++i) {
        const double p0 = i / 10000.0;
        for (double p1 : {1.0 - p0, p0}) {
            const auto label = hybrid::predict(nn::Tensor({1, 2}, {p0, p1}))[0];
            wrong += label != (p0 > p1 ? 0 : 1);
            ++checked;
        }
    }
    const bool tie = hybrid::predict(nn::Tensor({1, 2}, {0.5, 0.5}))[0] == 1;
    return {wrong == 0 && tie, std::to_string(checked) + " probability pairs, " +
                                   std::to_string(wrong) + " mismatches, tie (0.5, 0.5) -> " +
                                   (tie ? "1" : "0")};
}

Verdict parameter_accounting() {
    hybrid::HybridModel h{hybrid::HybridConfig{}};
    const auto shape = nn::output_shape(h.backbone(), {7, 1, 32, 32});
    bool laws = true;
    for (unsigned n = 1; n <= 6; ++n) {
        for (unsigned r = 1; r <= 3; ++r) {
            laws = laws && real_amplitudes(n, r).weight_params().size() == n * (r + 1);
            std::string out;
            run_cli({"inspect", "--qubits", std::to_string(n), "--ansatz-reps", std::to_string(r),
                     "--classes", "2"},
                    &out);
            laws = laws && out.find("quantum weights: " + std::to_string(n * (r + 1)) + "\n") !=
                               std::string::npos;
        }
    }
    std::string out;
    run_cli({"inspect"}, &out);
    const bool two = h.qnn().num_weights() == 2 &&
                     out.find("quantum weights: 2\n") != std::string::npos;
    return {two && shape == nn::Shape{7, 1} && laws,
            "default head " + std::to_string(h.qnn().num_weights()) +
                " quantum weights, backbone output " + nn::shape_string(shape) +
                " (B=7), n(r+1) law for n<=6, r<=3 " + (laws ? "holds" : "violated")};
}

struct Experiment {
    fs::path dir;
    double hybrid_acc = 0, classical_acc = 0, seconds = 0;
    std::string compare_out;
    bool ran = false;
};

double best_val(const fs::path &metrics) {
    std::ifstream in(metrics);
    double best = -1;
    for (std::string line; std::getline(in, line);) {
        best = std::max(best, json::parse(line).at("val_accuracy").get<double>());
    }
    return best;
}

Verdict desk_experiment(Experiment &ex) {
    const auto t0 = Clock::now();
    const auto p = [&](const char *f) { return (ex.dir / f).string(); };
    bool ok = run_cli({"generate", "--kind", "chirp", "--n", "1000", "--size", "32",
                       "--noise-std", "0.1", "--seed", "2026", "--out", p("chirp.hqds")}) == 0;
    ok = ok && run_cli({"generate", "--kind", "chirp", "--n", "250", "--size", "32",
                        "--noise-std", "0.1", "--seed", "2027", "--out", p("heldout.hqds")}) == 0;
    ok = ok && run_cli({"train", "--kind", "hybrid", "--dataset", p("chirp.hqds"), "--epochs",
                        "30", "--seed", "1", "--checkpoint", p("hybrid.hqnn"), "--metrics",
                        p("hybrid.jsonl")}) == 0;
    ok = ok && run_cli({"train", "--kind", "classical", "--hidden-units", "8", "--dataset",
                        p("chirp.hqds"), "--epochs", "30", "--seed", "1", "--checkpoint",
                        p("classical.hqnn"), "--metrics", p("classical.jsonl")}) == 0;
    ex.seconds = seconds_since(t0);
    if (!ok) {
        return {false, "experiment commands failed"};
    }
    ok = run_cli({"compare", "--model-a", p("hybrid.hqnn"), "--model-b", p("classical.hqnn"),
                  "--metrics-a", p("hybrid.jsonl"), "--metrics-b", p("classical.jsonl"),
                  "--dataset", p("heldout.hqds")},
                 &ex.compare_out) == 0;
    ex.ran = ok;
    ex.hybrid_acc = best_val(p("hybrid.jsonl"));
    ex.classical_acc = best_val(p("classical.jsonl"));
    bool metrics = ok;
    for (const char *row : {"Accuracy (%)", "Runtime (sec)", "Model Size (bytes)"}) {
        metrics = metrics && ex.compare_out.find(row) != std::string::npos;
    }
    const auto hs = fs::file_size(p("hybrid.hqnn"));
    const auto cs = fs::file_size(p("classical.hqnn"));
    return {metrics && ex.hybrid_acc >= 0.95 && ex.classical_acc >= 0.95 && ex.seconds < 600 &&
                hs <= cs,
            "best val accuracy hybrid " + fixed(ex.hybrid_acc, 4) + ", classical " +
                fixed(ex.classical_acc, 4) + "; total " + fixed(ex.seconds, 1) +
                " s; checkpoints " + std::to_string(hs) + " vs " + std::to_string(cs) +
                " bytes; compare table " + (metrics ? "complete" : "incomplete")};
}

Verdict determinism(const Experiment &ex) {
    const auto p = [&](const std::string &f) { return (ex.dir / f).string(); };
    bool ok = run_cli({"generate", "--n", "150", "--size", "32", "--seed", "5", "--out",
                       p("small.hqds")}) == 0;
    std::vector<std::vector<json>> streams;
    for (const char *tag : {"r1", "r2"}) {
        ok = ok && run_cli({"train", "--kind", "hybrid", "--dataset", p("small.hqds"), "--epochs",
                            "3", "--seed", "9", "--checkpoint", p(std::string(tag) + ".hqnn"),
                            "--metrics", p(std::string(tag) + ".jsonl")}) == 0;
        std::ifstream in(p(std::string(tag) + ".jsonl"));
        std::vector<json> rows;
        for (std::string line; std::getline(in, line);) {
            auto j = json::parse(line);
            j.erase("elapsed_seconds");
            rows.push_back(j);
        }
        streams.push_back(rows);
    }
    const bool same_stream = ok && streams[0] == streams[1] && streams[0].size() == 3;
    const bool same_ckpt =
        ok && io::read_file(p("r1.hqnn")) == io::read_file(p("r2.hqnn"));

    // Round trip: load then encode reproduces the file byte for byte.
    bool round_trip = false, reproduces = false;
    if (ex.ran) {
        const auto bytes = io::read_file(ex.dir / "hybrid.hqnn");
        auto model = hybrid::decode_checkpoint(bytes);
        round_trip = hybrid::encode_checkpoint(*model) == bytes;
        // Rebuild the validation split exactly as training did.
        const auto ds = data::read_dataset(ex.dir / "chirp.hqds");
        const auto [train, val] = data::split(ds, 0.2, 1);
        reproduces = hybrid::evaluate(*model, val).accuracy == ex.hybrid_acc;
    }
    return {same_stream && same_ckpt && round_trip && reproduces,
            std::string("metric streams ") + (same_stream ? "identical" : "differ") +
                ", checkpoints " + (same_ckpt ? "identical" : "differ") + ", round trip " +
                (round_trip ? "bit-exact" : "mismatch") + ", reloaded best " +
                (reproduces ? "reproduces" : "does not reproduce") + " val accuracy"};
}

Verdict sampling() {
    const auto plus = apply_gate(init_zero(1), Gate::h(0));
    const std::uint64_t shots = 100000;
    const double bound = 3 * std::sqrt(0.25 / static_cast<double>(shots));
    int inside = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto counts = sample_counts(plus, shots, seed);
        const double f0 = static_cast<double>(counts[0]) / static_cast<double>(shots);
        inside += std::abs(f0 - 0.5) <= bound;
    }
    return {inside >= 99, std::to_string(inside) + "/100 seeds inside 0.5 +/- " + sci(bound)};
}

} // namespace

int main() {
    Experiment ex;
    ex.dir = fs::temp_directory_path() / "hqnn_acceptance";
    fs::remove_all(ex.dir);
    fs::create_directories(ex.dir);

    struct Criterion {
        const char *name;
        std::function<Verdict()> check;
    };
    const std::vector<Criterion> criteria = {
        {"quantum oracle equivalence", quantum_oracle},
        {"closed-form head", closed_form_head},
        {"parameter-shift fidelity", shift_rule},
        {"classical gradient fidelity", classical_gradients},
        {"decision rule", decision_rule},
        {"parameter accounting", parameter_accounting},
        {"desk-scale experiment", [&] { return desk_experiment(ex); }},
        {"determinism and checkpointing", [&] { return determinism(ex); }},
        {"sampling statistics", sampling},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].check();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ". " << criteria[i].name
                  << ": " << v.detail << std::endl;
    }
    if (ex.ran) {
        std::cout << "\ncompare output:\n" << ex.compare_out;
    }
    fs::remove_all(ex.dir);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
