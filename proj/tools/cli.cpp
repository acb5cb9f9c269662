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

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hqnn/binary_io.hpp"
#include "hqnn/circuits.hpp"
#include "hqnn/data.hpp"
#include "hqnn/error.hpp"
#include "hqnn/gradcheck.hpp"
#include "hqnn/hybrid/checkpoint.hpp"
#include "hqnn/hybrid/model.hpp"
#include "hqnn/hybrid/train.hpp"
#include "hqnn/simd/kernels.hpp"

namespace hqnn::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class VerificationFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class KeyType { String, Integer, Real, Bool };

struct Key {
    std::string name;
    KeyType type;
    json fallback; // null: no default
    std::string help;
};

const std::vector<Key> kGlobalKeys = {
    {"seed", KeyType::Integer, 0, "RNG seed"},
    {"out", KeyType::String, nullptr, "output path"},
    {"force", KeyType::Bool, false, "overwrite existing output files"},
};

const std::map<std::string, std::vector<Key>> kCommandKeys = {
    {"generate",
     {
         {"kind", KeyType::String, "chirp", "generator: chirp | blobs"},
         {"n", KeyType::Integer, 1000, "samples per class"},
         {"size", KeyType::Integer, 32, "chirp image side length"},
         {"noise_std", KeyType::Real, 0.1, "chirp background noise std"},
         {"dim", KeyType::Integer, 2, "blob dimension"},
         {"separation", KeyType::Real, 6.0, "blob mean distance"},
     }},
    {"train",
     {
         {"kind", KeyType::String, "hybrid", "model: hybrid | classical"},
         {"dataset", KeyType::String, nullptr, "HQDS dataset path"},
         {"epochs", KeyType::Integer, 30, "training epochs"},
         {"batch_size", KeyType::Integer, 32, "mini-batch size"},
         {"lr", KeyType::Real, 1e-3, "learning rate"},
         {"optimizer", KeyType::String, "adam", "adam | sgd"},
         {"qubits", KeyType::Integer, 1, "QNN qubits (hybrid)"},
         {"feature_map_reps", KeyType::Integer, 1, "Z feature map repetitions"},
         {"ansatz_reps", KeyType::Integer, 1, "RealAmplitudes repetitions"},
         {"classes", KeyType::Integer, 2, "class count (hybrid)"},
         {"hidden_units", KeyType::Integer, 0, "hidden dense width (classical)"},
         {"val_fraction", KeyType::Real, 0.2, "validation split fraction"},
         {"checkpoint", KeyType::String, "model.hqnn", "best-checkpoint path"},
         {"metrics", KeyType::String, "metrics.jsonl", "JSON-lines metrics path"},
     }},
    {"evaluate",
     {
         {"checkpoint", KeyType::String, nullptr, "HQNN checkpoint"},
         {"dataset", KeyType::String, nullptr, "HQDS dataset"},
     }},
    {"compare",
     {
         {"model_a", KeyType::String, nullptr, "first checkpoint"},
         {"model_b", KeyType::String, nullptr, "second checkpoint"},
         {"metrics_a", KeyType::String, nullptr, "training metrics of model_a"},
         {"metrics_b", KeyType::String, nullptr, "training metrics of model_b"},
         {"dataset", KeyType::String, nullptr, "evaluation dataset"},
     }},
    {"gradcheck",
     {
         {"trials", KeyType::Integer, 20, "random instances per quantum component"},
         {"inject_fault", KeyType::String, "", "self-test fault: ry-sign"},
     }},
    {"inspect",
     {
         {"checkpoint", KeyType::String, nullptr, "checkpoint to describe"},
         {"kind", KeyType::String, "hybrid", "hybrid | classical"},
         {"qubits", KeyType::Integer, 1, "QNN qubits"},
         {"feature_map_reps", KeyType::Integer, 1, "Z feature map repetitions"},
         {"ansatz_reps", KeyType::Integer, 1, "RealAmplitudes repetitions"},
         {"classes", KeyType::Integer, 2, "class count"},
         {"hidden_units", KeyType::Integer, 0, "hidden dense width (classical)"},
         {"size", KeyType::Integer, 32, "input image side length"},
     }},
};

const char *type_name(KeyType t) {
    switch (t) {
    case KeyType::String:
        return "a string";
    case KeyType::Integer:
        return "an integer";
    case KeyType::Real:
        return "a number";
    case KeyType::Bool:
        return "a boolean";
    }
    return "?";
}

bool type_matches(KeyType t, const json &v) {
    switch (t) {
    case KeyType::String:
        return v.is_string();
    case KeyType::Integer:
        return v.is_number_integer();
    case KeyType::Real:
        return v.is_number();
    case KeyType::Bool:
        return v.is_boolean();
    }
    return false;
}

json parse_flag_value(const Key &k, const std::string &s) {
    try {
        std::size_t pos = 0;
        switch (k.type) {
        case KeyType::String:
            return s;
        case KeyType::Integer: {
            const long long v = std::stoll(s, &pos);
            if (pos == s.size()) {
                return v;
            }
            break;
        }
        case KeyType::Real: {
            const double v = std::stod(s, &pos);
            if (pos == s.size()) {
                return v;
            }
            break;
        }
        case KeyType::Bool:
            return true;
        }
    } catch (const std::logic_error &) {
    }
    throw UsageError("--" + k.name + " expects " + type_name(k.type) + ", got '" + s + "'");
}

/// Resolved configuration: defaults, then the JSON file, then flags.
class Settings {
  public:
    Settings(std::vector<Key> keys, json values)
        : keys_(std::move(keys)), values_(std::move(values)) {}

    [[nodiscard]] bool has(const std::string &k) const {
        return values_.contains(k) && !values_[k].is_null();
    }

    [[nodiscard]] std::string str(const std::string &k) const {
        require(k);
        return values_[k].get<std::string>();
    }

    [[nodiscard]] long long integer(const std::string &k) const {
        require(k);
        return values_[k].get<long long>();
    }

    [[nodiscard]] std::size_t positive(const std::string &k) const {
        const long long v = integer(k);
        if (v < 1) {
            throw UsageError(k + " must be >= 1");
        }
        return static_cast<std::size_t>(v);
    }

    [[nodiscard]] double real(const std::string &k) const {
        require(k);
        return values_[k].get<double>();
    }

    [[nodiscard]] bool flag(const std::string &k) const {
        return has(k) && values_[k].get<bool>();
    }

    [[nodiscard]] std::uint64_t seed() const {
        return static_cast<std::uint64_t>(integer("seed"));
    }

  private:
    void require(const std::string &k) const {
        if (!has(k)) {
            throw UsageError("missing required setting '" + k + "'");
        }
    }

    std::vector<Key> keys_;
    json values_;
};

Settings resolve(const std::string &command, const std::string &config_path,
                 const std::map<std::string, std::pair<const Key *, CLI::Option *>> &flags,
                 const std::map<std::string, std::string> &raw) {
    std::vector<Key> keys = kGlobalKeys;
    const auto &cmd_keys = kCommandKeys.at(command);
    keys.insert(keys.end(), cmd_keys.begin(), cmd_keys.end());

    json values = json::object();
    for (const Key &k : keys) {
        values[k.name] = k.fallback;
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw UsageError("cannot read config file " + config_path);
        }
        json file;
        try {
            file = json::parse(in);
        } catch (const json::parse_error &e) {
            throw UsageError("config file " + config_path + ": " + e.what());
        }
        if (!file.is_object()) {
            throw UsageError("config file must hold a JSON object");
        }
        for (const auto &[name, v] : file.items()) {
            auto it = std::find_if(keys.begin(), keys.end(),
                                   [&](const Key &k) { return k.name == name; });
            if (it == keys.end()) {
                throw UsageError("unknown config key '" + name + "' for " + command);
            }
            if (!type_matches(it->type, v)) {
                throw UsageError("config key '" + name + "' must be " + type_name(it->type));
            }
            values[name] = v;
        }
    }
    for (const auto &[name, entry] : flags) {
        if (entry.second->count() > 0) {
            values[name] = entry.first->type == KeyType::Bool
                               ? json(true)
                               : parse_flag_value(*entry.first, raw.at(name));
        }
    }
    return {std::move(keys), std::move(values)};
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

/// Left-aligns by code points so multi-byte glyphs such as × line up.
std::string pad(const std::string &s, std::size_t width) {
    std::size_t glyphs = 0;
    for (unsigned char c : s) {
        glyphs += (c & 0xC0) != 0x80;
    }
    return glyphs >= width ? s : s + std::string(width - glyphs, ' ');
}

void ensure_writable(const fs::path &path, bool force) {
    if (fs::exists(path) && !force) {
        throw UsageError(path.string() + " exists; pass --force to overwrite");
    }
}

nn::BackboneConfig backbone_for(const nn::Shape &sample_shape, std::uint64_t seed) {
    if (sample_shape.size() == 3) {
        nn::BackboneConfig bc;
        bc.input_shape = sample_shape;
        bc.seed = seed;
        return bc;
    }
    if (sample_shape.size() == 1) {
        return nn::BackboneConfig::identity(sample_shape, 1, seed);
    }
    throw UsageError("datasets must hold [N×D] vectors or [N×C×H×W] images");
}

std::unique_ptr<hybrid::Model> build_model(const Settings &s, const nn::Shape &sample_shape) {
    const std::string kind = s.str("kind");
    const nn::BackboneConfig bc = backbone_for(sample_shape, s.seed());
    if (kind == "hybrid") {
        hybrid::HybridConfig hc;
        hc.backbone = bc;
        hc.qubits = static_cast<unsigned>(s.positive("qubits"));
        hc.feature_map_reps = static_cast<unsigned>(s.positive("feature_map_reps"));
        hc.ansatz_reps = static_cast<unsigned>(s.positive("ansatz_reps"));
        hc.num_classes = s.positive("classes");
        hc.seed = s.seed();
        return std::make_unique<hybrid::HybridModel>(hc);
    }
    if (kind == "classical") {
        hybrid::ClassicalConfig cc;
        cc.backbone = bc;
        cc.hidden_units = static_cast<std::size_t>(s.integer("hidden_units"));
        cc.seed = s.seed();
        return std::make_unique<hybrid::ClassicalModel>(cc);
    }
    throw UsageError("unknown model kind '" + kind + "' (hybrid|classical)");
}

data::Dataset load_dataset(const std::string &path) {
    if (!fs::exists(path)) {
        throw UsageError("dataset " + path + " does not exist");
    }
    return data::read_dataset(path);
}

// ---------------------------------------------------------------- commands

int cmd_generate(const Settings &s, std::ostream &out) {
    const std::string kind = s.str("kind");
    const fs::path path = s.str("out");
    data::Dataset ds;
    if (kind == "chirp") {
        ds = data::gen_chirp_images(s.positive("n"), s.positive("size"), s.real("noise_std"),
                                    s.seed());
    } else if (kind == "blobs") {
        ds = data::gen_blobs(s.positive("n"), s.positive("dim"), s.real("separation"),
                             s.seed());
    } else {
        throw UsageError("unknown generator kind '" + kind + "' (chirp|blobs)");
    }
    ensure_writable(path, s.flag("force"));
    data::write_dataset(ds, path);
    std::vector<std::size_t> counts(ds.num_classes, 0);
    for (auto l : ds.labels) {
        ++counts[l];
    }
    out << "wrote " << path.string() << ": N=" << ds.size()
        << " shape=" << nn::shape_string(ds.samples.shape) << " classes=";
    for (std::size_t c = 0; c < counts.size(); ++c) {
        out << (c ? "/" : "") << counts[c];
    }
    out << '\n';
    return kOk;
}

int cmd_train(const Settings &s, std::ostream &out) {
    const data::Dataset ds = load_dataset(s.str("dataset"));
    auto [train, val] = data::split(ds, s.real("val_fraction"), s.seed());
    auto model = build_model(s, ds.sample_shape());

    hybrid::TrainConfig tc;
    tc.epochs = s.positive("epochs");
    tc.batch_size = s.positive("batch_size");
    tc.learning_rate = s.real("lr");
    tc.optimizer = hybrid::parse_optimizer(s.str("optimizer"));
    tc.seed = s.seed();
    tc.checkpoint_path = s.has("out") ? s.str("out") : s.str("checkpoint");

    const fs::path metrics_path = s.str("metrics");
    std::ofstream metrics(metrics_path, std::ios::trunc);
    if (!metrics) {
        throw IoError("cannot open " + metrics_path.string() + " for writing");
    }
    out << "training " << hybrid::model_kind_name(model->kind()) << " model ("
        << model->num_parameters() << " parameters) on " << train.size() << " samples, "
        << val.size() << " held out; kernels: " << simd::active().name << '\n';
    const auto result = hybrid::fit(*model, train, val, tc, [&](const hybrid::EpochRecord &r) {
        metrics << hybrid::to_json_line(r) << '\n' << std::flush;
        out << "epoch " << r.epoch << "  train_loss " << fixed(r.train_loss, 4) << "  val_loss "
            << fixed(r.val_loss, 4) << "  val_acc " << fixed(r.val_accuracy, 4) << "  t "
            << fixed(r.elapsed_seconds, 1) << "s\n";
    });
    out << "best epoch " << result.best_epoch << ": val_accuracy "
        << fixed(result.best_val_accuracy, 4) << ", checkpoint " << tc.checkpoint_path.string()
        << ", " << fixed(result.train_seconds, 2) << "s\n";
    return kOk;
}

json metrics_json(const hybrid::EvalMetrics &m) {
    return {{"accuracy", m.accuracy},
            {"loss", m.loss},
            {"elapsed_seconds", m.elapsed_seconds},
            {"model_size_bytes", m.model_size_bytes}};
}

hybrid::EvalMetrics evaluate_checkpoint(const std::string &ckpt, const data::Dataset &ds,
                                        hybrid::ModelKind *kind = nullptr) {
    if (!fs::exists(ckpt)) {
        throw UsageError("checkpoint " + ckpt + " does not exist");
    }
    auto model = hybrid::load_checkpoint(ckpt);
    if (kind != nullptr) {
        *kind = model->kind();
    }
    try {
        return hybrid::evaluate(*model, ds);
    } catch (const ShapeError &e) {
        throw UsageError("checkpoint " + ckpt + " does not fit the dataset: " + e.what());
    } catch (const ConfigError &e) {
        throw UsageError("checkpoint " + ckpt + " does not fit the dataset: " + e.what());
    } catch (const DataError &e) {
        throw UsageError("checkpoint " + ckpt + " does not fit the dataset: " + e.what());
    }
}

void write_json_output(const Settings &s, const json &doc) {
    if (s.has("out")) {
        const fs::path path = s.str("out");
        ensure_writable(path, s.flag("force"));
        std::ofstream f(path, std::ios::trunc);
        if (!f) {
            throw IoError("cannot open " + path.string() + " for writing");
        }
        f << doc.dump(2) << '\n';
    }
}

int cmd_evaluate(const Settings &s, std::ostream &out) {
    const data::Dataset ds = load_dataset(s.str("dataset"));
    const json doc = metrics_json(evaluate_checkpoint(s.str("checkpoint"), ds));
    out << doc.dump(2) << '\n';
    write_json_output(s, doc);
    return kOk;
}

/// Final cumulative elapsed_seconds of a JSON-lines metrics log.
double training_runtime(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read metrics log " + path);
    }
    std::string line, last;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            last = line;
        }
    }
    try {
        return json::parse(last).at("elapsed_seconds").get<double>();
    } catch (const json::exception &) {
        throw UsageError("metrics log " + path + " has no elapsed_seconds record");
    }
}

int cmd_compare(const Settings &s, std::ostream &out) {
    const data::Dataset ds = load_dataset(s.str("dataset"));
    struct Column {
        std::string label, checkpoint, runtime_source;
        hybrid::ModelKind kind;
        std::string accuracy, runtime, size;
    };
    std::vector<Column> cols;
    // Byte-identical checkpoints share one evaluation so their columns match.
    std::map<std::vector<std::uint8_t>, std::pair<hybrid::EvalMetrics, hybrid::ModelKind>> seen;
    for (const char *side : {"a", "b"}) {
        Column c;
        c.checkpoint = s.str(std::string("model_") + side);
        if (!fs::exists(c.checkpoint)) {
            throw UsageError("checkpoint " + c.checkpoint + " does not exist");
        }
        auto bytes = io::read_file(c.checkpoint);
        auto hit = seen.find(bytes);
        if (hit == seen.end()) {
            hybrid::ModelKind kind{};
            const hybrid::EvalMetrics em = evaluate_checkpoint(c.checkpoint, ds, &kind);
            hit = seen.emplace(std::move(bytes), std::pair{em, kind}).first;
        }
        const hybrid::EvalMetrics m = hit->second.first;
        c.kind = hit->second.second;
        double runtime = m.elapsed_seconds;
        c.runtime_source = "evaluation";
        if (const std::string key = std::string("metrics_") + side; s.has(key)) {
            runtime = training_runtime(s.str(key));
            c.runtime_source = "training";
        }
        c.label = std::string(hybrid::model_kind_name(c.kind)) + " (" + side + ")";
        c.accuracy = fixed(100.0 * m.accuracy, 2);
        c.runtime = fixed(runtime, 2);
        c.size = std::to_string(m.model_size_bytes);
        cols.push_back(c);
    }

    const std::vector<std::pair<std::string, std::string Column::*>> rows = {
        {"Accuracy (%)", &Column::accuracy},
        {"Runtime (sec)", &Column::runtime},
        {"Model Size (bytes)", &Column::size},
    };
    out << std::left << std::setw(20) << "Metric";
    for (const auto &c : cols) {
        out << std::right << std::setw(18) << c.label;
    }
    out << '\n';
    for (const auto &[name, field] : rows) {
        out << std::left << std::setw(20) << name;
        for (const auto &c : cols) {
            out << std::right << std::setw(18) << c.*field;
        }
        out << '\n';
    }

    json models = json::array();
    for (const auto &c : cols) {
        models.push_back({{"label", c.label},
                          {"kind", hybrid::model_kind_name(c.kind)},
                          {"checkpoint", c.checkpoint},
                          {"accuracy_percent", std::stod(c.accuracy)},
                          {"runtime_sec", std::stod(c.runtime)},
                          {"runtime_source", c.runtime_source},
                          {"model_size_bytes", std::stoull(c.size)}});
    }
    const json doc = {{"dataset", s.str("dataset")}, {"models", models}};
    out << doc.dump(2) << '\n';
    write_json_output(s, doc);
    return kOk;
}

int cmd_gradcheck(const Settings &s, std::ostream &out) {
    gradcheck::Options opt;
    opt.seed = s.seed();
    opt.quantum_trials = s.positive("trials");
    const std::string fault = s.str("inject_fault");
    if (fault == "ry-sign") {
        opt.inject_ry_sign_error = true;
    } else if (!fault.empty()) {
        throw UsageError("unknown fault '" + fault + "' (ry-sign)");
    }
    const gradcheck::Report report = gradcheck::run(opt);
    out << std::left << std::setw(20) << "component" << std::setw(11) << "category"
        << std::right << std::setw(8) << "checks" << std::setw(14) << "max_abs"
        << std::setw(14) << "max_rel" << "  verdict\n";
    for (const auto &c : report.components) {
        std::ostringstream abs_err, rel_err;
        abs_err << std::scientific << std::setprecision(2) << c.max_abs_error;
        rel_err << std::scientific << std::setprecision(2) << c.max_rel_error;
        out << std::left << std::setw(20) << c.name << std::setw(11) << c.category
            << std::right << std::setw(8) << c.checks << std::setw(14) << abs_err.str()
            << std::setw(14) << rel_err.str() << "  " << (c.passed ? "PASS" : "FAIL") << '\n';
    }
    out << "tolerances: quantum abs " << gradcheck::kQuantumTolerance << ", classical rel "
        << gradcheck::kClassicalRelTolerance << '\n';
    if (!report.passed()) {
        std::string names;
        for (const auto &n : report.failing()) {
            names += (names.empty() ? "" : ", ") + n;
        }
        throw VerificationFailure("gradient check failed: " + names);
    }
    out << "all components within tolerance\n";
    return kOk;
}

void describe_stack(std::ostream &out, const nn::LayerStack &stack, const std::string &prefix,
                    std::optional<nn::Shape> &shape, std::size_t &total) {
    for (std::size_t i = 0; i < stack.size(); ++i) {
        nn::Layer &l = *stack[i];
        const std::size_t n = l.num_parameters();
        total += n;
        out << "  " << std::left << std::setw(14) << (prefix + "." + std::to_string(i))
            << std::setw(15) << nn::layer_name(l.kind());
        if (shape) {
            shape = l.output_shape(*shape);
            nn::Shape shown = *shape;
            out << pad("[B" + nn::shape_string(shown).substr(2), 18);
        }
        out << std::right << std::setw(8) << n << '\n';
    }
}

int cmd_inspect(const Settings &s, std::ostream &out) {
    std::unique_ptr<hybrid::Model> model;
    std::optional<nn::Shape> shape;
    if (s.has("checkpoint")) {
        if (!fs::exists(s.str("checkpoint"))) {
            throw UsageError("checkpoint " + s.str("checkpoint") + " does not exist");
        }
        model = hybrid::load_checkpoint(s.str("checkpoint"));
    } else {
        const std::size_t size = s.positive("size");
        model = build_model(s, {1, size, size});
        shape = nn::Shape{1, 1, size, size};
    }
    out << "model: " << hybrid::model_kind_name(model->kind()) << '\n';
    std::size_t classical = 0;
    std::size_t quantum = 0;
    out << "classical layers:\n";
    describe_stack(out, model->backbone(), "backbone", shape, classical);
    if (const auto *h = dynamic_cast<const hybrid::HybridModel *>(model.get())) {
        const SamplerQnn &q = h->qnn();
        quantum = q.num_weights();
        out << "quantum circuit (" << q.num_qubits() << " qubit" << (q.num_qubits() > 1 ? "s" : "")
            << ", " << q.output_dim() << " outcomes -> " << h->num_classes() << " classes):\n";
        std::istringstream lines(render(q.circuit()));
        for (std::string line; std::getline(lines, line);) {
            out << "  " << line << '\n';
        }
        out << "quantum inputs: " << q.num_inputs() << '\n';
    } else if (const auto *c = dynamic_cast<const hybrid::ClassicalModel *>(model.get())) {
        out << "classical head:\n";
        describe_stack(out, c->head(), "head", shape, classical);
    }
    out << "quantum weights: " << quantum << '\n';
    out << "classical parameters: " << classical << '\n';
    out << "total trainable parameters: " << classical + quantum << '\n';
    return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Hybrid quantum-classical classifier toolkit", "hqnn"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file with flat keys");

    std::map<std::string, std::string> raw;
    std::map<std::string, std::map<std::string, std::pair<const Key *, CLI::Option *>>> flags;
    for (const Key &k : kGlobalKeys) {
        for (const auto &[cmd, _] : kCommandKeys) {
            (void)_;
            flags[cmd];
        }
        CLI::Option *opt = k.type == KeyType::Bool
                               ? app.add_flag("--" + k.name, k.help)
                               : app.add_option("--" + k.name, raw[k.name], k.help);
        for (auto &[cmd, m] : flags) {
            m[k.name] = {&k, opt};
        }
    }
    std::map<std::string, CLI::App *> subs;
    std::map<std::string, std::map<std::string, std::string>> sub_raw;
    for (const auto &[cmd, keys] : kCommandKeys) {
        CLI::App *sub = app.add_subcommand(cmd);
        sub->fallthrough();
        subs[cmd] = sub;
        for (const Key &k : keys) {
            std::string names = "--" + k.name;
            if (k.name.find('_') != std::string::npos) {
                std::string dashed = k.name;
                std::replace(dashed.begin(), dashed.end(), '_', '-');
                names += ",--" + dashed;
            }
            CLI::Option *opt = k.type == KeyType::Bool
                                   ? sub->add_flag(names, k.help)
                                   : sub->add_option(names, sub_raw[cmd][k.name], k.help);
            flags[cmd][k.name] = {&k, opt};
        }
    }

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    std::string command;
    for (const auto &[cmd, sub] : subs) {
        if (sub->parsed()) {
            command = cmd;
        }
    }
    try {
        std::map<std::string, std::string> merged = raw;
        merged.insert(sub_raw[command].begin(), sub_raw[command].end());
        const Settings s = resolve(command, config_path, flags[command], merged);
        if (command == "generate") {
            return cmd_generate(s, out);
        }
        if (command == "train") {
            return cmd_train(s, out);
        }
        if (command == "evaluate") {
            return cmd_evaluate(s, out);
        }
        if (command == "compare") {
            return cmd_compare(s, out);
        }
        if (command == "gradcheck") {
            return cmd_gradcheck(s, out);
        }
        return cmd_inspect(s, out);
    } catch (const VerificationFailure &e) {
        err << e.what() << '\n';
        return kVerificationFailed;
    } catch (const NumericError &e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
}

} // namespace hqnn::cli
