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

#include "hqnn/hybrid/checkpoint.hpp"

#include <map>
#include <optional>
#include <string>

#include "hqnn/binary_io.hpp"
#include "hqnn/error.hpp"

namespace hqnn::hybrid {

namespace {

constexpr char kMagic[] = "HQNN";
constexpr std::uint32_t kVersion = 1;

struct Record {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<double> values;
    std::size_t offset = 0;
};

void write_record(io::ByteWriter &w, const std::string &name,
                  const std::vector<std::uint32_t> &dims, std::span<const double> values) {
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.raw(name);
    w.u8(static_cast<std::uint8_t>(dims.size()));
    for (std::uint32_t d : dims) {
        w.u32(d);
    }
    for (double v : values) {
        w.f64(v);
    }
}

std::vector<Record> collect_records(const Model &model) {
    std::vector<Record> out;
    auto add_stack = [&](const nn::LayerStack &stack, const std::string &prefix) {
        for (std::size_t i = 0; i < stack.size(); ++i) {
            nn::Layer &layer = *stack[i];
            const std::string base =
                prefix + "." + std::to_string(i) + "." + nn::layer_tag(layer.kind());
            const auto hyper = layer.hyperparameters();
            out.push_back({base + ".config", {static_cast<std::uint32_t>(hyper.size())}, hyper});
            for (const nn::ParamRef &p : layer.params()) {
                std::vector<std::uint32_t> dims(p.value->shape.begin(), p.value->shape.end());
                out.push_back({base + "." + p.name, dims, p.value->data});
            }
        }
    };
    add_stack(model.backbone(), "backbone");
    if (const auto *h = dynamic_cast<const HybridModel *>(&model)) {
        const auto w = h->qnn_weights();
        out.push_back({"qnn.weights", {static_cast<std::uint32_t>(w.size())},
                       std::vector<double>(w.begin(), w.end())});
    } else if (const auto *c = dynamic_cast<const ClassicalModel *>(&model)) {
        add_stack(c->head(), "head");
    }
    return out;
}

std::optional<nn::LayerKind> kind_from_tag(const std::string &tag) {
    for (auto k : {nn::LayerKind::Dense, nn::LayerKind::Conv2D, nn::LayerKind::ReLU,
                   nn::LayerKind::MaxPool2D, nn::LayerKind::GlobalAvgPool,
                   nn::LayerKind::Flatten, nn::LayerKind::Sigmoid}) {
        if (tag == nn::layer_tag(k)) {
            return k;
        }
    }
    return std::nullopt;
}

[[noreturn]] void fail_at(const Record &r, const std::string &msg) {
    throw FormatError("tensor '" + r.name + "' at offset " + std::to_string(r.offset) +
                      ": " + msg);
}

/// Rebuilds `<prefix>.*` layers from their records and marks them consumed.
nn::LayerStack rebuild_stack(const std::vector<Record> &records, std::vector<bool> &used,
                             const std::string &prefix) {
    struct Entry {
        const Record *config = nullptr;
        std::string tag;
        std::map<std::string, std::size_t> params; // field -> record index
    };
    std::map<std::size_t, Entry> layers;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const Record &rec = records[r];
        if (rec.name.rfind(prefix + ".", 0) != 0) {
            continue;
        }
        // <prefix>.<index>.<tag>.<field>
        const std::string rest = rec.name.substr(prefix.size() + 1);
        const auto d1 = rest.find('.');
        const auto d2 = d1 == std::string::npos ? d1 : rest.find('.', d1 + 1);
        if (d2 == std::string::npos || rest.find('.', d2 + 1) != std::string::npos) {
            fail_at(rec, "malformed layer tensor name");
        }
        std::size_t index = 0;
        try {
            std::size_t pos = 0;
            index = std::stoul(rest.substr(0, d1), &pos);
            if (pos != d1) {
                fail_at(rec, "malformed layer index");
            }
        } catch (const std::logic_error &) {
            fail_at(rec, "malformed layer index");
        }
        const std::string tag = rest.substr(d1 + 1, d2 - d1 - 1);
        const std::string field = rest.substr(d2 + 1);
        Entry &e = layers[index];
        if (!e.tag.empty() && e.tag != tag) {
            fail_at(rec, "layer tag conflicts with '" + e.tag + "'");
        }
        e.tag = tag;
        if (field == "config") {
            if (e.config != nullptr) {
                fail_at(rec, "duplicate layer config");
            }
            e.config = &rec;
        } else if (!e.params.emplace(field, r).second) {
            fail_at(rec, "duplicate tensor");
        }
        used[r] = true;
    }

    nn::LayerStack stack;
    std::size_t expected = 0;
    for (auto &[index, e] : layers) {
        if (index != expected++ || e.config == nullptr) {
            throw FormatError(prefix + " layer " + std::to_string(index) +
                              " is missing or has no config tensor");
        }
        const auto kind = kind_from_tag(e.tag);
        if (!kind) {
            fail_at(*e.config, "unknown layer tag '" + e.tag + "'");
        }
        nn::LayerPtr layer;
        try {
            layer = nn::make_layer(*kind, e.config->values);
        } catch (const Error &err) {
            fail_at(*e.config, err.what());
        }
        auto params = layer->params();
        if (params.size() != e.params.size()) {
            fail_at(*e.config, "expected " + std::to_string(params.size()) +
                                   " parameter tensor(s), found " +
                                   std::to_string(e.params.size()));
        }
        for (nn::ParamRef &p : params) {
            auto it = e.params.find(p.name);
            if (it == e.params.end()) {
                fail_at(*e.config, "missing '" + p.name + "' tensor");
            }
            const Record &rec = records[it->second];
            const nn::Shape shape(rec.dims.begin(), rec.dims.end());
            if (shape != p.value->shape) {
                fail_at(rec, "shape " + nn::shape_string(shape) + " does not match " +
                                 nn::shape_string(p.value->shape));
            }
            p.value->data = rec.values;
        }
        stack.push_back(std::move(layer));
    }
    return stack;
}

} // namespace

std::vector<std::uint8_t> encode_checkpoint(const Model &model) {
    io::ByteWriter w;
    w.raw(std::string_view(kMagic, 4));
    w.u32(kVersion);
    w.u8(static_cast<std::uint8_t>(model.kind()));
    if (const auto *h = dynamic_cast<const HybridModel *>(&model)) {
        w.u8(static_cast<std::uint8_t>(h->qnn().num_qubits()));
        w.u8(static_cast<std::uint8_t>(h->feature_map_reps()));
        w.u8(static_cast<std::uint8_t>(h->ansatz_reps()));
        w.u16(static_cast<std::uint16_t>(h->num_classes()));
    }
    const auto records = collect_records(model);
    w.u32(static_cast<std::uint32_t>(records.size()));
    for (const Record &r : records) {
        write_record(w, r.name, r.dims, r.values);
    }
    return w.take();
}

std::unique_ptr<Model> decode_checkpoint(std::span<const std::uint8_t> bytes) {
    io::ByteReader r(bytes);
    if (r.raw(4) != std::string_view(kMagic, 4)) {
        throw FormatError("bad checkpoint magic at offset 0 (expected HQNN)");
    }
    const std::size_t version_at = r.offset();
    if (const std::uint32_t v = r.u32(); v != kVersion) {
        throw FormatError("unsupported checkpoint version " + std::to_string(v) +
                          " at offset " + std::to_string(version_at));
    }
    const std::size_t kind_at = r.offset();
    const std::uint8_t kind = r.u8();
    if (kind > 1) {
        throw FormatError("unknown model kind " + std::to_string(kind) + " at offset " +
                          std::to_string(kind_at));
    }
    unsigned qubits = 0, fm_reps = 0, ansatz_reps = 0, classes = 0;
    if (kind == 1) {
        qubits = r.u8();
        fm_reps = r.u8();
        ansatz_reps = r.u8();
        classes = r.u16();
    }
    const std::uint32_t count = r.u32();
    std::vector<Record> records;
    for (std::uint32_t t = 0; t < count; ++t) {
        Record rec;
        rec.offset = r.offset();
        rec.name = r.raw(r.u16());
        const std::uint8_t rank = r.u8();
        std::size_t n = 1;
        for (std::uint8_t i = 0; i < rank; ++i) {
            rec.dims.push_back(r.u32());
            n *= rec.dims.back();
        }
        if (n > r.remaining() / 8) {
            throw FormatError("tensor '" + rec.name + "' at offset " +
                              std::to_string(rec.offset) + " declares " +
                              std::to_string(n) + " values but only " +
                              std::to_string(r.remaining()) + " byte(s) remain");
        }
        rec.values.resize(n);
        for (double &v : rec.values) {
            v = r.f64();
        }
        records.push_back(std::move(rec));
    }
    if (r.remaining() != 0) {
        throw FormatError(std::to_string(r.remaining()) + " trailing byte(s) at offset " +
                          std::to_string(r.offset()));
    }

    std::vector<bool> used(records.size(), false);
    nn::LayerStack backbone = rebuild_stack(records, used, "backbone");
    std::unique_ptr<Model> model;
    try {
        if (kind == 1) {
            std::optional<std::vector<double>> weights;
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (records[i].name == "qnn.weights") {
                    if (weights) {
                        fail_at(records[i], "duplicate tensor");
                    }
                    if (records[i].dims.size() != 1) {
                        fail_at(records[i], "expected a rank-1 tensor");
                    }
                    weights = records[i].values;
                    used[i] = true;
                }
            }
            if (!weights) {
                throw FormatError("hybrid checkpoint has no 'qnn.weights' tensor");
            }
            model = std::make_unique<HybridModel>(std::move(backbone), qubits, fm_reps,
                                                  ansatz_reps, classes, std::move(*weights));
        } else {
            nn::LayerStack head = rebuild_stack(records, used, "head");
            model = std::make_unique<ClassicalModel>(std::move(backbone), std::move(head));
        }
    } catch (const FormatError &) {
        throw;
    } catch (const Error &e) {
        throw FormatError(std::string("inconsistent checkpoint: ") + e.what());
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!used[i]) {
            fail_at(records[i], "unexpected tensor");
        }
    }
    return model;
}

void save_checkpoint(const Model &model, const std::filesystem::path &path) {
    io::write_file(path, encode_checkpoint(model));
}

std::unique_ptr<Model> load_checkpoint(const std::filesystem::path &path) {
    return decode_checkpoint(io::read_file(path));
}

std::size_t model_size_bytes(const Model &model) { return encode_checkpoint(model).size(); }

} // namespace hqnn::hybrid
