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

#include "hqnn/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hqnn/binary_io.hpp"
#include "hqnn/error.hpp"

namespace hqnn::data {

namespace {

constexpr char kMagic[] = "HQDS";
constexpr std::uint32_t kVersion = 1;

double to_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

} // namespace

nn::Shape Dataset::sample_shape() const {
    return nn::Shape(samples.shape.begin() + 1, samples.shape.end());
}

void Dataset::validate() const {
    if (samples.shape.size() < 2) {
        throw DataError("dataset samples need rank >= 2, got " +
                        nn::shape_string(samples.shape));
    }
    if (samples.shape[0] != labels.size()) {
        throw DataError("dataset has " + std::to_string(samples.shape[0]) +
                        " samples but " + std::to_string(labels.size()) + " labels");
    }
    if (num_classes < 1) {
        throw DataError("dataset class count must be >= 1");
    }
    for (std::uint8_t l : labels) {
        if (l >= num_classes) {
            throw DataError("label " + std::to_string(l) + " >= class count " +
                            std::to_string(num_classes));
        }
    }
    for (double v : samples.data) {
        if (!std::isfinite(v)) {
            throw DataError("dataset contains a non-finite value");
        }
    }
}

Dataset gen_blobs(std::size_t n_per_class, std::size_t dim, double separation,
                  std::uint64_t seed) {
    if (n_per_class < 1 || dim < 1 || !(separation >= 0.0)) {
        throw ConfigError("gen_blobs: need n_per_class >= 1, dim >= 1, separation >= 0");
    }
    const std::size_t n = 2 * n_per_class;
    Dataset ds{nn::Tensor({n, dim}), std::vector<std::uint8_t>(n), "blobs", seed, 2};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto label = static_cast<std::uint8_t>(i % 2);
        ds.labels[i] = label;
        for (std::size_t d = 0; d < dim; ++d) {
            const double mean = d == 0 ? (label == 0 ? -0.5 : 0.5) * separation : 0.0;
            ds.samples[i * dim + d] = to_f32(mean + normal(rng));
        }
    }
    return ds;
}

Dataset gen_chirp_images(std::size_t n_per_class, std::size_t size, double noise_std,
                         std::uint64_t seed) {
    if (n_per_class < 1 || size < 16 || !(noise_std >= 0.0)) {
        throw ConfigError("gen_chirp_images: need n_per_class >= 1, size >= 16, "
                          "noise_std >= 0");
    }
    const std::size_t n = 2 * n_per_class;
    const std::size_t area = size * size;
    const auto S = static_cast<double>(size);
    Dataset ds{nn::Tensor({n, 1, size, size}), std::vector<std::uint8_t>(n), "chirp",
               seed, 2};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto label = static_cast<std::uint8_t>(i % 2);
        ds.labels[i] = label;
        double *img = ds.samples.data.data() + i * area;
        for (std::size_t p = 0; p < area; ++p) {
            img[p] = std::clamp(noise_std * noise(rng), 0.0, 1.0);
        }
        if (label == 1) {
            // row = start + slope·t + curve·t², t counted from the first column
            const double start = S * (0.2 + 0.6 * unit(rng));
            const double slope = -0.5 + unit(rng);
            const double curve = (-1.0 + 2.0 * unit(rng)) * 0.5 / S;
            const auto thickness = static_cast<std::ptrdiff_t>(1 + (unit(rng) < 0.5 ? 0 : 1));
            const auto first = static_cast<std::size_t>(unit(rng) * S / 4);
            const auto length = static_cast<std::size_t>(S / 2 + unit(rng) * S / 4);
            const std::size_t last = std::min(size, first + length);
            for (std::size_t col = first; col < last; ++col) {
                const double t = static_cast<double>(col - first);
                const auto row = static_cast<std::ptrdiff_t>(
                    std::lround(start + slope * t + curve * t * t));
                for (std::ptrdiff_t r = row; r < row + thickness; ++r) {
                    if (r >= 0 && r < static_cast<std::ptrdiff_t>(size)) {
                        img[static_cast<std::size_t>(r) * size + col] = 1.0;
                    }
                }
            }
        }
        for (std::size_t p = 0; p < area; ++p) {
            img[p] = to_f32(img[p]);
        }
    }
    return ds;
}

std::vector<std::uint8_t> encode_dataset(const Dataset &ds) {
    ds.validate();
    io::ByteWriter w;
    w.raw(std::string_view(kMagic, 4));
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(ds.size()));
    w.u16(ds.num_classes);
    const nn::Shape shape = ds.sample_shape();
    w.u8(static_cast<std::uint8_t>(shape.size()));
    for (std::size_t d : shape) {
        w.u32(static_cast<std::uint32_t>(d));
    }
    for (double v : ds.samples.data) {
        w.f32(static_cast<float>(v));
    }
    for (std::uint8_t l : ds.labels) {
        w.u8(l);
    }
    return w.take();
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
    io::ByteReader r(bytes);
    if (r.raw(4) != std::string_view(kMagic, 4)) {
        throw FormatError("bad dataset magic at offset 0 (expected HQDS)");
    }
    const std::size_t version_at = r.offset();
    if (const std::uint32_t v = r.u32(); v != kVersion) {
        throw FormatError("unsupported dataset version " + std::to_string(v) +
                          " at offset " + std::to_string(version_at));
    }
    const std::uint32_t n = r.u32();
    const std::size_t classes_at = r.offset();
    const std::uint16_t classes = r.u16();
    if (classes < 1) {
        throw FormatError("class count 0 at offset " + std::to_string(classes_at));
    }
    const std::uint8_t rank = r.u8();
    if (n < 1 || rank < 1) {
        throw FormatError("dataset needs >= 1 sample and rank >= 1");
    }
    nn::Shape shape{n};
    for (std::uint8_t i = 0; i < rank; ++i) {
        const std::size_t at = r.offset();
        const std::uint32_t d = r.u32();
        if (d == 0) {
            throw FormatError("zero extent at offset " + std::to_string(at));
        }
        shape.push_back(d);
    }
    const std::size_t count = nn::shape_size(shape);
    // Check the declared size before allocating for it.
    const std::size_t need = count * 4 + n;
    if (r.remaining() < need) {
        throw FormatError("truncated dataset at offset " + std::to_string(r.offset()) +
                          ": need " + std::to_string(need - r.remaining()) +
                          " more byte(s)");
    }
    Dataset ds;
    ds.samples = nn::Tensor(shape);
    for (std::size_t i = 0; i < count; ++i) {
        ds.samples[i] = static_cast<double>(r.f32());
    }
    ds.labels.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t at = r.offset();
        ds.labels[i] = r.u8();
        if (ds.labels[i] >= classes) {
            throw FormatError("label " + std::to_string(ds.labels[i]) +
                              " >= class count " + std::to_string(classes) +
                              " at offset " + std::to_string(at));
        }
    }
    if (r.remaining() != 0) {
        throw FormatError(std::to_string(r.remaining()) +
                          " trailing byte(s) at offset " + std::to_string(r.offset()));
    }
    ds.num_classes = classes;
    ds.generator = "file";
    for (double v : ds.samples.data) {
        if (!std::isfinite(v)) {
            throw FormatError("dataset payload contains a non-finite value");
        }
    }
    return ds;
}

void write_dataset(const Dataset &ds, const std::filesystem::path &path) {
    io::write_file(path, encode_dataset(ds));
}

Dataset read_dataset(const std::filesystem::path &path) {
    return decode_dataset(io::read_file(path));
}

std::pair<Dataset, Dataset> split(const Dataset &ds, double val_fraction,
                                  std::uint64_t seed) {
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
        throw DataError("val_fraction must lie in (0, 1)");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        by_class[ds.labels[i]].push_back(i);
    }
    std::vector<std::size_t> train, val;
    for (auto &idx : by_class) {
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n_val = static_cast<std::size_t>(
            std::llround(static_cast<double>(idx.size()) * val_fraction));
        val.insert(val.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
        train.insert(train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
    }
    if (train.empty() || val.empty()) {
        throw DataError("split of " + std::to_string(ds.size()) +
                        " samples would leave one side empty");
    }
    std::shuffle(train.begin(), train.end(), rng);
    std::shuffle(val.begin(), val.end(), rng);
    return {subset(ds, train), subset(ds, val)};
}

nn::Tensor gather(const Dataset &ds, std::span<const std::size_t> indices) {
    nn::Shape shape = ds.samples.shape;
    shape[0] = indices.size();
    const std::size_t stride = ds.samples.size() / ds.samples.shape[0];
    nn::Tensor out(shape);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        std::copy_n(ds.samples.data.begin() + static_cast<std::ptrdiff_t>(indices[i] * stride),
                    stride, out.data.begin() + static_cast<std::ptrdiff_t>(i * stride));
    }
    return out;
}

std::vector<std::uint8_t> gather_labels(const Dataset &ds,
                                        std::span<const std::size_t> indices) {
    std::vector<std::uint8_t> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        out.push_back(ds.labels[i]);
    }
    return out;
}

Dataset subset(const Dataset &ds, std::span<const std::size_t> indices) {
    return {gather(ds, indices), gather_labels(ds, indices), ds.generator, ds.seed,
            ds.num_classes};
}

} // namespace hqnn::data
