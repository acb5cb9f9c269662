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

#include <cstring>
#include <filesystem>
#include <numeric>
#include <set>

#include "hqnn/data.hpp"
#include "hqnn/error.hpp"
#include "oracles.hpp"

using namespace hqnn;
using namespace hqnn::data;

namespace {

std::vector<std::vector<double>> rows(const Dataset &ds) {
    const std::size_t d = nn::shape_size(ds.sample_shape());
    std::vector<std::vector<double>> x(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        x[i].assign(ds.samples.data.begin() + static_cast<std::ptrdiff_t>(i * d),
                    ds.samples.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    }
    return x;
}

std::vector<int> ints(const std::vector<std::uint8_t> &l) { return {l.begin(), l.end()}; }

double class_mean(const Dataset &ds, int cls) {
    const std::size_t d = nn::shape_size(ds.sample_shape());
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.labels[i] == cls) {
            for (std::size_t j = 0; j < d; ++j) {
                sum += ds.samples[i * d + j];
            }
            n += d;
        }
    }
    return sum / static_cast<double>(n);
}

std::filesystem::path temp_path(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("hqnn_test_data_" + name);
}

std::size_t header_bytes(const Dataset &ds) { return 4 + 4 + 4 + 2 + 1 + 4 * ds.sample_shape().size(); }

} // namespace

TEST_CASE("gen_blobs") {
    const auto ds = gen_blobs(100, 2, 6.0, 1);
    CHECK(ds.size() == 200);
    CHECK(ds.samples.shape == nn::Shape{200, 2});
    CHECK(std::count(ds.labels.begin(), ds.labels.end(), 1) == 100);
    const auto again = gen_blobs(100, 2, 6.0, 1);
    CHECK(again.samples.data == ds.samples.data);
    CHECK(again.labels == ds.labels);
    CHECK(gen_blobs(100, 2, 6.0, 2).samples.data != ds.samples.data);

    oracle::Logistic lr;
    lr.fit(rows(ds), ints(ds.labels));
    CHECK(lr.accuracy(rows(ds), ints(ds.labels)) >= 0.99);

    // No separation: a fitted classifier scores near chance on fresh data.
    const auto flat = gen_blobs(2000, 2, 0.0, 3);
    const auto fresh = gen_blobs(2000, 2, 0.0, 4);
    lr.fit(rows(flat), ints(flat.labels));
    CHECK(std::abs(lr.accuracy(rows(fresh), ints(fresh.labels)) - 0.5) < 0.05);
    CHECK_THROWS_AS(gen_blobs(0, 2, 1.0, 1), ConfigError);
}

TEST_CASE("gen_chirp_images") {
    const auto clean = gen_chirp_images(20, 32, 0.0, 5);
    CHECK(clean.samples.shape == nn::Shape{40, 1, 32, 32});
    for (std::size_t i = 0; i < clean.size(); ++i) {
        const auto begin = clean.samples.data.begin() + static_cast<std::ptrdiff_t>(i * 1024);
        const double mx = *std::max_element(begin, begin + 1024);
        const double mn = *std::min_element(begin, begin + 1024);
        if (clean.labels[i] == 1) {
            CHECK(mx == 1.0);
        } else {
            CHECK(mx == 0.0);
        }
        CHECK(mn == 0.0);
    }
    const auto noisy = gen_chirp_images(200, 32, 0.1, 6);
    CHECK(class_mean(noisy, 1) > class_mean(noisy, 0));
    for (double v : noisy.samples.data) {
        REQUIRE(std::isfinite(v));
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
    CHECK(gen_chirp_images(200, 32, 0.1, 6).samples.data == noisy.samples.data);
}

TEST_CASE("dataset file round trip is bit-exact") {
    for (const auto &ds : {gen_blobs(30, 3, 2.0, 1), gen_chirp_images(5, 16, 0.2, 2)}) {
        const auto path = temp_path("rt.hqds");
        write_dataset(ds, path);
        const auto back = read_dataset(path);
        CHECK(back.samples.shape == ds.samples.shape);
        CHECK(back.samples.data == ds.samples.data);
        CHECK(back.labels == ds.labels);
        CHECK(back.num_classes == ds.num_classes);
        CHECK(encode_dataset(back) == encode_dataset(ds));
        std::filesystem::remove(path);
    }
}

TEST_CASE("malformed dataset files are rejected") {
    const auto ds = gen_blobs(4, 2, 1.0, 1);
    const auto bytes = encode_dataset(ds);

    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_dataset(bad), FormatError);

    bad = bytes;
    bad[4] = 2;
    CHECK_THROWS_AS(decode_dataset(bad), FormatError);

    // Truncation reports how many bytes are missing.
    bad.assign(bytes.begin(), bytes.end() - 5);
    CHECK_THROWS_WITH(decode_dataset(bad), Catch::Matchers::ContainsSubstring("need 5 more byte"));
    bad.assign(bytes.begin(), bytes.begin() + 10);
    CHECK_THROWS_AS(decode_dataset(bad), FormatError);

    // A label at or above the declared class count.
    bad = bytes;
    const std::size_t labels_at = header_bytes(ds) + 4 * ds.samples.size();
    bad[labels_at + 2] = 2;
    CHECK_THROWS_WITH(decode_dataset(bad),
                      Catch::Matchers::ContainsSubstring("offset " + std::to_string(labels_at + 2)));

    bad = bytes;
    bad.push_back(0);
    CHECK_THROWS_AS(decode_dataset(bad), FormatError);

    CHECK_THROWS_AS(read_dataset(temp_path("does_not_exist")), IoError);
}

TEST_CASE("split") {
    const auto ds = gen_blobs(50, 2, 3.0, 9);
    const auto [train, val] = split(ds, 0.2, 1);
    CHECK(train.size() == 80);
    CHECK(val.size() == 20);
    const auto ones = [](const Dataset &d) { return std::count(d.labels.begin(), d.labels.end(), 1); };
    CHECK(std::abs(ones(train) - 40) <= 1);
    CHECK(std::abs(ones(val) - 10) <= 1);

    const auto [train2, val2] = split(ds, 0.2, 1);
    CHECK(train2.samples.data == train.samples.data);
    CHECK(val2.labels == val.labels);

    // Disjoint and covering: every sample row lands on exactly one side.
    std::multiset<std::vector<double>> all, parts;
    for (auto &r : rows(ds)) {
        all.insert(r);
    }
    for (auto &r : rows(train)) {
        parts.insert(r);
    }
    for (auto &r : rows(val)) {
        parts.insert(r);
    }
    CHECK(all == parts);

    CHECK_THROWS_AS(split(ds, 0.0, 1), DataError);
    CHECK_THROWS_AS(split(ds, 1.0, 1), DataError);
    CHECK_THROWS_AS(split(gen_blobs(1, 2, 1.0, 1), 0.2, 1), DataError);
}
