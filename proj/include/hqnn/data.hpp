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
 * Synthetic datasets and the HQDS container.
 *
 * Generators use std::mt19937_64 with the standard library distributions, so
 * output is reproducible for a given seed and standard library build. Sample
 * values are rounded to single precision at generation time, which makes the
 * f32 file payload an exact round trip.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hqnn/nn/tensor.hpp"

namespace hqnn::data {

struct Dataset {
    nn::Tensor samples; // [N x ...]
    std::vector<std::uint8_t> labels;
    std::string generator;
    std::uint64_t seed = 0;
    std::uint16_t num_classes = 2;

    [[nodiscard]] std::size_t size() const { return labels.size(); }
    /// Per-sample shape (samples.shape without the leading N).
    [[nodiscard]] nn::Shape sample_shape() const;
    /// Throws DataError when labels, shape or values are inconsistent.
    void validate() const;
};

/// Two unit-variance isotropic Gaussian clusters whose means are
/// `separation` apart along the first axis. Samples alternate class 0, 1.
Dataset gen_blobs(std::size_t n_per_class, std::size_t dim, double separation,
                  std::uint64_t seed);

/// size×size single-channel images in [0, 1]. Class 0 is clamped Gaussian
/// background noise; class 1 adds a bright frequency-sweep ridge with random
/// start, slope, curvature and thickness. Samples alternate class 0, 1.
Dataset gen_chirp_images(std::size_t n_per_class, std::size_t size, double noise_std,
                         std::uint64_t seed);

std::vector<std::uint8_t> encode_dataset(const Dataset &ds);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);
void write_dataset(const Dataset &ds, const std::filesystem::path &path);
Dataset read_dataset(const std::filesystem::path &path);

/// Stratified seeded split: each class contributes round(n_c * val_fraction)
/// samples to the validation side.
std::pair<Dataset, Dataset> split(const Dataset &ds, double val_fraction,
                                  std::uint64_t seed);

/// Copies the given samples into a batch tensor.
nn::Tensor gather(const Dataset &ds, std::span<const std::size_t> indices);
std::vector<std::uint8_t> gather_labels(const Dataset &ds,
                                        std::span<const std::size_t> indices);

/// Subset in the given order, with metadata carried over.
Dataset subset(const Dataset &ds, std::span<const std::size_t> indices);

} // namespace hqnn::data
