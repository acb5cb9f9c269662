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

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace hqnn::nn {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape &shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
}

std::string shape_string(const Shape &shape);

/// Row-major real array.
struct Tensor {
    Shape shape;
    std::vector<double> data;

    Tensor() = default;
    /// Zero-filled tensor; every extent must be >= 1.
    explicit Tensor(Shape s);
    Tensor(Shape s, std::vector<double> values);

    [[nodiscard]] std::size_t size() const { return data.size(); }
    [[nodiscard]] std::size_t rank() const { return shape.size(); }
    [[nodiscard]] std::size_t dim(std::size_t i) const { return shape[i]; }

    double &operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    [[nodiscard]] std::span<double> span() { return data; }
    [[nodiscard]] std::span<const double> span() const { return data; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

} // namespace hqnn::nn
