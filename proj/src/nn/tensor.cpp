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

#include "hqnn/nn/tensor.hpp"

#include "hqnn/error.hpp"

namespace hqnn::nn {

std::string shape_string(const Shape &shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) {
            s += "×";
        }
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

namespace {
void check_extents(const Shape &s) {
    for (std::size_t e : s) {
        if (e == 0) {
            throw ShapeError("tensor extents must be >= 1, got " + shape_string(s));
        }
    }
}
} // namespace

Tensor::Tensor(Shape s) : shape(std::move(s)) {
    check_extents(shape);
    data.assign(shape_size(shape), 0.0);
}

Tensor::Tensor(Shape s, std::vector<double> values)
    : shape(std::move(s)), data(std::move(values)) {
    check_extents(shape);
    if (data.size() != shape_size(shape)) {
        throw ShapeError("data length " + std::to_string(data.size()) +
                         " does not match shape " + shape_string(shape));
    }
}

} // namespace hqnn::nn
