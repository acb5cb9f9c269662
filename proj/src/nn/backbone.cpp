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

#include "hqnn/nn/backbone.hpp"

#include <random>

#include "hqnn/error.hpp"

namespace hqnn::nn {

BackboneConfig BackboneConfig::identity(Shape input_shape, std::size_t out_features,
                                        std::uint64_t seed) {
    BackboneConfig c;
    c.input_shape = std::move(input_shape);
    c.stages.clear();
    c.global_pool = false;
    c.out_features = out_features;
    c.seed = seed;
    return c;
}

LayerStack build_backbone(const BackboneConfig &config) {
    if (config.input_shape.empty() || config.out_features == 0) {
        throw ConfigError("backbone needs a non-empty input shape and >= 1 output");
    }
    if ((!config.stages.empty() || config.global_pool) && config.input_shape.size() != 3) {
        throw ConfigError("convolutional backbone needs a [C×H×W] input shape, got " +
                          shape_string(config.input_shape));
    }
    LayerStack stack;
    std::size_t channels = config.input_shape[0];
    try {
        for (const ConvStage &s : config.stages) {
            stack.push_back(std::make_unique<Conv2D>(channels, s.out_channels, s.kernel,
                                                     s.stride, s.padding));
            stack.push_back(std::make_unique<ReLU>());
            stack.push_back(std::make_unique<MaxPool2D>(s.pool_kernel, s.pool_stride));
            channels = s.out_channels;
        }
        if (config.global_pool) {
            stack.push_back(std::make_unique<GlobalAvgPool>());
        }
        stack.push_back(std::make_unique<Flatten>());

        Shape probe{1};
        probe.insert(probe.end(), config.input_shape.begin(), config.input_shape.end());
        const Shape flat = output_shape(stack, probe);
        stack.push_back(std::make_unique<Dense>(flat[1], config.out_features));
    } catch (const ShapeError &e) {
        throw ConfigError(std::string("invalid backbone: ") + e.what());
    }
    std::mt19937_64 rng(config.seed);
    for (auto &l : stack) {
        init_glorot_uniform(*l, rng);
    }
    return stack;
}

} // namespace hqnn::nn
