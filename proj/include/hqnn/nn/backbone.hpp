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

#include <cstdint>
#include <vector>

#include "hqnn/nn/layers.hpp"

namespace hqnn::nn {

/// Conv2D -> ReLU -> MaxPool2D block.
struct ConvStage {
    std::size_t out_channels = 8;
    std::size_t kernel = 3;
    std::size_t stride = 1;
    std::size_t padding = 1;
    std::size_t pool_kernel = 2;
    std::size_t pool_stride = 2;
};

/// Feature extractor layout. With no stages and `global_pool` off the
/// backbone degenerates to Flatten + Dense(d -> out_features).
struct BackboneConfig {
    Shape input_shape{1, 32, 32}; // per sample, batch excluded
    std::vector<ConvStage> stages{{8}, {16}};
    bool global_pool = true;
    std::size_t out_features = 1;
    std::uint64_t seed = 0;

    /// Flatten + Dense over a per-sample input of `input_shape`.
    static BackboneConfig identity(Shape input_shape, std::size_t out_features = 1,
                                   std::uint64_t seed = 0);
};

/// Builds and initializes the layer stack. Throws ConfigError when any layer
/// rejects the shape flowing into it.
LayerStack build_backbone(const BackboneConfig &config);

} // namespace hqnn::nn
