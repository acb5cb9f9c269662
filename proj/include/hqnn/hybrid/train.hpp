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
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hqnn/data.hpp"
#include "hqnn/hybrid/model.hpp"
#include "hqnn/hybrid/optimizer.hpp"

namespace hqnn::hybrid {

struct TrainConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    OptimizerKind optimizer = OptimizerKind::Adam;
    std::uint64_t seed = 0;
    /// Best checkpoint destination; empty keeps it in memory only.
    std::filesystem::path checkpoint_path;
};

struct EpochRecord {
    std::size_t epoch = 0; // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
    double elapsed_seconds = 0.0; // since the start of fit()
};

/// One JSON object with keys epoch, train_loss, val_loss, val_accuracy,
/// elapsed_seconds (no trailing newline).
std::string to_json_line(const EpochRecord &r);

struct FitResult {
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
    double best_val_accuracy = 0.0;
    double train_seconds = 0.0;
};

using EpochCallback = std::function<void(const EpochRecord &)>;

/// Trains `model` in place. Each epoch shuffles the training set (seeded),
/// steps the optimizer per mini-batch, then scores the validation set. A
/// checkpoint is written whenever validation accuracy strictly beats the best
/// so far; at the end the best checkpoint is loaded back into `model`.
FitResult fit(Model &model, const data::Dataset &train, const data::Dataset &val,
              const TrainConfig &config, const EpochCallback &on_epoch = {});

struct EvalMetrics {
    double accuracy = 0.0;
    double loss = 0.0;
    double elapsed_seconds = 0.0;
    std::size_t model_size_bytes = 0;
};

EvalMetrics evaluate(Model &model, const data::Dataset &ds, std::size_t batch_size = 256);

} // namespace hqnn::hybrid
