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

#include "hqnn/hybrid/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"

#include "hqnn/binary_io.hpp"
#include "hqnn/error.hpp"
#include "hqnn/hybrid/checkpoint.hpp"
#include "hqnn/hybrid/loss.hpp"

namespace hqnn::hybrid {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Scores {
    double loss = 0.0;
    double accuracy = 0.0;
};

void check_dataset(const Model &model, const data::Dataset &ds, const char *what) {
    if (ds.size() == 0) {
        throw DataError(std::string(what) + " dataset is empty");
    }
    for (std::uint8_t l : ds.labels) {
        if (l >= model.num_classes()) {
            throw DataError(std::string(what) + " label " + std::to_string(l) +
                            " exceeds the model's " + std::to_string(model.num_classes()) +
                            " classes");
        }
    }
}

Scores score(Model &model, const data::Dataset &ds, std::size_t batch_size) {
    std::vector<std::size_t> idx;
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < ds.size(); start += batch_size) {
        const std::size_t end = std::min(ds.size(), start + batch_size);
        idx.resize(end - start);
        std::iota(idx.begin(), idx.end(), start);
        const auto labels = data::gather_labels(ds, idx);
        const nn::Tensor probs = model.forward(data::gather(ds, idx));
        loss_sum += cross_entropy(probs, labels) * static_cast<double>(labels.size());
        const auto pred = predict(probs);
        for (std::size_t i = 0; i < pred.size(); ++i) {
            correct += pred[i] == labels[i] ? 1 : 0;
        }
    }
    const auto n = static_cast<double>(ds.size());
    return {loss_sum / n, static_cast<double>(correct) / n};
}

} // namespace

std::string to_json_line(const EpochRecord &r) {
    nlohmann::ordered_json j;
    j["epoch"] = r.epoch;
    j["train_loss"] = r.train_loss;
    j["val_loss"] = r.val_loss;
    j["val_accuracy"] = r.val_accuracy;
    j["elapsed_seconds"] = r.elapsed_seconds;
    return j.dump();
}

FitResult fit(Model &model, const data::Dataset &train, const data::Dataset &val,
              const TrainConfig &config, const EpochCallback &on_epoch) {
    check_dataset(model, train, "training");
    check_dataset(model, val, "validation");
    if (config.epochs < 1 || config.batch_size < 1) {
        throw ConfigError("epochs and batch_size must be >= 1");
    }
    if (!config.checkpoint_path.empty()) {
        // Fail before training rather than after the first improvement.
        io::write_file(config.checkpoint_path, encode_checkpoint(model));
    }

    const auto t0 = Clock::now();
    auto optimizer = make_optimizer(config.optimizer, config.learning_rate);
    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    FitResult result;
    std::vector<std::uint8_t> best_bytes;
    bool have_best = false;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const std::span<const std::size_t> idx(order.data() + start, end - start);
            const auto labels = data::gather_labels(train, idx);
            model.zero_grad();
            const nn::Tensor probs = model.forward(data::gather(train, idx));
            const double loss = cross_entropy(probs, labels);
            if (!std::isfinite(loss)) {
                throw NumericError("training diverged: non-finite loss at epoch " +
                                   std::to_string(epoch));
            }
            loss_sum += loss * static_cast<double>(idx.size());
            model.backward(cross_entropy_grad(probs, labels));
            const auto params = model.parameters();
            optimizer->step(params);
            // The loss clamp can hide exploding weights, so check them too.
            for (const auto &p : params) {
                if (!std::all_of(p.value->data.begin(), p.value->data.end(),
                                 [](double v) { return std::isfinite(v); })) {
                    throw NumericError("training diverged: non-finite " + p.name +
                                       " at epoch " + std::to_string(epoch));
                }
            }
        }

        const Scores s = score(model, val, config.batch_size);
        if (!std::isfinite(s.loss)) {
            throw NumericError("training diverged: non-finite validation loss at epoch " +
                               std::to_string(epoch));
        }
        EpochRecord rec{epoch, loss_sum / static_cast<double>(train.size()), s.loss,
                        s.accuracy, seconds_since(t0)};
        if (!have_best || rec.val_accuracy > result.best_val_accuracy) {
            have_best = true;
            result.best_epoch = epoch;
            result.best_val_accuracy = rec.val_accuracy;
            best_bytes = encode_checkpoint(model);
            if (!config.checkpoint_path.empty()) {
                io::write_file(config.checkpoint_path, best_bytes);
            }
        }
        result.history.push_back(rec);
        if (on_epoch) {
            on_epoch(rec);
        }
    }
    result.train_seconds = seconds_since(t0);

    // Reload from the stored bytes, exactly as a later load_checkpoint() would.
    auto best = decode_checkpoint(best_bytes);
    model.assign_parameters(*best);
    return result;
}

EvalMetrics evaluate(Model &model, const data::Dataset &ds, std::size_t batch_size) {
    check_dataset(model, ds, "evaluation");
    const auto t0 = Clock::now();
    const Scores s = score(model, ds, std::max<std::size_t>(batch_size, 1));
    return {s.accuracy, s.loss, seconds_since(t0), model_size_bytes(model)};
}

} // namespace hqnn::hybrid
