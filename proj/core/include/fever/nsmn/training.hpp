#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "fever/nsmn/model.hpp"

namespace fever::nsmn {

struct Example {
  SequenceInput u;  // evidence side
  SequenceInput v;  // claim side
  std::size_t label = 0;
};

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 128;
  num::AdamConfig adam;
  std::uint64_t seed = 1;
  /// Epoch number given to the first epoch of this run; later than 1 when
  /// resuming.
  std::size_t first_epoch = 1;
};

/// Examples to visit in one epoch, in order.
struct EpochPlan {
  std::vector<std::size_t> order;
  /// Negative-sampling probability, when the plan uses one.
  std::optional<double> sampling_p;
};

using EpochPlanner = std::function<EpochPlan(std::size_t epoch, std::mt19937_64& rng)>;
/// Higher is better.
using DevMetric = std::function<double(const Model&)>;

struct EpochRecord {
  std::size_t epoch = 0;
  std::size_t examples = 0;
  double mean_loss = 0.0;
  std::optional<double> sampling_p;
  std::optional<double> dev_metric;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  /// Epoch whose parameters were kept; 0 when no epoch ran.
  std::size_t best_epoch = 0;
  std::optional<double> best_dev;
};

/// Every example once per epoch, shuffled.
EpochPlanner shuffle_all(std::size_t example_count);

/// Minibatch Adam on cross-entropy. Each example's gradient is scaled by
/// 1/batch so a step follows the batch mean. With a dev metric the model
/// ends holding the parameters of the best epoch (earliest on ties);
/// otherwise those of the last epoch. One line per epoch goes to `log`.
TrainReport train_model(Model& model, const std::vector<Example>& examples,
                        const TrainConfig& config, const EpochPlanner& planner = {},
                        const DevMetric& dev = {}, std::ostream* log = nullptr);

/// Mean cross-entropy over `examples` without touching gradients.
double mean_loss(const Model& model, const std::vector<Example>& examples);

}  // namespace fever::nsmn
