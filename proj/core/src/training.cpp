#include "fever/nsmn/training.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "fever/error.hpp"

namespace fever::nsmn {

EpochPlanner shuffle_all(std::size_t example_count) {
  return [example_count](std::size_t, std::mt19937_64& rng) {
    EpochPlan plan;
    plan.order.resize(example_count);
    std::iota(plan.order.begin(), plan.order.end(), std::size_t{0});
    std::shuffle(plan.order.begin(), plan.order.end(), rng);
    return plan;
  };
}

TrainReport train_model(Model& model, const std::vector<Example>& examples,
                        const TrainConfig& config, const EpochPlanner& planner,
                        const DevMetric& dev, std::ostream* log) {
  if (config.batch_size == 0) throw ValidationError("batch size must be positive");
  const std::size_t classes = head_size(model.config().head);
  for (const auto& ex : examples) {
    if (ex.label >= classes) {
      throw LabelError("example label " + std::to_string(ex.label) + " outside a " +
                       std::to_string(classes) + "-way head");
    }
  }
  const EpochPlanner plan_epoch = planner ? planner : shuffle_all(examples.size());

  TrainReport report;
  num::ParamSet best;
  num::ParamSet& params = model.params();
  num::Tape tape;
  for (std::size_t e = 0; e < config.epochs; ++e) {
    const std::size_t epoch = config.first_epoch + e;
    std::seed_seq seq{config.seed, static_cast<std::uint64_t>(epoch)};
    std::mt19937_64 rng(seq);
    const EpochPlan plan = plan_epoch(epoch, rng);

    double total = 0.0;
    for (std::size_t start = 0; start < plan.order.size(); start += config.batch_size) {
      const std::size_t end = std::min(plan.order.size(), start + config.batch_size);
      const double seed = 1.0 / static_cast<double>(end - start);
      params.zero_grad();
      for (std::size_t i = start; i < end; ++i) {
        const Example& ex = examples.at(plan.order[i]);
        num::Var loss =
            num::ops::cross_entropy(model.logits_for_training(tape, ex.u, ex.v), ex.label);
        total += loss.value()(0, 0);
        tape.backward(loss, seed);
      }
      params.adam_step(config.adam);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.examples = plan.order.size();
    rec.mean_loss = plan.order.empty() ? 0.0 : total / static_cast<double>(plan.order.size());
    rec.sampling_p = plan.sampling_p;
    if (dev) {
      rec.dev_metric = dev(model);
      if (!report.best_dev || *rec.dev_metric > *report.best_dev) {
        report.best_dev = rec.dev_metric;
        report.best_epoch = epoch;
        best = params;
      }
    } else {
      report.best_epoch = epoch;
    }
    report.epochs.push_back(rec);
    if (log != nullptr) {
      *log << "epoch " << epoch << " examples " << rec.examples << " loss " << std::fixed
           << std::setprecision(6) << rec.mean_loss;
      if (rec.sampling_p) *log << " p_e " << std::setprecision(2) << *rec.sampling_p;
      if (rec.dev_metric) *log << " dev " << std::setprecision(6) << *rec.dev_metric;
      *log << std::defaultfloat << '\n';
    }
  }
  if (dev && report.best_dev) params.copy_values_from(best);
  return report;
}

double mean_loss(const Model& model, const std::vector<Example>& examples) {
  if (examples.empty()) return 0.0;
  double total = 0.0;
  num::Tape tape;
  for (const auto& ex : examples) {
    total += num::ops::cross_entropy(model.logits(tape, ex.u, ex.v), ex.label).value()(0, 0);
    tape.clear();
  }
  return total / static_cast<double>(examples.size());
}

}  // namespace fever::nsmn
