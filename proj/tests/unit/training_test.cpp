#include <gtest/gtest.h>

#include <sstream>

#include "fever/error.hpp"
#include "nsmn_fixtures.hpp"

namespace nsmn = fever::nsmn;
using fever::testing::colour_examples;
using fever::testing::tiny_model;

namespace {

nsmn::TrainConfig config(std::size_t epochs) {
  nsmn::TrainConfig c;
  c.epochs = epochs;
  c.batch_size = 8;
  c.adam.lr = 0.02;
  return c;
}

std::vector<double> flat(const nsmn::Model& m) {
  std::vector<double> out;
  for (const auto& [name, p] : m.params())
    out.insert(out.end(), p.value.values().begin(), p.value.values().end());
  return out;
}

}  // namespace

TEST(Training, LossDecreasesOnLearnableTask) {
  auto m = tiny_model();
  const auto data = colour_examples(m, 96, 3);
  const double before = nsmn::mean_loss(m, data);
  const auto report = nsmn::train_model(m, data, config(15));
  EXPECT_LT(nsmn::mean_loss(m, data), before);
  ASSERT_EQ(report.epochs.size(), 15u);
  EXPECT_LT(report.epochs.back().mean_loss, report.epochs.front().mean_loss);
  EXPECT_EQ(report.best_epoch, 15u);
}

TEST(Training, Deterministic) {
  auto a = tiny_model(), b = tiny_model();
  const auto data = colour_examples(a, 32, 4);
  nsmn::train_model(a, data, config(2));
  nsmn::train_model(b, data, config(2));
  EXPECT_EQ(flat(a), flat(b));
}

TEST(Training, KeepsBestDevEpochEarliestOnTies) {
  auto m = tiny_model();
  const auto data = colour_examples(m, 16, 5);
  // metric peaks at epoch 2 and ties there again at epoch 4
  const std::vector<double> scores{0.1, 0.9, 0.5, 0.9, 0.2};
  std::size_t calls = 0;
  std::vector<std::vector<double>> snapshots;
  const auto report = nsmn::train_model(m, data, config(5), {}, [&](const nsmn::Model& model) {
    snapshots.push_back(flat(model));
    return scores[calls++];
  });
  EXPECT_EQ(report.best_epoch, 2u);
  EXPECT_DOUBLE_EQ(*report.best_dev, 0.9);
  EXPECT_EQ(flat(m), snapshots[1]);
  EXPECT_NE(flat(m), snapshots[4]);
}

TEST(Training, PlannerControlsOrderAndLogsSamplingRate) {
  auto m = tiny_model();
  const auto data = colour_examples(m, 10, 6);
  std::ostringstream log;
  const auto report = nsmn::train_model(
      m, data, config(2),
      [](std::size_t epoch, std::mt19937_64&) {
        nsmn::EpochPlan plan;
        plan.order = {0, 1, 2};
        plan.sampling_p = epoch == 1 ? 0.5 : 0.25;
        return plan;
      },
      {}, &log);
  EXPECT_EQ(report.epochs[0].examples, 3u);
  EXPECT_DOUBLE_EQ(*report.epochs[1].sampling_p, 0.25);
  EXPECT_NE(log.str().find("epoch 1 examples 3"), std::string::npos);
  EXPECT_NE(log.str().find("p_e 0.25"), std::string::npos);
}

TEST(Training, RejectsBadInput) {
  auto m = tiny_model();
  auto data = colour_examples(m, 4, 7);
  data[2].label = 2;
  EXPECT_THROW(nsmn::train_model(m, data, config(1)), fever::LabelError);
  auto c = config(1);
  c.batch_size = 0;
  EXPECT_THROW(nsmn::train_model(m, colour_examples(m, 4, 7), c), fever::ValidationError);
}

TEST(Training, ShuffleAllIsAPermutation) {
  std::mt19937_64 rng(1);
  auto plan = nsmn::shuffle_all(50)(1, rng);
  std::sort(plan.order.begin(), plan.order.end());
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(plan.order[i], i);
  EXPECT_FALSE(plan.sampling_p.has_value());
}
