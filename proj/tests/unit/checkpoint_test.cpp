#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fever/error.hpp"
#include "fever/nsmn/checkpoint.hpp"
#include "nsmn_fixtures.hpp"

namespace nsmn = fever::nsmn;
using fever::testing::colour_examples;
using fever::testing::tiny_model;

namespace {

void expect_same_params(const nsmn::Model& a, const nsmn::Model& b) {
  ASSERT_EQ(a.params().size(), b.params().size());
  for (const auto& [name, p] : a.params()) {
    const auto& q = b.params().at(name);
    ASSERT_TRUE(p.value.same_shape(q.value)) << name;
    for (std::size_t i = 0; i < p.value.size(); ++i) ASSERT_EQ(p.value[i], q.value[i]) << name;
  }
}

nsmn::TrainConfig small_config(std::size_t epochs, std::size_t first = 1) {
  nsmn::TrainConfig c;
  c.epochs = epochs;
  c.batch_size = 8;
  c.adam.lr = 0.01;
  c.first_epoch = first;
  return c;
}

}  // namespace

TEST(Checkpoint, RoundTripIsBitExact) {
  auto m = tiny_model(nsmn::Head::verification);
  nsmn::train_model(m, colour_examples(m, 16, 1), small_config(1));
  std::stringstream buf;
  nsmn::save_checkpoint(buf, m, {{"stage", "verif"}, {"best_epoch", 1}});
  const auto ck = nsmn::load_checkpoint(buf);
  expect_same_params(m, ck.model);
  EXPECT_EQ(ck.meta.at("stage"), "verif");
  EXPECT_EQ(ck.model.config().head, nsmn::Head::verification);
  EXPECT_EQ(ck.model.config().dims, m.config().dims);
  EXPECT_EQ(ck.model.vocabulary().words(), m.vocabulary().words());
  EXPECT_EQ(ck.model.params().step(), m.params().step());
  const std::vector<std::string> e{"the", "cat", "is", "red"}, c{"a", "red", "zebra"};
  EXPECT_EQ(m.score(e, c).scores, ck.model.score(e, c).scores);
}

TEST(Checkpoint, ResumeMatchesUninterruptedRun) {
  auto whole = tiny_model();
  const auto data = colour_examples(whole, 24, 2);
  nsmn::train_model(whole, data, small_config(4));

  auto part = tiny_model();
  nsmn::train_model(part, data, small_config(2));
  std::stringstream buf;
  nsmn::save_checkpoint(buf, part);
  auto resumed = nsmn::load_checkpoint(buf).model;
  nsmn::train_model(resumed, data, small_config(2, 3));
  expect_same_params(whole, resumed);
}

TEST(Checkpoint, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "fever_checkpoint_test";
  std::filesystem::create_directories(dir);
  const auto m = tiny_model();
  nsmn::save_checkpoint(dir / "m.json", m);
  expect_same_params(m, nsmn::load_checkpoint(dir / "m.json").model);
  std::filesystem::remove_all(dir);
}

TEST(Checkpoint, RejectsGarbage) {
  std::stringstream bad("{\"version\": 999}");
  EXPECT_THROW(nsmn::load_checkpoint(bad), fever::ValidationError);
  std::stringstream junk("not json");
  EXPECT_THROW(nsmn::load_checkpoint(junk), fever::ValidationError);
  EXPECT_THROW(nsmn::load_checkpoint(std::filesystem::path("/nonexistent/x.json")),
               fever::ValidationError);
}
