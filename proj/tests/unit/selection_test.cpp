#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fever/error.hpp"
#include "fever/selection/selection.hpp"
#include "nsmn_fixtures.hpp"
#include "test_support.hpp"

namespace corpus = fever::corpus;
namespace selection = fever::selection;
using fever::testing::logit;
using fever::testing::make_doc;
using fever::testing::StubScorer;

namespace {

corpus::Corpus fixture() {
  return corpus::Corpus::from_documents({
      make_doc("Alpha", {"Alpha one .", "Alpha two .", "Alpha three ."}),
      make_doc("Beta", {"Beta one .", "Beta two ."}),
      make_doc("Gamma", {"Gamma one ."}),
  });
}

}  // namespace

TEST(Annealing, ExactSchedule) {
  const std::vector<double> want{0.5, 0.4, 0.3, 0.2, 0.1, 0.02, 0.02, 0.02, 0.02, 0.02};
  for (std::size_t e = 1; e <= want.size(); ++e) {
    EXPECT_EQ(selection::annealed_probability(e), want[e - 1]) << "epoch " << e;
  }
  EXPECT_EQ(selection::annealed_probability(500), 0.02);
  EXPECT_THROW(selection::annealed_probability(0), fever::ValidationError);
}

TEST(Annealing, InclusionWithinThreeSigma) {
  constexpr std::size_t kNeg = 10000, kPos = 37;
  for (std::size_t epoch = 1; epoch <= 7; ++epoch) {
    const double p = selection::annealed_probability(epoch);
    std::mt19937_64 rng(epoch);
    const auto idx = selection::sample_epoch_indices(kPos, kNeg, p, rng);
    std::size_t pos = 0, neg = 0;
    for (std::size_t i : idx) (i < kPos ? pos : neg)++;
    EXPECT_EQ(pos, kPos);
    const double mean = p * kNeg, sigma = std::sqrt(kNeg * p * (1 - p));
    EXPECT_LE(std::abs(static_cast<double>(neg) - mean), 3 * sigma) << "epoch " << epoch;
  }
}

TEST(Annealing, SampleIsShuffledSubsetWithoutRepeats) {
  std::mt19937_64 rng(3);
  auto idx = selection::sample_epoch_indices(5, 100, 0.5, rng);
  EXPECT_FALSE(std::is_sorted(idx.begin(), idx.end()));
  std::sort(idx.begin(), idx.end());
  EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
  EXPECT_LT(idx.back(), 105u);
  std::mt19937_64 r1(9), r2(9);
  EXPECT_EQ(selection::sample_epoch_indices(5, 100, 1.0, r1).size(), 105u);
  EXPECT_EQ(selection::sample_epoch_indices(5, 100, 0.0, r2).size(), 5u);
}

TEST(Annealing, TrainingEpochIsDeterministic) {
  const std::vector<int> pos{1, 2}, neg{10, 11, 12, 13, 14, 15, 16, 17};
  EXPECT_EQ(selection::sample_training_epoch(pos, neg, 3, 42),
            selection::sample_training_epoch(pos, neg, 3, 42));
}

TEST(Selection, ThresholdSortAndTruncate) {
  const auto c = fixture();
  StubScorer s;
  s.set("Alpha one .", logit(0.9));
  s.set("Alpha two .", logit(0.3));
  s.set("Alpha three .", logit(0.04));
  s.set("Beta one .", logit(0.9));
  s.set("Beta two .", logit(0.6));
  s.set("Gamma one .", logit(0.95));
  selection::SelectionConfig cfg;
  cfg.max_evidence = 3;
  const auto r = selection::select_sentences("claim", {"Beta", "Alpha", "Gamma", "Alpha"}, c, s,
                                             cfg);
  ASSERT_EQ(r.pool.size(), 5u);
  ASSERT_EQ(r.evidence.size(), 3u);
  EXPECT_EQ(r.evidence[0].doc_id, "Gamma");
  // equal scores: document id, then sentence index
  EXPECT_EQ(r.evidence[1].doc_id, "Alpha");
  EXPECT_EQ(r.evidence[1].sentence, 1);
  EXPECT_EQ(r.evidence[2].doc_id, "Beta");
  EXPECT_EQ(r.evidence[2].text, "Beta one .");
  for (const auto& x : r.pool) EXPECT_GE(x.p, 0.05);
  for (std::size_t i = 1; i < r.pool.size(); ++i) EXPECT_GE(r.pool[i - 1].m_plus, r.pool[i].m_plus);

  cfg.sent_threshold = 0.5;
  EXPECT_EQ(selection::select_sentences("claim", {"Alpha", "Beta"}, c, s, cfg).pool.size(), 3u);
}

TEST(Selection, TitleSentenceNeverSelected) {
  const auto c = fixture();
  StubScorer s;
  s.fallback = 5.0;
  selection::SelectionConfig cfg;
  cfg.max_evidence = 10;
  const auto r = selection::select_sentences("Gamma", {"Gamma"}, c, s, cfg);
  ASSERT_EQ(r.pool.size(), 1u);
  EXPECT_EQ(r.pool[0].sentence, 1);
}

TEST(Selection, Errors) {
  const auto c = fixture();
  StubScorer s;
  selection::SelectionConfig cfg;
  EXPECT_THROW(selection::select_sentences("x", {"Nope"}, c, s, cfg), fever::ValidationError);
  cfg.sent_threshold = 0.0;
  EXPECT_THROW(selection::select_sentences("x", {"Alpha"}, c, s, cfg), fever::ValidationError);
  cfg.sent_threshold = 0.5;
  cfg.max_evidence = 0;
  EXPECT_THROW(selection::select_sentences("x", {"Alpha"}, c, s, cfg), fever::ValidationError);
}

TEST(Selection, TfidfScorerIsCosine) {
  const auto c = fixture();
  const selection::TfidfScorer s(c.index());
  const auto same = s.score({"Alpha", "one", "."}, {"alpha", "one"});
  EXPECT_NEAR(same.m_plus, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(same.p, same.m_plus);
  EXPECT_DOUBLE_EQ(s.score({"Alpha"}, {"Beta"}).m_plus, 0.0);
}

TEST(SentTraining, PairsSplitGoldFromRest) {
  const auto c = fixture();
  corpus::ClaimRecord r{7, "Alpha two .", corpus::Label::supports, {{{"Alpha", 2}}}};
  corpus::ClaimRecord n{8, "Beta .", corpus::Label::nei, {}};
  const auto pairs =
      selection::make_sent_training_pairs({r, n}, {{"Alpha", "Beta", "Alpha"}, {"Beta"}}, c);
  ASSERT_EQ(pairs.positives.size(), 1u);
  EXPECT_EQ(pairs.positives[0].sentence, 2);
  EXPECT_EQ(pairs.negatives.size(), 2u + 2u + 2u);
  for (const auto& p : pairs.negatives) EXPECT_FALSE(p.doc_id == "Alpha" && p.sentence == 2);

  corpus::ClaimRecord bad{9, "x", corpus::Label::supports, {{{"Alpha", 0}}}};
  EXPECT_THROW(selection::make_sent_training_pairs({bad}, {{}}, c), fever::ValidationError);
  EXPECT_THROW(selection::make_sent_training_pairs({r}, {}, c), fever::ValidationError);
}

TEST(SentTraining, AnnealedLogsScheduleAndPlainUsesAll) {
  const auto c = fixture();
  corpus::ClaimRecord r{7, "Alpha two .", corpus::Label::supports, {{{"Alpha", 2}}}};
  const auto pairs = selection::make_sent_training_pairs({r}, {{"Alpha", "Beta", "Gamma"}}, c);
  auto m = fever::testing::tiny_model();
  fever::nsmn::TrainConfig tc;
  tc.epochs = 3;
  tc.batch_size = 4;
  const auto annealed = selection::train_snsmn(pairs, c, m, tc, true);
  EXPECT_DOUBLE_EQ(*annealed.epochs[1].sampling_p, 0.4);
  const auto plain = selection::train_snsmn(pairs, c, m, tc, false);
  for (const auto& e : plain.epochs) {
    EXPECT_DOUBLE_EQ(*e.sampling_p, 1.0);
    EXPECT_EQ(e.examples, pairs.positives.size() + pairs.negatives.size());
  }
  EXPECT_THROW(selection::train_snsmn({}, c, m, tc, true), fever::TrainingDataError);
}
