#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fever/error.hpp"
#include "fever/verification/verification.hpp"
#include "test_support.hpp"

namespace corpus = fever::corpus;
namespace nsmn = fever::nsmn;
namespace v = fever::verification;
using fever::testing::make_doc;
using fever::testing::StubScorer;

namespace {

v::Ontology empty_graph() { return {}; }

nsmn::Model verif_model(nsmn::FeatureLayout layout) {
  nsmn::ModelConfig cfg;
  cfg.head = nsmn::Head::verification;
  cfg.dims = {4, 4, 4, 4, 4, 4};
  cfg.features = layout;
  return nsmn::Model(cfg, nsmn::Vocabulary::build({{"the", "cat", "is", "black"}}), {},
                     nsmn::StaticEmbeddings(4), 2);
}

corpus::Corpus fixture() {
  return corpus::Corpus::from_documents({
      make_doc("Felix", {"Felix is a cat .", "Felix is black ."}),
      make_doc("Felix (band)", {"Felix are a band ."}),
  });
}

}  // namespace

TEST(ConcatEvidence, TokensCarryTheirSentenceScores) {
  const std::vector<v::EvidenceItem> ev{{"A", 1, 0.9, 0.8, 2.0, "A b ."},
                                        {"B", 2, 1.0, 0.3, 1.0, "C ."}};
  const auto p = v::concat_evidence(ev);
  const std::vector<std::string> want{"A", "b", ".", "C", "."};
  EXPECT_EQ(p.tokens, want);
  ASSERT_EQ(p.srs.size(), 5u);
  EXPECT_EQ(p.srs[2].doc, 0.9);
  EXPECT_EQ(p.srs[2].sent, 0.8);
  EXPECT_EQ(p.srs[3].sent, 0.3);
  EXPECT_TRUE(v::concat_evidence({}).tokens.empty());
}

TEST(Verify, LabelIsArgmaxAndEvidenceKeepsOrder) {
  const auto m = verif_model({});
  const auto g = empty_graph();
  const v::FeatureConfig none{false, false, false, false};
  const std::vector<v::EvidenceItem> ev{{"B", 2, 1, 1, 0, "the cat ."}, {"A", 1, 1, 1, 0, "is"}};
  const auto p = v::verify(11, "the cat is black .", ev, m, g, none);
  EXPECT_EQ(p.claim_id, 11);
  ASSERT_EQ(p.scores.size(), 3u);
  const auto best = std::max_element(p.scores.begin(), p.scores.end()) - p.scores.begin();
  EXPECT_EQ(static_cast<long>(p.label), best);
  ASSERT_EQ(p.evidence.size(), 2u);
  EXPECT_EQ(p.evidence[0].doc_id, "B");
  // empty evidence still runs on the sentinel premise
  EXPECT_NO_THROW(v::verify(1, "the cat", {}, m, g, none));
  EXPECT_THROW(v::verify(1, "", {}, m, g, none), fever::ValidationError);
  EXPECT_THROW(v::verify(1, "cat", ev, m, g, v::FeatureConfig{}), fever::ValidationError);
}

TEST(Verify, FeaturesFlowIntoInputs) {
  const v::FeatureConfig cfg = v::parse_features("wn,srs-sent");
  const auto m = verif_model(cfg.layout());
  const auto g = empty_graph();
  const std::vector<v::EvidenceItem> ev{{"A", 1, 0.7, 0.6, 0, "black cat"}};
  const auto [u, c] = v::prepare_pair("the cat", ev, m, g, cfg);
  ASSERT_EQ(u.features.rows(), 32u);
  EXPECT_EQ(u.features(31, 0), 0.6);
  EXPECT_EQ(u.features(30, 0), 0.0);
  EXPECT_EQ(u.features(3 * v::kExactLemma + 2, 1), 1.0);
  EXPECT_EQ(c.features(31, 0), 0.0);
  EXPECT_EQ(c.features(3 * v::kExactLemma + 1, 1), 1.0);
}

TEST(NeiSampling, SizeAndInclusionWithinThreeSigma) {
  const std::vector<int> pool{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  constexpr int kDraws = 10000;
  std::mt19937_64 rng(5);
  std::array<int, 6> sizes{};
  std::array<int, 10> hits{};
  for (int i = 0; i < kDraws; ++i) {
    const auto s = v::sample_nei_evidence(pool, rng);
    ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
    ASSERT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
    ++sizes.at(s.size());
    for (int x : s) ++hits[static_cast<std::size_t>(x)];
  }
  for (std::size_t k = 3; k <= 5; ++k) {
    const double p = 1.0 / 3, sigma = std::sqrt(kDraws * p * (1 - p));
    EXPECT_LE(std::abs(sizes[k] - kDraws * p), 3 * sigma) << k;
  }
  // each item appears with probability E[size] / 10 = 0.4; ten items are
  // checked at once, so the per-item bound is widened to 4 sigma
  for (int h : hits) {
    const double sigma = std::sqrt(kDraws * 0.4 * 0.6);
    EXPECT_LE(std::abs(h - kDraws * 0.4), 4 * sigma);
  }
  EXPECT_EQ(v::sample_nei_evidence(std::vector<int>{1, 2}, rng).size(), 2u);
  EXPECT_TRUE(v::sample_nei_evidence(std::vector<int>{}, rng).empty());
}

TEST(VerificationTraining, BuildsGoldAndSampledPremises) {
  const auto c = fixture();
  StubScorer doc, sent;
  doc.fallback = 1.0;
  sent.fallback = -1.0;
  corpus::ClaimRecord s{1, "Felix is black .", corpus::Label::supports,
                        {{{"Felix", 2}}, {{"Felix", 1}}}};
  corpus::ClaimRecord r{2, "Felix are a band .", corpus::Label::refutes, {{{"Felix_(band)", 1}}}};
  corpus::ClaimRecord n{3, "Felix sings .", corpus::Label::nei, {}};
  corpus::ClaimRecord lonely{4, "Nothing .", corpus::Label::nei, {}};
  std::vector<v::EvidenceItem> pool;
  for (int i = 0; i < 6; ++i) pool.push_back({"Felix", 1, 1, 0.5, 0, "x" + std::to_string(i)});
  const auto data =
      v::build_verification_training({s, r, n, lonely}, {{}, {}, pool, {}}, c, &doc, &sent, 9);
  ASSERT_EQ(data.size(), 3u);
  ASSERT_EQ(data[0].evidence.size(), 1u);
  EXPECT_EQ(data[0].evidence[0].sentence, 2);
  EXPECT_EQ(data[0].evidence[0].doc_p, 1.0);
  EXPECT_NEAR(data[0].evidence[0].sent_p, 1 / (1 + std::exp(1.0)), 1e-12);
  EXPECT_NEAR(data[1].evidence[0].doc_p, 1 / (1 + std::exp(-1.0)), 1e-12);
  EXPECT_GE(data[2].evidence.size(), 3u);
  EXPECT_LE(data[2].evidence.size(), 5u);
  const auto again =
      v::build_verification_training({s, r, n, lonely}, {{}, {}, pool, {}}, c, &doc, &sent, 9);
  ASSERT_EQ(again[2].evidence.size(), data[2].evidence.size());
  for (std::size_t i = 0; i < again[2].evidence.size(); ++i)
    EXPECT_EQ(again[2].evidence[i].text, data[2].evidence[i].text);

  const auto plain = v::build_verification_training({s}, {{}}, c, nullptr, nullptr, 1);
  EXPECT_EQ(plain[0].evidence[0].sent_p, 1.0);
  EXPECT_THROW(v::build_verification_training({s}, {}, c, nullptr, nullptr, 1),
               fever::ValidationError);
  corpus::ClaimRecord bad{5, "x", corpus::Label::supports, {{{"Felix", 9}}}};
  EXPECT_THROW(v::build_verification_training({bad}, {{}}, c, nullptr, nullptr, 1),
               fever::ValidationError);
}

TEST(VerificationTraining, NeedsAllLabels) {
  auto m = verif_model({});
  const v::FeatureConfig none{false, false, false, false};
  std::vector<v::VerificationExample> data{
      {1, "the cat", {{"A", 1, 1, 1, 0, "the cat"}}, corpus::Label::supports},
      {2, "the cat", {{"A", 1, 1, 1, 0, "black"}}, corpus::Label::refutes}};
  fever::nsmn::TrainConfig tc;
  tc.epochs = 1;
  EXPECT_THROW(v::train_vnsmn(data, m, empty_graph(), none, tc), fever::TrainingDataError);
  data.push_back({3, "is", {{"A", 1, 1, 1, 0, "cat"}}, corpus::Label::nei});
  const auto rep = v::train_vnsmn(data, m, empty_graph(), none, tc, data);
  EXPECT_TRUE(rep.best_dev.has_value());
}
