#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fever/error.hpp"
#include "fever/retrieval/retrieval.hpp"
#include "nsmn_fixtures.hpp"
#include "test_support.hpp"

namespace corpus = fever::corpus;
namespace retrieval = fever::retrieval;
using fever::testing::make_doc;
using fever::testing::StubScorer;
using retrieval::Priority;
using retrieval::Strategy;

namespace {

const std::vector<std::string> kKinds{"band", "film", "novel", "album", "song", "play", "poem"};

// One plain page plus seven disambiguative "Savages (...)" pages; pageview
// rises with the position in kKinds.
corpus::Corpus fixture() {
  std::vector<corpus::Document> docs{make_doc("Savages", {"Savages is a word ."}, {}, 1000),
                                     make_doc("Oliver Stone", {"Oliver Stone is a director ."})};
  for (std::size_t i = 0; i < kKinds.size(); ++i) {
    docs.push_back(make_doc("Savages (" + kKinds[i] + ")",
                            {"Savages is a " + kKinds[i] + " ."}, {},
                            static_cast<std::int64_t>(10 * (i + 1))));
  }
  return corpus::Corpus::from_documents(std::move(docs));
}

std::string sid(const std::string& kind) { return "Savages_(" + kind + ")"; }

StubScorer scorer_for(const corpus::Corpus& c, const std::map<std::string, double>& m) {
  StubScorer s;
  for (const auto& [id, v] : m) s.set_tokens(c.doc_repr(*c.find(id)), v);
  return s;
}

std::vector<std::string> ids(const std::vector<retrieval::RankedDoc>& docs) {
  std::vector<std::string> out;
  for (const auto& d : docs) out.push_back(d.doc_id);
  return out;
}

const std::string kClaim = "Savages was directed by Oliver Stone .";

}  // namespace

TEST(Retrieval, KmCapsDisambiguativeAndPutsGuaranteedFirst) {
  const auto c = fixture();
  retrieval::RetrievalConfig cfg;
  cfg.strategy = Strategy::km;
  const auto out = retrieval::retrieve_documents(kClaim, c, nullptr, cfg);
  ASSERT_EQ(out.size(), 2u + 5u);
  EXPECT_EQ(out[0].doc_id, "Oliver_Stone");
  EXPECT_EQ(out[1].doc_id, "Savages");
  EXPECT_EQ(out[0].priority, Priority::guaranteed);
  std::vector<std::string> rest;
  for (std::size_t i = 2; i < out.size(); ++i) {
    EXPECT_EQ(out[i].priority, Priority::ranked);
    EXPECT_DOUBLE_EQ(out[i].p, 1.0);
    rest.push_back(out[i].doc_id);
  }
  EXPECT_TRUE(std::is_sorted(rest.begin(), rest.end()));
  // same claim and seed, same subset
  EXPECT_EQ(out, retrieval::retrieve_documents(kClaim, c, nullptr, cfg));
  cfg.disambiguative_cap = 10;
  EXPECT_EQ(retrieval::retrieve_documents(kClaim, c, nullptr, cfg).size(), 9u);
}

TEST(Retrieval, KmSubsetVariesWithSeed) {
  const auto c = fixture();
  retrieval::RetrievalConfig cfg;
  cfg.strategy = Strategy::km;
  cfg.disambiguative_cap = 2;
  std::set<std::vector<std::string>> seen;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    cfg.seed = s;
    seen.insert(ids(retrieval::retrieve_documents(kClaim, c, nullptr, cfg)));
  }
  EXPECT_GT(seen.size(), 1u);
}

TEST(Retrieval, PageviewKeepsTopK) {
  const auto c = fixture();
  retrieval::RetrievalConfig cfg;
  cfg.strategy = Strategy::km_pageview;
  cfg.k = 3;
  const auto out = retrieval::retrieve_documents(kClaim, c, nullptr, cfg);
  const std::vector<std::string> want{"Oliver_Stone", "Savages", sid("poem"), sid("play"),
                                      sid("song")};
  EXPECT_EQ(ids(out), want);
}

TEST(Retrieval, TfidfRanksDisambiguativeOnly) {
  const auto c = fixture();
  retrieval::RetrievalConfig cfg;
  cfg.strategy = Strategy::km_tfidf;
  cfg.k = 2;
  const auto out = retrieval::retrieve_documents("Savages is a novel .", c, nullptr, cfg);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].doc_id, "Savages");
  EXPECT_EQ(out[1].doc_id, sid("novel"));
  EXPECT_GE(out[1].m_plus, out[2].m_plus);
}

TEST(Retrieval, DnsmnThresholdsSortsAndTruncates) {
  const auto c = fixture();
  using fever::testing::logit;
  const auto s = scorer_for(c, {{sid("band"), logit(0.9)},
                                {sid("film"), logit(0.6)},
                                {sid("novel"), logit(0.4)},
                                {sid("album"), logit(0.95)},
                                {sid("song"), logit(0.7)}});
  retrieval::RetrievalConfig cfg;
  cfg.strategy = Strategy::km_dnsmn;
  cfg.k = 3;
  const auto out = retrieval::retrieve_documents(kClaim, c, &s, cfg);
  const std::vector<std::string> want{"Oliver_Stone", "Savages", sid("album"), sid("band"),
                                      sid("song")};
  EXPECT_EQ(ids(out), want);
  EXPECT_NEAR(out[2].p, 0.95, 1e-12);
  cfg.doc_threshold = 0.92;
  EXPECT_EQ(retrieval::retrieve_documents(kClaim, c, &s, cfg).size(), 3u);
}

TEST(Retrieval, PageviewDnsmnScoresOnlyTopTwoK) {
  const auto c = fixture();
  // "band" has the lowest pageview; with k = 2 only the top four get scored
  StubScorer s = scorer_for(c, {{sid("band"), 5.0}});
  s.fallback = 1.0;
  retrieval::RetrievalConfig cfg;
  cfg.strategy = Strategy::km_pageview_dnsmn;
  cfg.k = 2;
  const auto out = retrieval::retrieve_documents(kClaim, c, &s, cfg);
  for (const auto& d : out) EXPECT_NE(d.doc_id, sid("band"));
  cfg.strategy = Strategy::km_dnsmn;
  EXPECT_EQ(retrieval::retrieve_documents(kClaim, c, &s, cfg)[2].doc_id, sid("band"));
}

TEST(Retrieval, GuaranteedAlwaysPrecedeRanked) {
  const auto c = fixture();
  StubScorer s;
  s.fallback = 3.0;
  for (Strategy st : {Strategy::km, Strategy::km_tfidf, Strategy::km_pageview, Strategy::km_dnsmn,
                      Strategy::km_pageview_dnsmn}) {
    retrieval::RetrievalConfig cfg;
    cfg.strategy = st;
    const auto out = retrieval::retrieve_documents(kClaim, c, &s, cfg);
    bool ranked_seen = false;
    for (const auto& d : out) {
      if (d.priority == Priority::ranked) ranked_seen = true;
      else EXPECT_FALSE(ranked_seen) << retrieval::strategy_name(st);
      EXPECT_EQ(d.priority == Priority::ranked,
                corpus::is_disambiguative(c.find(d.doc_id)->title));
    }
    EXPECT_EQ(retrieval::parse_strategy(retrieval::strategy_name(st)), st);
  }
}

TEST(Retrieval, ValidatesConfig) {
  const auto c = fixture();
  retrieval::RetrievalConfig cfg;
  EXPECT_THROW(retrieval::retrieve_documents(kClaim, c, nullptr, cfg), fever::ValidationError);
  cfg.strategy = Strategy::km;
  cfg.k = 0;
  EXPECT_THROW(retrieval::retrieve_documents(kClaim, c, nullptr, cfg), fever::ValidationError);
  cfg.k = 5;
  cfg.doc_threshold = 1.0;
  EXPECT_THROW(retrieval::retrieve_documents(kClaim, c, nullptr, cfg), fever::ValidationError);
  EXPECT_THROW(retrieval::parse_strategy("bm25"), fever::ValidationError);
}

TEST(Retrieval, NoMatchGivesNothing) {
  const auto c = fixture();
  retrieval::RetrievalConfig cfg;
  cfg.strategy = Strategy::km;
  EXPECT_TRUE(retrieval::retrieve_documents("nothing here .", c, nullptr, cfg).empty());
}

TEST(DocTraining, PairsAreDisambiguativeCandidatesLabelledByGold) {
  const auto c = fixture();
  corpus::ClaimRecord r;
  r.id = 4;
  r.claim = kClaim;
  r.label = corpus::Label::supports;
  r.evidence = {{{sid("film"), 1}, {"Oliver_Stone", 1}}};
  const auto pairs = retrieval::make_doc_training_pairs({r}, c);
  ASSERT_EQ(pairs.size(), 7u);
  std::size_t positives = 0;
  for (const auto& p : pairs) {
    EXPECT_TRUE(corpus::is_disambiguative(c.find(p.doc_id)->title));
    EXPECT_EQ(p.claim_id, 4);
    if (p.positive) {
      ++positives;
      EXPECT_EQ(p.doc_id, sid("film"));
    }
  }
  EXPECT_EQ(positives, 1u);

  const auto m = fever::testing::tiny_model();
  const auto ex = retrieval::doc_examples(pairs, c, m);
  for (std::size_t i = 0; i < pairs.size(); ++i) EXPECT_EQ(ex[i].label, pairs[i].positive ? 0u : 1u);
}

TEST(DocTraining, RejectsEmptyOrWrongHead) {
  const auto c = fixture();
  auto m = fever::testing::tiny_model();
  fever::nsmn::TrainConfig tc;
  EXPECT_THROW(retrieval::train_dnsmn({}, c, m, tc), fever::TrainingDataError);
  auto v = fever::testing::tiny_model(fever::nsmn::Head::verification);
  EXPECT_THROW(retrieval::train_dnsmn({{1, kClaim, sid("band"), true}}, c, v, tc),
               fever::ValidationError);
}
