#include <gtest/gtest.h>

#include <sstream>

#include "fever/corpus/corpus.hpp"
#include "fever/corpus/dataset.hpp"
#include "fever/error.hpp"
#include "test_support.hpp"

namespace corpus = fever::corpus;

TEST(Dataset, LabelNames) {
  for (auto l : {corpus::Label::supports, corpus::Label::refutes, corpus::Label::nei}) {
    EXPECT_EQ(corpus::parse_label(corpus::label_name(l)), l);
  }
  EXPECT_EQ(corpus::parse_label("NEI"), corpus::Label::nei);
  EXPECT_THROW(corpus::parse_label("MAYBE"), fever::ValidationError);
}

TEST(Dataset, LoadAndRoundTrip) {
  std::istringstream in(
      R"({"id":1,"claim":"A b .","label":"SUPPORTS","evidence":[[["A",1]],[["A",2],["B",1]]]})"
      "\n\n"
      R"({"id":2,"claim":"C d .","label":"NOT ENOUGH INFO","evidence":[]})"
      "\n");
  const auto claims = corpus::load_claims(in);
  ASSERT_EQ(claims.size(), 2u);
  EXPECT_EQ(claims[0].evidence.size(), 2u);
  EXPECT_EQ(claims[0].evidence[1][1], (corpus::EvidencePointer{"B", 1}));
  EXPECT_FALSE(claims[1].verifiable());
  std::ostringstream out;
  for (const auto& c : claims) corpus::write_claim(out, c);
  std::istringstream again(out.str());
  const auto back = corpus::load_claims(again);
  EXPECT_EQ(back[0].evidence, claims[0].evidence);
  EXPECT_EQ(back[1].label, corpus::Label::nei);
}

TEST(Dataset, NeiIffNoEvidence) {
  std::istringstream nei_with(
      R"({"id":1,"claim":"x","label":"NOT ENOUGH INFO","evidence":[[["A",1]]]})");
  EXPECT_THROW(corpus::load_claims(nei_with), fever::ParseError);
  std::istringstream sup_without(R"({"id":1,"claim":"x","label":"SUPPORTS","evidence":[]})");
  EXPECT_THROW(corpus::load_claims(sup_without), fever::ParseError);
}

TEST(Dataset, ParseErrorCarriesLine) {
  std::istringstream in("{\"id\":1,\"claim\":\"x\",\"label\":\"NEI\",\"evidence\":[]}\nnot json\n");
  try {
    corpus::load_claims(in);
    FAIL();
  } catch (const fever::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Dataset, ValidateAgainstCorpus) {
  const auto c = corpus::Corpus::from_documents({fever::testing::make_doc("A", {"one .", "two ."})});
  std::vector<corpus::ClaimRecord> ok{{1, "x", corpus::Label::supports, {{{"A", 2}}}}};
  EXPECT_NO_THROW(corpus::validate_claims(ok, c));
  std::vector<corpus::ClaimRecord> bad_doc{{1, "x", corpus::Label::supports, {{{"Z", 1}}}}};
  EXPECT_THROW(corpus::validate_claims(bad_doc, c), fever::ValidationError);
  std::vector<corpus::ClaimRecord> bad_sent{{1, "x", corpus::Label::supports, {{{"A", 3}}}}};
  EXPECT_THROW(corpus::validate_claims(bad_sent, c), fever::ValidationError);
}
