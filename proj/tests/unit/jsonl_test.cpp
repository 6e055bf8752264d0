#include <gtest/gtest.h>

#include <sstream>

#include "fever/error.hpp"
#include "fever/pipeline/jsonl.hpp"
#include "test_support.hpp"

namespace p = fever::pipeline;
namespace corpus = fever::corpus;
using fever::retrieval::Priority;
using fever::testing::make_doc;

namespace {

corpus::Corpus fixture() {
  return corpus::Corpus::from_documents({make_doc("A", {"A one .", "A two ."}),
                                         make_doc("B (x)", {"B one ."})});
}

}  // namespace

TEST(Jsonl, RetrievedRoundTrip) {
  const p::RetrievedRecord r{7, {{"A", Priority::guaranteed, 0.0, 1.0},
                                 {"B_(x)", Priority::ranked, 0.123456789012345, 0.61}}};
  std::stringstream buf;
  p::write_retrieved(buf, r);
  p::write_retrieved(buf, {8, {}});
  const auto back = p::read_retrieved(buf);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].id, 7);
  EXPECT_EQ(back[0].docs, r.docs);
  EXPECT_TRUE(back[1].docs.empty());
}

TEST(Jsonl, RetrievedWithoutScoresDefaults) {
  std::istringstream in("{\"id\": 3, \"retrieved\": [\"A\"]}\n\n");
  const auto back = p::read_retrieved(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].docs[0].p, 1.0);
  EXPECT_EQ(back[0].docs[0].priority, Priority::guaranteed);
}

TEST(Jsonl, SelectedRoundTripFillsText) {
  const auto c = fixture();
  p::SelectedRecord r;
  r.id = 2;
  r.evidence = {{"B_(x)", 1, 0.7, 0.9, 2.25, ""}};
  r.pool = {{"B_(x)", 1, 0.7, 0.9, 2.25, ""}, {"A", 2, 1.0, 0.3, -0.5, ""}};
  std::stringstream buf;
  p::write_selected(buf, r);
  const auto back = p::read_selected(buf, c);
  ASSERT_EQ(back.size(), 1u);
  ASSERT_EQ(back[0].pool.size(), 2u);
  EXPECT_EQ(back[0].evidence[0].text, "B one .");
  EXPECT_EQ(back[0].evidence[0].doc_p, 0.7);
  EXPECT_EQ(back[0].evidence[0].m_plus, 2.25);
  EXPECT_EQ(back[0].pool[1].doc_p, 1.0);
  EXPECT_EQ(back[0].pool[1].sent_p, 0.3);
}

TEST(Jsonl, PredictionRoundTrip) {
  const fever::verification::Prediction pr{5, corpus::Label::refutes, {{"A", 1}, {"A", 2}},
                                           {0.1, 2.0, -1.0}};
  std::stringstream buf;
  p::write_prediction(buf, pr);
  EXPECT_NE(buf.str().find("\"label_scores\""), std::string::npos);
  const auto back = p::read_predictions(buf);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id, 5);
  EXPECT_EQ(back[0].label, corpus::Label::refutes);
  EXPECT_EQ(back[0].evidence, pr.evidence);
}

TEST(Jsonl, ErrorsCarryLineNumbers) {
  std::istringstream bad("{\"id\": 1, \"retrieved\": []}\nnot json\n");
  try {
    p::read_retrieved(bad);
    FAIL();
  } catch (const fever::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  const auto c = fixture();
  std::istringstream unknown("{\"id\": 1, \"evidence\": [[\"Z\", 1, 0.5, 0.0]]}\n");
  EXPECT_THROW(p::read_selected(unknown, c), fever::ValidationError);
  std::istringstream label("{\"id\": 1, \"predicted_label\": \"MAYBE\", \"predicted_evidence\": []}\n");
  EXPECT_THROW(p::read_predictions(label), fever::ValidationError);
  EXPECT_THROW(p::open_input("/nonexistent/file.jsonl"), fever::ValidationError);
}
