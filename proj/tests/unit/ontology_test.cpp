#include <gtest/gtest.h>

#include <sstream>

#include "fever/error.hpp"
#include "fever/verification/ontology.hpp"

using fever::verification::Direction;
using fever::verification::HypernymPath;
using fever::verification::Ontology;

namespace {

Ontology animals() {
  std::istringstream in(R"(# tiny taxonomy
LEMMA animal n.animal
LEMMA mammal n.mammal
LEMMA carnivore n.carnivore
LEMMA canine n.canine
LEMMA dog n.dog n.hotdog
LEMMA sausage n.sausage
LEMMA cat n.cat
HYPER n.mammal n.animal
HYPER n.carnivore n.mammal
HYPER n.canine n.carnivore
HYPER n.dog n.canine
HYPER n.cat n.carnivore
HYPER n.hotdog n.sausage

LEMMA hot a.hot
LEMMA cold a.cold
ANT hot cold
)");
  return Ontology::load(in);
}

}  // namespace

TEST(Ontology, LoadsRecords) {
  const auto g = animals();
  EXPECT_EQ(g.synset_count(), 10u);
  EXPECT_EQ(g.edge_count(), 6u);
  EXPECT_TRUE(g.has_lemma("dog"));
  EXPECT_FALSE(g.has_lemma("wolf"));
  EXPECT_EQ(g.synsets_of("dog").size(), 2u);
  EXPECT_TRUE(g.antonyms("hot", "cold"));
  EXPECT_TRUE(g.antonyms("cold", "hot"));
  EXPECT_FALSE(g.antonyms("hot", "dog"));
}

TEST(Ontology, UpDistances) {
  const auto g = animals();
  EXPECT_EQ(g.up_distance("dog", "canine"), 1u);
  EXPECT_EQ(g.up_distance("dog", "animal"), 4u);
  EXPECT_EQ(g.up_distance("dog", "sausage"), 1u);
  EXPECT_EQ(g.up_distance("animal", "dog"), std::nullopt);
  EXPECT_EQ(g.up_distance("dog", "dog"), std::nullopt);
  EXPECT_EQ(g.up_distance("dog", "cat"), std::nullopt);
  EXPECT_EQ(g.up_distance("dog", "wolf"), std::nullopt);
  EXPECT_EQ(g.hypernym_distance("cat", "mammal"), (HypernymPath{Direction::hypernym, 2}));
  EXPECT_EQ(g.hypernym_distance("mammal", "cat"), (HypernymPath{Direction::hyponym, 2}));
  EXPECT_EQ(g.hypernym_distance("cat", "dog"), std::nullopt);
}

TEST(Ontology, SearchStopsAtMaxDepth) {
  Ontology g;
  for (int i = 0; i <= 8; ++i) g.add_lemma("w" + std::to_string(i), "s" + std::to_string(i));
  for (int i = 0; i < 8; ++i) g.add_hypernym("s" + std::to_string(i), "s" + std::to_string(i + 1));
  g.validate();
  EXPECT_EQ(g.up_distance("w0", "w6"), 6u);
  EXPECT_EQ(g.up_distance("w0", "w7"), std::nullopt);
  EXPECT_EQ(g.ancestors("w0").size(), Ontology::kMaxDepth);
}

TEST(Ontology, SynsetOfSameLemmaCanBeAncestor) {
  Ontology g;
  g.add_lemma("bank", "s.low");
  g.add_lemma("bank", "s.high");
  g.add_lemma("top", "s.high");
  g.add_hypernym("s.low", "s.high");
  EXPECT_EQ(g.up_distance("bank", "top"), 1u);
}

TEST(Ontology, RejectsBadInput) {
  std::istringstream bad("LEMMA dog n.dog\nHYPER n.dog\n");
  try {
    Ontology::load(bad);
    FAIL();
  } catch (const fever::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream undeclared("LEMMA dog n.dog\nHYPER n.dog n.ghost\n");
  EXPECT_THROW(Ontology::load(undeclared), fever::ValidationError);
  std::istringstream cycle(
      "LEMMA a s.a\nLEMMA b s.b\nLEMMA c s.c\nHYPER s.a s.b\nHYPER s.b s.c\nHYPER s.c s.a\n");
  EXPECT_THROW(Ontology::load(cycle), fever::ValidationError);
  EXPECT_THROW(Ontology::load(std::filesystem::path("/nonexistent.tsv")), fever::ValidationError);
}
