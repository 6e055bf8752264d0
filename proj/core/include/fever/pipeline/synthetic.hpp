#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fever/corpus/dataset.hpp"
#include "fever/corpus/document.hpp"

namespace fever::pipeline {

struct SyntheticSpec {
  std::size_t documents = 500;
  double disambiguative_fraction = 0.10;
  std::size_t claims_per_label = 400;
  double train_fraction = 0.75;
  /// Share of verifiable claims whose subject is a disambiguative document.
  double disambiguative_subject_rate = 0.2;
  std::uint64_t seed = 1;

  void validate() const;
};

/// How one claim was produced; enough to re-derive its label.
///   kind: same | hypernym | two_hop | antonym | number | absent
///   attribute: year | count | adjective | pet | place
/// For two_hop claims `entity` is the linking document and `target` the
/// linked one whose year the claim states.
struct ClaimTrace {
  std::int64_t id = 0;
  std::string kind;
  std::string attribute;
  std::string entity;
  std::string target;
  std::string doc_value;
  std::string claim_value;
  corpus::Label label = corpus::Label::nei;
};

struct SyntheticData {
  std::vector<corpus::Document> documents;
  std::vector<corpus::ClaimRecord> train;
  std::vector<corpus::ClaimRecord> dev;
  std::vector<ClaimTrace> trace;
  std::string ontology_tsv;
  std::size_t disambiguative_count = 0;
};

/// Seeded generator of a closed-world corpus with pseudo-word entities,
/// groups of disambiguative pages sharing a base name, hyperlinks, and
/// SUPPORTS / REFUTES / NOT ENOUGH INFO claims built from templates over the
/// documents' facts (antonym and number flips refute; absent facts give
/// NOT ENOUGH INFO; some support needs a hyperlinked second page).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Writes corpus.jsonl, train.jsonl, dev.jsonl, ontology.tsv and trace.jsonl.
void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir);

}  // namespace fever::pipeline
