#pragma once

// Intermediate artifact formats, one JSON object per line:
//   retrieved.jsonl    {"id", "retrieved": [docid...],
//                       "doc_scores": [[docid, p, m_plus, "guaranteed"|"ranked"]...]}
//   selected.jsonl     {"id", "evidence": [[docid, idx, p, m_plus]...],
//                       "doc_p": {docid: p}, "pool": [[docid, idx, p, m_plus]...]}
//   predictions.jsonl  {"id", "predicted_label", "predicted_evidence": [[docid, idx]...],
//                       "label_scores": [s, r, n]}

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "fever/corpus/corpus.hpp"
#include "fever/retrieval/retrieval.hpp"
#include "fever/scoring/scoring.hpp"
#include "fever/verification/verification.hpp"

namespace fever::pipeline {

struct RetrievedRecord {
  std::int64_t id = 0;
  std::vector<retrieval::RankedDoc> docs;

  std::vector<std::string> doc_ids() const;
};

struct SelectedRecord {
  std::int64_t id = 0;
  std::vector<verification::EvidenceItem> evidence;
  std::vector<verification::EvidenceItem> pool;
};

void write_retrieved(std::ostream& out, const RetrievedRecord& record);
std::vector<RetrievedRecord> read_retrieved(std::istream& in);

void write_selected(std::ostream& out, const SelectedRecord& record);
/// Sentence texts are filled in from `corpus`; unknown pointers are a
/// ValidationError.
std::vector<SelectedRecord> read_selected(std::istream& in, const corpus::Corpus& corpus);

void write_prediction(std::ostream& out, const verification::Prediction& prediction);
std::vector<scoring::PredictionRecord> read_predictions(std::istream& in);

/// Opens `path` for reading, throwing ValidationError when it cannot.
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace fever::pipeline
