#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fever/corpus/corpus.hpp"
#include "fever/corpus/dataset.hpp"

namespace fever::scoring {

constexpr std::size_t kMaxPredictedEvidence = 5;

struct PredictionRecord {
  std::int64_t id = 0;
  corpus::Label label = corpus::Label::nei;
  std::vector<corpus::EvidencePointer> evidence;
};

using PredictionMap = std::map<std::int64_t, PredictionRecord>;

/// Indexes predictions by claim id; duplicate ids are a ValidationError.
PredictionMap index_predictions(const std::vector<PredictionRecord>& predictions);

/// True when some gold group is a subset of `predicted`; true for no groups.
/// More than five predicted sentences is a ValidationError.
bool evidence_covered(const std::vector<corpus::EvidencePointer>& predicted,
                      const std::vector<corpus::EvidenceGroup>& gold);

/// Claims with the right label and, for verifiable claims, covered
/// evidence. Missing predictions count as wrong; their number goes to
/// `missing` when given.
double fever_score(const PredictionMap& predictions, const std::vector<corpus::ClaimRecord>& gold,
                   std::size_t* missing = nullptr);

/// Evidence coverage rate with NEI claims counted as covered.
double ofever(const std::map<std::int64_t, std::vector<corpus::EvidencePointer>>& evidence,
              const std::vector<corpus::ClaimRecord>& gold);

/// Document-level oracle: a group counts as covered when all of its
/// documents were retrieved.
double document_ofever(const std::map<std::int64_t, std::vector<std::string>>& retrieved,
                       const std::vector<corpus::ClaimRecord>& gold);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Micro-averaged sentence precision/recall against the union of gold
/// groups, over verifiable claims only.
Prf evidence_prf(const std::map<std::int64_t, std::vector<corpus::EvidencePointer>>& evidence,
                 const std::vector<corpus::ClaimRecord>& gold);

double label_accuracy(const PredictionMap& predictions,
                      const std::vector<corpus::ClaimRecord>& gold);
/// One-vs-rest F1 in SUPPORTS, REFUTES, NOT ENOUGH INFO order.
std::array<double, 3> per_label_f1(const PredictionMap& predictions,
                                   const std::vector<corpus::ClaimRecord>& gold);

enum class SubsetKind { doc, sentence };

/// doc: some gold sentence lies in a disambiguative document.
/// sentence: verifiable claims sharing fewer than two distinct lowercased
/// non-punctuation tokens with every one of their gold sentences.
std::vector<corpus::ClaimRecord> difficult_subset(const std::vector<corpus::ClaimRecord>& records,
                                                  SubsetKind kind, const corpus::Corpus& corpus);

struct ScoreReport {
  double fever = 0.0;
  double ofever = 0.0;
  double label_accuracy = 0.0;
  double evidence_precision = 0.0;
  double evidence_recall = 0.0;
  double evidence_f1 = 0.0;
  std::array<double, 3> label_f1{};
  std::size_t n_claims = 0;
  std::size_t missing_predictions = 0;
};

ScoreReport score(const PredictionMap& predictions, const std::vector<corpus::ClaimRecord>& gold);
nlohmann::json to_json(const ScoreReport& report);

}  // namespace fever::scoring
