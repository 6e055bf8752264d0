#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fever/corpus/corpus.hpp"
#include "fever/corpus/dataset.hpp"
#include "fever/nsmn/model.hpp"
#include "fever/nsmn/training.hpp"
#include "fever/retrieval/retrieval.hpp"
#include "fever/selection/selection.hpp"
#include "fever/verification/features.hpp"
#include "fever/verification/ontology.hpp"

namespace fever::verification {

constexpr std::size_t kMaxEvidence = 5;

/// One evidence sentence with the relatedness scores of the stages that
/// produced it.
struct EvidenceItem {
  std::string doc_id;
  int sentence = 0;
  /// dNSMN p of the source document; 1 when it was not scored.
  double doc_p = 1.0;
  double sent_p = 1.0;
  double m_plus = 0.0;
  std::string text;

  corpus::EvidencePointer pointer() const { return {doc_id, sentence}; }
};

struct Premise {
  std::vector<std::string> tokens;
  std::vector<Srs> srs;
};

/// Tokens of every sentence in the given order; each token carries its
/// sentence's (doc_p, sent_p).
Premise concat_evidence(const std::vector<EvidenceItem>& evidence);

struct Prediction {
  std::int64_t claim_id = 0;
  corpus::Label label = corpus::Label::nei;
  std::vector<corpus::EvidencePointer> evidence;
  std::vector<double> scores;
};

/// Network inputs for (premise, claim) with the configured token features.
std::pair<nsmn::SequenceInput, nsmn::SequenceInput> prepare_pair(
    std::string_view claim, const std::vector<EvidenceItem>& evidence, const nsmn::Model& model,
    const Ontology& graph, const FeatureConfig& features);

/// Runs the verification head: premise on the evidence side, claim on the
/// other. Throws ValidationError when both are empty, or when `features`
/// does not match the model's layout.
Prediction verify(std::int64_t claim_id, std::string_view claim,
                  const std::vector<EvidenceItem>& evidence, const nsmn::Model& model,
                  const Ontology& graph, const FeatureConfig& features);

/// 3, 4 or 5 items (uniformly, capped by the pool size) drawn uniformly
/// without replacement; returned in pool order.
template <typename T>
std::vector<T> sample_nei_evidence(const std::vector<T>& pool, std::mt19937_64& rng) {
  if (pool.empty()) return {};
  const std::size_t want = std::uniform_int_distribution<std::size_t>(3, 5)(rng);
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::size_t take = std::min(want, pool.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::swap(idx[i], idx[std::uniform_int_distribution<std::size_t>(i, idx.size() - 1)(rng)]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  for (std::size_t i : idx) out.push_back(pool[i]);
  return out;
}

struct VerificationExample {
  std::int64_t claim_id = 0;
  std::string claim;
  std::vector<EvidenceItem> evidence;
  corpus::Label label = corpus::Label::nei;
};

/// Gold-group premises for verifiable claims (first group only) and 3-5
/// sampled pool sentences for NEI claims. `pools[i]` is the candidate pool
/// of `claims[i]`. Gold sentences get sent_p from `sentence_scorer` and
/// doc_p from `doc_scorer` for disambiguative documents; a null scorer
/// leaves the value at 1. NEI claims with an empty pool are skipped.
std::vector<VerificationExample> build_verification_training(
    const std::vector<corpus::ClaimRecord>& claims,
    const std::vector<std::vector<EvidenceItem>>& pools, const corpus::Corpus& corpus,
    const nsmn::PairScorer* doc_scorer, const nsmn::PairScorer* sentence_scorer,
    std::uint64_t seed);

/// Fraction of examples whose predicted label matches.
double label_accuracy(const std::vector<nsmn::Example>& examples, const nsmn::Model& model);

std::vector<nsmn::Example> verification_examples(const std::vector<VerificationExample>& data,
                                                 const nsmn::Model& model, const Ontology& graph,
                                                 const FeatureConfig& features);

/// 3-way training. Throws TrainingDataError unless all three labels occur.
nsmn::TrainReport train_vnsmn(const std::vector<VerificationExample>& data,
                              nsmn::Model& model, const Ontology& graph,
                              const FeatureConfig& features, const nsmn::TrainConfig& config,
                              const std::vector<VerificationExample>& dev = {},
                              std::ostream* log = nullptr);

/// Two-hop enhancement: documents linked from the evidence sentences pass
/// the dNSMN filter (disambiguative ones only, skipped when `doc_scorer` is
/// null) and have their body sentences scored by `sentence_scorer`. The
/// single best new sentence with p >= the sentence threshold is appended;
/// past the cap, the original sentence with the lowest m_plus is evicted.
std::vector<EvidenceItem> enhance_evidence(std::string_view claim,
                                           const std::vector<EvidenceItem>& evidence,
                                           const corpus::Corpus& corpus,
                                           const nsmn::PairScorer* doc_scorer,
                                           const nsmn::PairScorer& sentence_scorer,
                                           const retrieval::RetrievalConfig& retrieval,
                                           const selection::SelectionConfig& selection);

}  // namespace fever::verification
