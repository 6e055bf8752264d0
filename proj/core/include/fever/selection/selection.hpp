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

namespace fever::selection {

/// Negative-sampling probability for a 1-based epoch: 0.5 at epoch 1, minus
/// 0.1 per epoch, reset to 0.02 whenever the result would be <= 0. Computed
/// in integer hundredths, so epoch 5 gives exactly 0.1.
double annealed_probability(std::size_t epoch);

/// Indices into positives ++ negatives for one epoch: every positive, each
/// negative kept with probability `p`, then shuffled.
std::vector<std::size_t> sample_epoch_indices(std::size_t positives, std::size_t negatives,
                                              double p, std::mt19937_64& rng);

template <typename T>
std::vector<T> sample_training_epoch(const std::vector<T>& positives,
                                     const std::vector<T>& negatives, std::size_t epoch,
                                     std::uint64_t seed) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(epoch)};
  std::mt19937_64 rng(seq);
  std::vector<T> out;
  for (std::size_t i : sample_epoch_indices(positives.size(), negatives.size(),
                                            annealed_probability(epoch), rng)) {
    out.push_back(i < positives.size() ? positives[i] : negatives[i - positives.size()]);
  }
  return out;
}

struct SelectionConfig {
  double sent_threshold = 0.05;
  std::size_t max_evidence = 5;

  void validate() const;
};

struct RankedSentence {
  std::string doc_id;
  int sentence = 0;
  double m_plus = 0.0;
  double p = 0.0;
  std::string text;
};

struct SelectionResult {
  /// At most max_evidence sentences, m_plus descending.
  std::vector<RankedSentence> evidence;
  /// Every sentence that passed the threshold, in the same order.
  std::vector<RankedSentence> pool;
};

/// Scores every body sentence of the retrieved documents against the claim,
/// drops p < threshold, sorts by m_plus descending (ties by document id then
/// sentence index) and keeps the top max_evidence.
SelectionResult select_sentences(std::string_view claim,
                                 const std::vector<std::string>& retrieved,
                                 const corpus::Corpus& corpus, const nsmn::PairScorer& scorer,
                                 const SelectionConfig& config);

/// TF-IDF cosine as a pair scorer: p = m_plus = cosine, m_minus = 0.
class TfidfScorer : public nsmn::PairScorer {
 public:
  explicit TfidfScorer(const corpus::CorpusIndex& index) : index_(&index) {}
  nsmn::MatchResult score(const std::vector<std::string>& evidence,
                          const std::vector<std::string>& claim) const override;

 private:
  const corpus::CorpusIndex* index_;
};

struct SentencePair {
  std::int64_t claim_id = 0;
  std::string claim;
  std::string doc_id;
  int sentence = 0;
};

struct SentencePairs {
  std::vector<SentencePair> positives;
  std::vector<SentencePair> negatives;
};

/// Positives are the gold evidence sentences; negatives every other body
/// sentence of the claim's retrieved documents. `retrieved[i]` belongs to
/// `claims[i]`.
SentencePairs make_sent_training_pairs(const std::vector<corpus::ClaimRecord>& claims,
                                       const std::vector<std::vector<std::string>>& retrieved,
                                       const corpus::Corpus& corpus);

/// Trains an extraction-head sentence model. Annealed runs resample the
/// negatives every epoch with annealed_probability; otherwise every
/// negative is used every epoch. Throws TrainingDataError without positives.
nsmn::TrainReport train_snsmn(const SentencePairs& pairs, const corpus::Corpus& corpus,
                              nsmn::Model& model, const nsmn::TrainConfig& config, bool annealed,
                              const nsmn::DevMetric& dev = {}, std::ostream* log = nullptr);

}  // namespace fever::selection
