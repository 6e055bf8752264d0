#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fever/corpus/corpus.hpp"
#include "fever/corpus/dataset.hpp"
#include "fever/nsmn/model.hpp"
#include "fever/nsmn/training.hpp"

namespace fever::retrieval {

enum class Strategy { km, km_tfidf, km_pageview, km_dnsmn, km_pageview_dnsmn };

/// "km", "km+tfidf", "km+pageview", "km+dnsmn", "km+pageview+dnsmn".
std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);
bool uses_dnsmn(Strategy s);

struct RetrievalConfig {
  std::size_t k = 5;
  double doc_threshold = 0.5;
  Strategy strategy = Strategy::km_pageview_dnsmn;
  /// Most disambiguative documents kept by plain keyword matching.
  std::size_t disambiguative_cap = 5;
  std::uint64_t seed = 1;

  void validate() const;
};

enum class Priority { guaranteed, ranked };

struct RankedDoc {
  std::string doc_id;
  Priority priority = Priority::guaranteed;
  /// dNSMN scores; documents not scored by dNSMN carry m_plus 0 and p 1.
  double m_plus = 0.0;
  double p = 1.0;

  bool operator==(const RankedDoc&) const = default;
};

/// Keyword match, then: non-disambiguative candidates first (by id), then
/// the disambiguative ones ranked by the configured strategy. `scorer` is
/// only consulted by the dNSMN strategies and may be null otherwise.
std::vector<RankedDoc> retrieve_documents(std::string_view claim, const corpus::Corpus& corpus,
                                          const nsmn::PairScorer* scorer,
                                          const RetrievalConfig& config);

struct DocPair {
  std::int64_t claim_id = 0;
  std::string claim;
  std::string doc_id;
  bool positive = false;
};

/// Disambiguative keyword-match candidates of each claim, labelled positive
/// when they hold any gold evidence sentence.
std::vector<DocPair> make_doc_training_pairs(const std::vector<corpus::ClaimRecord>& claims,
                                             const corpus::Corpus& corpus);

/// Extraction-head examples: label 0 (m+) for positives, 1 otherwise.
std::vector<nsmn::Example> doc_examples(const std::vector<DocPair>& pairs,
                                        const corpus::Corpus& corpus, const nsmn::Model& model);

/// Trains an extraction-head model on document pairs. With `dev` pairs the
/// best epoch by pair accuracy is kept. Throws TrainingDataError when
/// `pairs` is empty.
nsmn::TrainReport train_dnsmn(const std::vector<DocPair>& pairs, const corpus::Corpus& corpus,
                              nsmn::Model& model, const nsmn::TrainConfig& config,
                              const std::vector<DocPair>& dev = {}, std::ostream* log = nullptr);

/// Fraction of pairs where (p >= 0.5) agrees with the label.
double pair_accuracy(const std::vector<nsmn::Example>& examples, const nsmn::Model& model);

}  // namespace fever::retrieval
