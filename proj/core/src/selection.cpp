#include "fever/selection/selection.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "fever/corpus/tfidf.hpp"
#include "fever/error.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::selection {

double annealed_probability(std::size_t epoch) {
  if (epoch < 1) throw ValidationError("epochs are numbered from 1");
  int hundredths = 50;
  for (std::size_t e = 1; e < epoch && hundredths != 2; ++e) {
    hundredths -= 10;
    if (hundredths <= 0) hundredths = 2;
  }
  return hundredths / 100.0;
}

std::vector<std::size_t> sample_epoch_indices(std::size_t positives, std::size_t negatives,
                                              double p, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  out.reserve(positives + static_cast<std::size_t>(p * static_cast<double>(negatives)) + 1);
  for (std::size_t i = 0; i < positives; ++i) out.push_back(i);
  std::bernoulli_distribution keep(p);
  for (std::size_t i = 0; i < negatives; ++i) {
    if (keep(rng)) out.push_back(positives + i);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

void SelectionConfig::validate() const {
  if (!(sent_threshold > 0.0 && sent_threshold < 1.0)) {
    throw ValidationError("sentence threshold must lie in (0, 1)");
  }
  if (max_evidence < 1) throw ValidationError("max evidence must be at least 1");
}

SelectionResult select_sentences(std::string_view claim,
                                 const std::vector<std::string>& retrieved,
                                 const corpus::Corpus& corpus, const nsmn::PairScorer& scorer,
                                 const SelectionConfig& config) {
  config.validate();
  const auto claim_tokens = text::tokenize(claim);
  SelectionResult out;
  std::set<std::string> seen;
  for (const auto& id : retrieved) {
    if (!seen.insert(id).second) continue;
    const corpus::Document* d = corpus.find(id);
    if (d == nullptr) throw ValidationError("retrieved unknown document '" + id + "'");
    for (std::size_t s = 1; s < d->sentences.size(); ++s) {
      const nsmn::MatchResult r = scorer.score(text::tokenize(d->sentences[s]), claim_tokens);
      if (r.p < config.sent_threshold) continue;
      out.pool.push_back({id, static_cast<int>(s), r.m_plus, r.p, d->sentences[s]});
    }
  }
  std::sort(out.pool.begin(), out.pool.end(), [](const RankedSentence& a, const RankedSentence& b) {
    if (a.m_plus != b.m_plus) return a.m_plus > b.m_plus;
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    return a.sentence < b.sentence;
  });
  out.evidence.assign(out.pool.begin(),
                      out.pool.begin() + static_cast<std::ptrdiff_t>(
                                             std::min(out.pool.size(), config.max_evidence)));
  return out;
}

nsmn::MatchResult TfidfScorer::score(const std::vector<std::string>& evidence,
                                     const std::vector<std::string>& claim) const {
  auto terms = [](const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
      if (!text::is_punctuation_token(t)) out.push_back(text::to_lower(t));
    }
    return out;
  };
  const double c = corpus::cosine(corpus::tfidf_vector(terms(evidence), *index_),
                                  corpus::tfidf_vector(terms(claim), *index_));
  nsmn::MatchResult r;
  r.scores = {c, 0.0};
  r.m_plus = c;
  r.p = c;
  return r;
}

SentencePairs make_sent_training_pairs(const std::vector<corpus::ClaimRecord>& claims,
                                       const std::vector<std::vector<std::string>>& retrieved,
                                       const corpus::Corpus& corpus) {
  if (retrieved.size() != claims.size()) {
    throw ValidationError("retrieval output does not line up with the claims");
  }
  SentencePairs out;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const auto& c = claims[i];
    std::set<corpus::EvidencePointer> gold;
    for (const auto& group : c.evidence) {
      for (const auto& ptr : group) {
        const corpus::Document* d = corpus.find(ptr.doc_id);
        if (d == nullptr || ptr.sentence < 1 ||
            static_cast<std::size_t>(ptr.sentence) >= d->sentences.size()) {
          throw ValidationError("claim " + std::to_string(c.id) + ": gold sentence (" +
                                ptr.doc_id + ", " + std::to_string(ptr.sentence) +
                                ") is not a body sentence of the corpus");
        }
        if (gold.insert(ptr).second) {
          out.positives.push_back({c.id, c.claim, ptr.doc_id, ptr.sentence});
        }
      }
    }
    std::set<std::string> seen;
    for (const auto& id : retrieved[i]) {
      if (!seen.insert(id).second) continue;
      const corpus::Document* d = corpus.find(id);
      if (d == nullptr) throw ValidationError("retrieved unknown document '" + id + "'");
      for (std::size_t s = 1; s < d->sentences.size(); ++s) {
        if (gold.count({id, static_cast<int>(s)}) != 0) continue;
        out.negatives.push_back({c.id, c.claim, id, static_cast<int>(s)});
      }
    }
  }
  return out;
}

nsmn::TrainReport train_snsmn(const SentencePairs& pairs, const corpus::Corpus& corpus,
                              nsmn::Model& model, const nsmn::TrainConfig& config, bool annealed,
                              const nsmn::DevMetric& dev, std::ostream* log) {
  if (pairs.positives.empty()) throw TrainingDataError("no positive sentence pairs");
  if (model.config().head != nsmn::Head::extraction) {
    throw ValidationError("sentence model needs the extraction head");
  }
  // Sentences and claims recur across pairs; prepare each text once.
  std::unordered_map<std::string, nsmn::SequenceInput> cache;
  auto input = [&](const std::string& key, const std::string& text_value) -> const nsmn::SequenceInput& {
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, model.prepare(text::tokenize(text_value))).first;
    return it->second;
  };
  std::vector<nsmn::Example> examples;
  examples.reserve(pairs.positives.size() + pairs.negatives.size());
  auto add = [&](const SentencePair& p, std::size_t label) {
    const corpus::Document* d = corpus.find(p.doc_id);
    const std::string& sentence = d->sentences.at(static_cast<std::size_t>(p.sentence));
    examples.push_back({input("s\t" + p.doc_id + "\t" + std::to_string(p.sentence), sentence),
                        input("c\t" + p.claim, p.claim), label});
  };
  for (const auto& p : pairs.positives) add(p, 0);
  for (const auto& p : pairs.negatives) add(p, 1);

  const std::size_t n_pos = pairs.positives.size(), n_neg = pairs.negatives.size();
  nsmn::EpochPlanner planner = [=](std::size_t epoch, std::mt19937_64& rng) {
    nsmn::EpochPlan plan;
    plan.sampling_p = annealed ? annealed_probability(epoch) : 1.0;
    plan.order = sample_epoch_indices(n_pos, n_neg, *plan.sampling_p, rng);
    return plan;
  };
  return nsmn::train_model(model, examples, config, planner, dev, log);
}

}  // namespace fever::selection
