#include "fever/retrieval/retrieval.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "fever/corpus/keyword.hpp"
#include "fever/corpus/tfidf.hpp"
#include "fever/error.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::retrieval {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::km: return "km";
    case Strategy::km_tfidf: return "km+tfidf";
    case Strategy::km_pageview: return "km+pageview";
    case Strategy::km_dnsmn: return "km+dnsmn";
    case Strategy::km_pageview_dnsmn: return "km+pageview+dnsmn";
  }
  return "km";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::km, Strategy::km_tfidf, Strategy::km_pageview, Strategy::km_dnsmn,
                     Strategy::km_pageview_dnsmn}) {
    if (strategy_name(s) == name) return s;
  }
  throw ValidationError("unknown retrieval strategy '" + std::string(name) + "'");
}

bool uses_dnsmn(Strategy s) { return s == Strategy::km_dnsmn || s == Strategy::km_pageview_dnsmn; }

void RetrievalConfig::validate() const {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (!(doc_threshold > 0.0 && doc_threshold < 1.0)) {
    throw ValidationError("document threshold must lie in (0, 1)");
  }
}

namespace {

std::vector<RankedDoc> score_and_filter(std::string_view claim,
                                        const std::vector<std::string>& pool,
                                        const corpus::Corpus& corpus,
                                        const nsmn::PairScorer& scorer,
                                        const RetrievalConfig& config) {
  const auto claim_tokens = text::tokenize(claim);
  std::vector<RankedDoc> scored;
  for (const auto& id : pool) {
    const nsmn::MatchResult r = scorer.score(corpus.doc_repr(*corpus.find(id)), claim_tokens);
    if (r.p < config.doc_threshold) continue;
    scored.push_back({id, Priority::ranked, r.m_plus, r.p});
  }
  std::sort(scored.begin(), scored.end(), [](const RankedDoc& a, const RankedDoc& b) {
    if (a.m_plus != b.m_plus) return a.m_plus > b.m_plus;
    return a.doc_id < b.doc_id;
  });
  if (scored.size() > config.k) scored.resize(config.k);
  return scored;
}

}  // namespace

std::vector<RankedDoc> retrieve_documents(std::string_view claim, const corpus::Corpus& corpus,
                                          const nsmn::PairScorer* scorer,
                                          const RetrievalConfig& config) {
  config.validate();
  if (uses_dnsmn(config.strategy) && scorer == nullptr) {
    throw ValidationError("strategy " + std::string(strategy_name(config.strategy)) +
                          " needs a document model");
  }
  std::vector<RankedDoc> out;
  std::vector<std::string> disambiguative;
  for (const auto& id : corpus::keyword_match(claim, corpus)) {
    if (corpus::is_disambiguative(corpus.find(id)->title)) {
      disambiguative.push_back(id);
    } else {
      out.push_back({id, Priority::guaranteed, 0.0, 1.0});
    }
  }
  if (disambiguative.empty()) return out;

  auto append_unscored = [&out](const std::vector<std::string>& ids, std::size_t limit) {
    for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
      out.push_back({ids[i], Priority::ranked, 0.0, 1.0});
    }
  };

  switch (config.strategy) {
    case Strategy::km:
      if (disambiguative.size() > config.disambiguative_cap) {
        std::seed_seq seq{config.seed, nsmn::fnv1a(claim)};
        std::mt19937_64 rng(seq);
        std::shuffle(disambiguative.begin(), disambiguative.end(), rng);
        disambiguative.resize(config.disambiguative_cap);
        std::sort(disambiguative.begin(), disambiguative.end());
      }
      append_unscored(disambiguative, disambiguative.size());
      break;
    case Strategy::km_tfidf: {
      const auto ranked = corpus::tfidf_rank(claim, disambiguative, corpus);
      for (std::size_t i = 0; i < ranked.size() && i < config.k; ++i) {
        out.push_back({ranked[i].doc_id, Priority::ranked, ranked[i].score, 1.0});
      }
      break;
    }
    case Strategy::km_pageview:
      append_unscored(corpus::pageview_rank(disambiguative, corpus), config.k);
      break;
    case Strategy::km_dnsmn: {
      const auto ranked = score_and_filter(claim, disambiguative, corpus, *scorer, config);
      out.insert(out.end(), ranked.begin(), ranked.end());
      break;
    }
    case Strategy::km_pageview_dnsmn: {
      auto pool = corpus::pageview_rank(disambiguative, corpus);
      if (pool.size() > 2 * config.k) pool.resize(2 * config.k);
      const auto ranked = score_and_filter(claim, pool, corpus, *scorer, config);
      out.insert(out.end(), ranked.begin(), ranked.end());
      break;
    }
  }
  return out;
}

std::vector<DocPair> make_doc_training_pairs(const std::vector<corpus::ClaimRecord>& claims,
                                             const corpus::Corpus& corpus) {
  std::vector<DocPair> pairs;
  for (const auto& c : claims) {
    std::set<std::string> gold_docs;
    for (const auto& group : c.evidence) {
      for (const auto& ptr : group) gold_docs.insert(ptr.doc_id);
    }
    for (const auto& id : corpus::keyword_match(c.claim, corpus)) {
      if (!corpus::is_disambiguative(corpus.find(id)->title)) continue;
      pairs.push_back({c.id, c.claim, id, gold_docs.count(id) != 0});
    }
  }
  return pairs;
}

std::vector<nsmn::Example> doc_examples(const std::vector<DocPair>& pairs,
                                        const corpus::Corpus& corpus, const nsmn::Model& model) {
  std::vector<nsmn::Example> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const corpus::Document* d = corpus.find(p.doc_id);
    if (d == nullptr) throw ValidationError("unknown document '" + p.doc_id + "'");
    out.push_back({model.prepare(corpus.doc_repr(*d)), model.prepare(text::tokenize(p.claim)),
                   p.positive ? 0u : 1u});
  }
  return out;
}

double pair_accuracy(const std::vector<nsmn::Example>& examples, const nsmn::Model& model) {
  if (examples.empty()) return 0.0;
  std::size_t right = 0;
  for (const auto& ex : examples) {
    const bool predicted_positive = model.score_inputs(ex.u, ex.v).p >= 0.5;
    if (predicted_positive == (ex.label == 0)) ++right;
  }
  return static_cast<double>(right) / static_cast<double>(examples.size());
}

nsmn::TrainReport train_dnsmn(const std::vector<DocPair>& pairs, const corpus::Corpus& corpus,
                              nsmn::Model& model, const nsmn::TrainConfig& config,
                              const std::vector<DocPair>& dev, std::ostream* log) {
  if (pairs.empty()) throw TrainingDataError("no document training pairs");
  if (model.config().head != nsmn::Head::extraction) {
    throw ValidationError("document model needs the extraction head");
  }
  const auto examples = doc_examples(pairs, corpus, model);
  nsmn::DevMetric metric;
  std::vector<nsmn::Example> dev_examples;
  if (!dev.empty()) {
    dev_examples = doc_examples(dev, corpus, model);
    metric = [&dev_examples](const nsmn::Model& m) { return pair_accuracy(dev_examples, m); };
  }
  return nsmn::train_model(model, examples, config, {}, metric, log);
}

}  // namespace fever::retrieval
