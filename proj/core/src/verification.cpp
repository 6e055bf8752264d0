#include "fever/verification/verification.hpp"

#include <algorithm>
#include <set>

#include "fever/error.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::verification {

Premise concat_evidence(const std::vector<EvidenceItem>& evidence) {
  Premise out;
  for (const auto& item : evidence) {
    for (auto& t : text::tokenize(item.text)) {
      out.tokens.push_back(std::move(t));
      out.srs.push_back({item.doc_p, item.sent_p});
    }
  }
  return out;
}

std::pair<nsmn::SequenceInput, nsmn::SequenceInput> prepare_pair(
    std::string_view claim, const std::vector<EvidenceItem>& evidence, const nsmn::Model& model,
    const Ontology& graph, const FeatureConfig& features) {
  if (!(model.config().features == features.layout())) {
    throw ValidationError("feature set '" + features_string(features) +
                          "' does not match the model's feature layout");
  }
  const Premise premise = concat_evidence(evidence);
  const auto claim_tokens = text::tokenize(claim);
  if (premise.tokens.empty() && claim_tokens.empty()) {
    throw ValidationError("verification needs a claim or some evidence");
  }
  num::Tensor u_features, v_features;
  if (!premise.tokens.empty()) {
    u_features = token_features(premise.tokens, claim_tokens, Side::evidence, premise.srs, graph,
                                features);
  }
  if (!claim_tokens.empty()) {
    v_features = token_features(claim_tokens, premise.tokens, Side::claim, {}, graph, features);
  }
  return {model.prepare(premise.tokens, u_features), model.prepare(claim_tokens, v_features)};
}

Prediction verify(std::int64_t claim_id, std::string_view claim,
                  const std::vector<EvidenceItem>& evidence, const nsmn::Model& model,
                  const Ontology& graph, const FeatureConfig& features) {
  if (model.config().head != nsmn::Head::verification) {
    throw ValidationError("claim verification needs the verification head");
  }
  const auto [u, v] = prepare_pair(claim, evidence, model, graph, features);
  const nsmn::MatchResult r = model.score_inputs(u, v);
  Prediction p;
  p.claim_id = claim_id;
  p.label = r.label();
  p.scores = r.scores;
  for (const auto& item : evidence) p.evidence.push_back(item.pointer());
  return p;
}

std::vector<VerificationExample> build_verification_training(
    const std::vector<corpus::ClaimRecord>& claims,
    const std::vector<std::vector<EvidenceItem>>& pools, const corpus::Corpus& corpus,
    const nsmn::PairScorer* doc_scorer, const nsmn::PairScorer* sentence_scorer,
    std::uint64_t seed) {
  if (pools.size() != claims.size()) {
    throw ValidationError("candidate pools do not line up with the claims");
  }
  std::vector<VerificationExample> out;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const auto& c = claims[i];
    VerificationExample ex{c.id, c.claim, {}, c.label};
    if (c.label == corpus::Label::nei) {
      std::seed_seq seq{seed, static_cast<std::uint64_t>(c.id)};
      std::mt19937_64 rng(seq);
      ex.evidence = sample_nei_evidence(pools[i], rng);
      if (ex.evidence.empty()) continue;
    } else {
      const auto claim_tokens = text::tokenize(c.claim);
      for (const auto& ptr : c.evidence.front()) {
        const corpus::Document* d = corpus.find(ptr.doc_id);
        if (d == nullptr || ptr.sentence < 0 ||
            static_cast<std::size_t>(ptr.sentence) >= d->sentences.size()) {
          throw ValidationError("claim " + std::to_string(c.id) + ": unresolvable gold evidence");
        }
        EvidenceItem item{ptr.doc_id, ptr.sentence, 1.0, 1.0, 0.0,
                          d->sentences[static_cast<std::size_t>(ptr.sentence)]};
        if (doc_scorer != nullptr && corpus::is_disambiguative(d->title)) {
          item.doc_p = doc_scorer->score(corpus.doc_repr(*d), claim_tokens).p;
        }
        if (sentence_scorer != nullptr) {
          const auto r = sentence_scorer->score(text::tokenize(item.text), claim_tokens);
          item.sent_p = r.p;
          item.m_plus = r.m_plus;
        }
        ex.evidence.push_back(std::move(item));
      }
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<nsmn::Example> verification_examples(const std::vector<VerificationExample>& data,
                                                 const nsmn::Model& model, const Ontology& graph,
                                                 const FeatureConfig& features) {
  std::vector<nsmn::Example> out;
  out.reserve(data.size());
  for (const auto& d : data) {
    auto [u, v] = prepare_pair(d.claim, d.evidence, model, graph, features);
    out.push_back({std::move(u), std::move(v), static_cast<std::size_t>(d.label)});
  }
  return out;
}

double label_accuracy(const std::vector<nsmn::Example>& examples, const nsmn::Model& model) {
  if (examples.empty()) return 0.0;
  std::size_t right = 0;
  for (const auto& ex : examples) {
    if (static_cast<std::size_t>(model.score_inputs(ex.u, ex.v).label()) == ex.label) ++right;
  }
  return static_cast<double>(right) / static_cast<double>(examples.size());
}

nsmn::TrainReport train_vnsmn(const std::vector<VerificationExample>& data, nsmn::Model& model,
                              const Ontology& graph, const FeatureConfig& features,
                              const nsmn::TrainConfig& config,
                              const std::vector<VerificationExample>& dev, std::ostream* log) {
  if (model.config().head != nsmn::Head::verification) {
    throw ValidationError("claim verification needs the verification head");
  }
  std::set<corpus::Label> labels;
  for (const auto& d : data) labels.insert(d.label);
  if (labels.size() != corpus::kLabelCount) {
    throw TrainingDataError("verification training needs examples of all three labels");
  }
  const auto examples = verification_examples(data, model, graph, features);
  nsmn::DevMetric metric;
  std::vector<nsmn::Example> dev_examples;
  if (!dev.empty()) {
    dev_examples = verification_examples(dev, model, graph, features);
    metric = [&dev_examples](const nsmn::Model& m) { return label_accuracy(dev_examples, m); };
  }
  return nsmn::train_model(model, examples, config, {}, metric, log);
}

std::vector<EvidenceItem> enhance_evidence(std::string_view claim,
                                           const std::vector<EvidenceItem>& evidence,
                                           const corpus::Corpus& corpus,
                                           const nsmn::PairScorer* doc_scorer,
                                           const nsmn::PairScorer& sentence_scorer,
                                           const retrieval::RetrievalConfig& retrieval,
                                           const selection::SelectionConfig& selection) {
  std::set<corpus::EvidencePointer> present;
  std::set<std::string> linked;
  for (const auto& item : evidence) {
    present.insert(item.pointer());
    const corpus::Document* d = corpus.find(item.doc_id);
    if (d == nullptr || item.sentence < 0 ||
        static_cast<std::size_t>(item.sentence) >= d->links.size()) {
      continue;
    }
    for (const auto& target : d->links[static_cast<std::size_t>(item.sentence)]) {
      if (corpus.find(target) != nullptr) linked.insert(target);
    }
  }
  if (linked.empty()) return evidence;

  const auto claim_tokens = text::tokenize(claim);
  std::optional<EvidenceItem> best;
  for (const auto& id : linked) {
    const corpus::Document& d = *corpus.find(id);
    double doc_p = 1.0;
    if (doc_scorer != nullptr && corpus::is_disambiguative(d.title)) {
      doc_p = doc_scorer->score(corpus.doc_repr(d), claim_tokens).p;
      if (doc_p < retrieval.doc_threshold) continue;
    }
    for (std::size_t s = 1; s < d.sentences.size(); ++s) {
      if (present.count({id, static_cast<int>(s)}) != 0) continue;
      const auto r = sentence_scorer.score(text::tokenize(d.sentences[s]), claim_tokens);
      if (r.p < selection.sent_threshold) continue;
      if (!best || r.p > best->sent_p || (r.p == best->sent_p && r.m_plus > best->m_plus)) {
        best = EvidenceItem{id, static_cast<int>(s), doc_p, r.p, r.m_plus, d.sentences[s]};
      }
    }
  }
  if (!best) return evidence;

  std::vector<EvidenceItem> out = evidence;
  const std::size_t cap = std::min(kMaxEvidence, selection.max_evidence);
  if (out.size() >= cap) {
    // lowest m_plus among the originals; the later one on ties
    std::size_t victim = 0;
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (out[i].m_plus <= out[victim].m_plus) victim = i;
    }
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(victim));
    while (out.size() >= cap) out.pop_back();
  }
  out.push_back(std::move(*best));
  return out;
}

}  // namespace fever::verification
