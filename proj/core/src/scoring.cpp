#include "fever/scoring/scoring.hpp"

#include <algorithm>
#include <set>

#include "fever/error.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::scoring {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

const std::vector<corpus::EvidencePointer>& evidence_of(
    const std::map<std::int64_t, std::vector<corpus::EvidencePointer>>& evidence,
    std::int64_t id) {
  static const std::vector<corpus::EvidencePointer> none;
  auto it = evidence.find(id);
  return it == evidence.end() ? none : it->second;
}

std::map<std::int64_t, std::vector<corpus::EvidencePointer>> evidence_map(
    const PredictionMap& predictions) {
  std::map<std::int64_t, std::vector<corpus::EvidencePointer>> out;
  for (const auto& [id, p] : predictions) out[id] = p.evidence;
  return out;
}

}  // namespace

PredictionMap index_predictions(const std::vector<PredictionRecord>& predictions) {
  PredictionMap out;
  for (const auto& p : predictions) {
    if (!out.emplace(p.id, p).second) {
      throw ValidationError("duplicate prediction for claim " + std::to_string(p.id));
    }
  }
  return out;
}

bool evidence_covered(const std::vector<corpus::EvidencePointer>& predicted,
                      const std::vector<corpus::EvidenceGroup>& gold) {
  if (predicted.size() > kMaxPredictedEvidence) {
    throw ValidationError("predicted evidence has " + std::to_string(predicted.size()) +
                          " sentences, at most 5 allowed");
  }
  if (gold.empty()) return true;
  const std::set<corpus::EvidencePointer> have(predicted.begin(), predicted.end());
  return std::any_of(gold.begin(), gold.end(), [&have](const corpus::EvidenceGroup& g) {
    return std::all_of(g.begin(), g.end(),
                       [&have](const corpus::EvidencePointer& p) { return have.count(p) != 0; });
  });
}

double fever_score(const PredictionMap& predictions, const std::vector<corpus::ClaimRecord>& gold,
                   std::size_t* missing) {
  std::size_t right = 0, absent = 0;
  for (const auto& c : gold) {
    auto it = predictions.find(c.id);
    if (it == predictions.end()) {
      ++absent;
      continue;
    }
    const PredictionRecord& p = it->second;
    if (p.label != c.label) continue;
    if (c.label == corpus::Label::nei || evidence_covered(p.evidence, c.evidence)) ++right;
  }
  if (missing != nullptr) *missing = absent;
  return ratio(right, gold.size());
}

double ofever(const std::map<std::int64_t, std::vector<corpus::EvidencePointer>>& evidence,
              const std::vector<corpus::ClaimRecord>& gold) {
  std::size_t covered = 0;
  for (const auto& c : gold) {
    if (evidence_covered(evidence_of(evidence, c.id), c.evidence)) ++covered;
  }
  return ratio(covered, gold.size());
}

double document_ofever(const std::map<std::int64_t, std::vector<std::string>>& retrieved,
                       const std::vector<corpus::ClaimRecord>& gold) {
  std::size_t covered = 0;
  for (const auto& c : gold) {
    if (c.evidence.empty()) {
      ++covered;
      continue;
    }
    auto it = retrieved.find(c.id);
    if (it == retrieved.end()) continue;
    const std::set<std::string> have(it->second.begin(), it->second.end());
    const bool any = std::any_of(c.evidence.begin(), c.evidence.end(), [&](const auto& g) {
      return std::all_of(g.begin(), g.end(),
                         [&](const corpus::EvidencePointer& p) { return have.count(p.doc_id); });
    });
    if (any) ++covered;
  }
  return ratio(covered, gold.size());
}

Prf evidence_prf(const std::map<std::int64_t, std::vector<corpus::EvidencePointer>>& evidence,
                 const std::vector<corpus::ClaimRecord>& gold) {
  std::size_t hits = 0, predicted = 0, relevant = 0;
  for (const auto& c : gold) {
    if (!c.verifiable()) continue;
    std::set<corpus::EvidencePointer> truth;
    for (const auto& g : c.evidence) truth.insert(g.begin(), g.end());
    const auto& ev = evidence_of(evidence, c.id);
    const std::set<corpus::EvidencePointer> pred(ev.begin(), ev.end());
    for (const auto& p : pred) hits += truth.count(p);
    predicted += pred.size();
    relevant += truth.size();
  }
  Prf out;
  out.precision = ratio(hits, predicted);
  out.recall = ratio(hits, relevant);
  out.f1 = f1_of(out.precision, out.recall);
  return out;
}

double label_accuracy(const PredictionMap& predictions,
                      const std::vector<corpus::ClaimRecord>& gold) {
  std::size_t right = 0;
  for (const auto& c : gold) {
    auto it = predictions.find(c.id);
    if (it != predictions.end() && it->second.label == c.label) ++right;
  }
  return ratio(right, gold.size());
}

std::array<double, 3> per_label_f1(const PredictionMap& predictions,
                                   const std::vector<corpus::ClaimRecord>& gold) {
  std::array<std::size_t, 3> tp{}, fp{}, fn{};
  for (const auto& c : gold) {
    const auto g = static_cast<std::size_t>(c.label);
    auto it = predictions.find(c.id);
    if (it == predictions.end()) {
      ++fn[g];
      continue;
    }
    const auto p = static_cast<std::size_t>(it->second.label);
    if (p == g) {
      ++tp[g];
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = f1_of(ratio(tp[k], tp[k] + fp[k]), ratio(tp[k], tp[k] + fn[k]));
  }
  return out;
}

std::vector<corpus::ClaimRecord> difficult_subset(const std::vector<corpus::ClaimRecord>& records,
                                                  SubsetKind kind, const corpus::Corpus& corpus) {
  std::vector<corpus::ClaimRecord> out;
  for (const auto& c : records) {
    bool keep = false;
    if (kind == SubsetKind::doc) {
      for (const auto& g : c.evidence) {
        for (const auto& p : g) {
          const corpus::Document* d = corpus.find(p.doc_id);
          if (d != nullptr && corpus::is_disambiguative(d->title)) keep = true;
        }
      }
    } else if (c.verifiable()) {
      const auto claim_terms = text::content_terms(c.claim);
      const std::set<std::string> claim_set(claim_terms.begin(), claim_terms.end());
      keep = true;
      for (const auto& g : c.evidence) {
        for (const auto& p : g) {
          const corpus::Document* d = corpus.find(p.doc_id);
          if (d == nullptr || p.sentence < 0 ||
              static_cast<std::size_t>(p.sentence) >= d->sentences.size()) {
            throw ValidationError("claim " + std::to_string(c.id) + ": unresolvable evidence");
          }
          const auto terms = text::content_terms(d->sentences[static_cast<std::size_t>(p.sentence)]);
          const std::set<std::string> sent_set(terms.begin(), terms.end());
          std::size_t overlap = 0;
          for (const auto& t : sent_set) overlap += claim_set.count(t);
          if (overlap >= 2) keep = false;
        }
      }
    }
    if (keep) out.push_back(c);
  }
  return out;
}

ScoreReport score(const PredictionMap& predictions, const std::vector<corpus::ClaimRecord>& gold) {
  ScoreReport r;
  r.n_claims = gold.size();
  r.fever = fever_score(predictions, gold, &r.missing_predictions);
  const auto ev = evidence_map(predictions);
  r.ofever = ofever(ev, gold);
  r.label_accuracy = label_accuracy(predictions, gold);
  const Prf prf = evidence_prf(ev, gold);
  r.evidence_precision = prf.precision;
  r.evidence_recall = prf.recall;
  r.evidence_f1 = prf.f1;
  r.label_f1 = per_label_f1(predictions, gold);
  return r;
}

nlohmann::json to_json(const ScoreReport& r) {
  return nlohmann::json{
      {"n_claims", r.n_claims},
      {"fever", r.fever},
      {"ofever", r.ofever},
      {"label_accuracy", r.label_accuracy},
      {"evidence_precision", r.evidence_precision},
      {"evidence_recall", r.evidence_recall},
      {"evidence_f1", r.evidence_f1},
      {"label_f1", {{"SUPPORTS", r.label_f1[0]}, {"REFUTES", r.label_f1[1]},
                    {"NOT ENOUGH INFO", r.label_f1[2]}}},
      {"missing_predictions", r.missing_predictions}};
}

}  // namespace fever::scoring
