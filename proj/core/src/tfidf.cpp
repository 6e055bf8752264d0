#include "fever/corpus/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fever/text/tokenizer.hpp"

namespace fever::corpus {

SparseVector tfidf_vector(const std::vector<std::string>& terms, const CorpusIndex& index) {
  std::map<std::string, std::size_t> tf;
  for (const auto& t : terms) ++tf[t];
  SparseVector v;
  double sq = 0.0;
  for (const auto& [term, count] : tf) {
    const double w = std::log(1.0 + static_cast<double>(count)) * index.idf(term);
    sq += w * w;
    // out-of-vocabulary terms only contribute to the norm
    if (const auto id = index.term_id(term)) v.entries.emplace_back(*id, w);
  }
  std::sort(v.entries.begin(), v.entries.end());
  v.norm = std::sqrt(sq);
  return v;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() && j < b.entries.size()) {
    if (a.entries[i].first == b.entries[j].first) {
      dot += a.entries[i].second * b.entries[j].second;
      ++i;
      ++j;
    } else if (a.entries[i].first < b.entries[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return std::clamp(dot / (a.norm * b.norm), 0.0, 1.0);
}

std::vector<ScoredDoc> tfidf_rank(std::string_view claim, const std::vector<std::string>& candidates,
                                  const Corpus& corpus) {
  const SparseVector q = tfidf_vector(text::content_terms(claim), corpus.index());
  std::vector<ScoredDoc> out;
  for (const auto& id : candidates) {
    const auto ix = corpus.index_of(id);
    out.push_back({id, ix ? cosine(q, corpus.index().doc_vector(*ix)) : 0.0});
  }
  std::sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  return out;
}

double tfidf_similarity(std::string_view claim, std::string_view text, const CorpusIndex& index) {
  return cosine(tfidf_vector(text::content_terms(claim), index),
                tfidf_vector(text::content_terms(text), index));
}

std::vector<std::string> pageview_rank(const std::vector<std::string>& candidates,
                                       const Corpus& corpus) {
  std::vector<std::pair<std::int64_t, std::string>> scored;
  for (const auto& id : candidates) {
    const Document* d = corpus.find(id);
    scored.emplace_back(d ? d->pageview : 0, id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (auto& [pv, id] : scored) out.push_back(std::move(id));
  return out;
}

}  // namespace fever::corpus
