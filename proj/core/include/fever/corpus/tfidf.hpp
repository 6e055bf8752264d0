#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fever/corpus/corpus.hpp"

namespace fever::corpus {

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;
};

/// Weights ln(1 + tf)·idf with idf = ln((N + 1)/(df + 1)) + 1.
SparseVector tfidf_vector(const std::vector<std::string>& terms, const CorpusIndex& index);
double cosine(const SparseVector& a, const SparseVector& b);

/// Candidates by cosine similarity between claim and title + first sentence,
/// descending; equal scores ordered by doc id.
std::vector<ScoredDoc> tfidf_rank(std::string_view claim, const std::vector<std::string>& candidates,
                                  const Corpus& corpus);

/// Cosine between a claim and arbitrary text under the corpus idf.
double tfidf_similarity(std::string_view claim, std::string_view text, const CorpusIndex& index);

/// Candidates by descending pageview, ties by doc id. Unknown ids count 0.
std::vector<std::string> pageview_rank(const std::vector<std::string>& candidates,
                                       const Corpus& corpus);

}  // namespace fever::corpus
