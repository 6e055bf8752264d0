#include "fever/corpus/keyword.hpp"

#include <algorithm>

#include "fever/text/singularize.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::corpus {

std::set<std::string> exact_match_tokens(const std::vector<std::string>& tokens,
                                         const Corpus& corpus) {
  std::set<std::string> out;
  const CorpusIndex& ix = corpus.index();
  auto collect = [&](const std::vector<DocIndex>* docs) {
    if (docs == nullptr) return;
    for (DocIndex d : *docs) out.insert(corpus.document(d).id);
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t max_len = std::min(CorpusIndex::kMaxSpanTokens, tokens.size() - i);
    for (std::size_t len = 1; len <= max_len; ++len) {
      const std::string key = title_key(tokens, i, i + len);
      collect(ix.exact(key));
      collect(ix.stripped(key));
    }
  }
  for (const auto& lt : ix.long_titles()) {
    if (lt.token_count > tokens.size()) continue;
    for (std::size_t i = 0; i + lt.token_count <= tokens.size(); ++i) {
      if (title_key(tokens, i, i + lt.token_count) == lt.key) {
        out.insert(corpus.document(lt.doc).id);
        break;
      }
    }
  }
  return out;
}

std::set<std::string> exact_match(std::string_view claim, const Corpus& corpus) {
  return exact_match_tokens(text::tokenize(claim), corpus);
}

std::optional<std::string> first_article_elimination(std::string_view claim) {
  std::size_t start = 0;
  while (start < claim.size() && std::isspace(static_cast<unsigned char>(claim[start]))) ++start;
  std::size_t end = start;
  while (end < claim.size() && !std::isspace(static_cast<unsigned char>(claim[end]))) ++end;
  const std::string first = text::to_lower(claim.substr(start, end - start));
  if (first != "a" && first != "an" && first != "the") return std::nullopt;
  while (end < claim.size() && std::isspace(static_cast<unsigned char>(claim[end]))) ++end;
  return std::string(claim.substr(end));
}

std::vector<std::string> singularize_claim(const std::vector<std::string>& tokens) {
  return text::singularize_tokens(tokens);
}

KeywordMatch keyword_match_traced(std::string_view claim, const Corpus& corpus) {
  KeywordMatch result;
  const auto tokens = text::tokenize(claim);
  result.doc_ids = exact_match_tokens(tokens, corpus);
  if (const auto without_article = first_article_elimination(claim)) {
    result.article_rule_applied = true;
    auto more = exact_match(*without_article, corpus);
    result.doc_ids.insert(more.begin(), more.end());
  }
  if (result.doc_ids.empty()) {
    result.singular_rule_applied = true;
    result.doc_ids = exact_match_tokens(singularize_claim(tokens), corpus);
  }
  return result;
}

std::set<std::string> keyword_match(std::string_view claim, const Corpus& corpus) {
  return keyword_match_traced(claim, corpus).doc_ids;
}

}  // namespace fever::corpus
