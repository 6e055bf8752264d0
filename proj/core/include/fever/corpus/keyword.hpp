#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fever/corpus/corpus.hpp"

namespace fever::corpus {

/// Documents whose title, or title with its parenthetical stripped, equals
/// some token span of the claim under the first-letter case rule.
std::set<std::string> exact_match(std::string_view claim, const Corpus& corpus);
std::set<std::string> exact_match_tokens(const std::vector<std::string>& tokens,
                                         const Corpus& corpus);

/// Claim without a leading "a", "an" or "the" (any case); nullopt if the
/// claim does not start with one.
std::optional<std::string> first_article_elimination(std::string_view claim);

std::vector<std::string> singularize_claim(const std::vector<std::string>& tokens);

struct KeywordMatch {
  std::set<std::string> doc_ids;
  bool article_rule_applied = false;
  bool singular_rule_applied = false;
};

/// Three-rule cascade: exact match; if the claim leads with an article, the
/// same match on the claim without it (results are unioned); if nothing has
/// matched yet, exact match on the singularized claim.
KeywordMatch keyword_match_traced(std::string_view claim, const Corpus& corpus);
std::set<std::string> keyword_match(std::string_view claim, const Corpus& corpus);

}  // namespace fever::corpus
