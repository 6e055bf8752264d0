#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fever::text {

/// Splits on ASCII whitespace, then peels leading and trailing punctuation
/// off each chunk; every peeled character becomes its own token.
/// "(band)" -> "(", "band", ")"; "U.S." -> "U.S", "."; "1,000" stays whole.
std::vector<std::string> tokenize(std::string_view text);

bool is_punctuation_token(std::string_view token);
std::string to_lower(std::string_view s);
std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

/// Lowercased tokens with punctuation-only tokens removed.
std::vector<std::string> content_terms(std::string_view text);

}  // namespace fever::text
