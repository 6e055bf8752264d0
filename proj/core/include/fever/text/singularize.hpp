#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fever::text {

/// Rule-based English singularizer. Rules, applied to the lowercased word
/// and first match wins:
///
///   | condition                                   | action            |
///   |---------------------------------------------|-------------------|
///   | length <= 3, or in the invariant list       | unchanged         |
///   | irregular table (men, children, wolves, ...)| table lookup      |
///   | ends in "ss", "us" or "is"                  | unchanged         |
///   | ends in "ies", length > 4                   | "ies" -> "y"      |
///   |   except -ie words (movies, cookies, ...)   | drop "s"          |
///   | ends in "es" after s/x/z/ch/sh              | drop "es"         |
///   |   "ses" words outside the -ses table        | drop "s"          |
///   | ends in "oes", not in the -oe list          | drop "es"         |
///   | ends in "s"                                 | drop "s"          |
///
/// Case of the retained prefix is preserved ("Dogs" -> "Dog").
std::string singularize(std::string_view word);

std::vector<std::string> singularize_tokens(const std::vector<std::string>& tokens);

}  // namespace fever::text
