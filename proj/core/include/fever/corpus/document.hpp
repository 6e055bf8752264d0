#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fever::corpus {

/// One corpus page. sentences[0] is the title; links[i] lists the ids
/// hyperlinked from sentence i.
struct Document {
  std::string id;
  std::string title;
  std::vector<std::string> sentences;
  std::vector<std::vector<std::string>> links;
  std::int64_t pageview = 0;

  std::size_t body_sentence_count() const noexcept {
    return sentences.empty() ? 0 : sentences.size() - 1;
  }
};

/// True iff the title ends with " (...)", e.g. "Savages (band)".
bool is_disambiguative(std::string_view title);

/// Title with a trailing " (...)" removed; other titles are returned as is.
std::string strip_parenthetical(std::string_view title);

}  // namespace fever::corpus
