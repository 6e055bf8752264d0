#include "fever/text/tokenizer.hpp"

#include <algorithm>
#include <cctype>

namespace fever::text {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

void emit_chunk(std::string_view chunk, std::vector<std::string>& out) {
  std::size_t begin = 0, end = chunk.size();
  while (begin < end && is_punct(chunk[begin])) {
    out.emplace_back(1, chunk[begin]);
    ++begin;
  }
  std::size_t tail = end;
  while (tail > begin && is_punct(chunk[tail - 1])) --tail;
  if (tail > begin) out.emplace_back(chunk.substr(begin, tail - begin));
  for (std::size_t i = tail; i < end; ++i) out.emplace_back(1, chunk[i]);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) emit_chunk(text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

bool is_punctuation_token(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), is_punct);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += sep;
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> content_terms(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& tok : tokenize(text)) {
    if (!is_punctuation_token(tok)) out.push_back(to_lower(tok));
  }
  return out;
}

}  // namespace fever::text
