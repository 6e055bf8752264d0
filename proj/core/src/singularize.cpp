#include "fever/text/singularize.hpp"

#include <string>
#include <unordered_map>
#include <unordered_set>

#include "fever/text/tokenizer.hpp"

namespace fever::text {
namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const std::unordered_set<std::string>& invariant_words() {
  static const std::unordered_set<std::string> words = {
      "series", "species", "news", "means", "always", "perhaps", "does", "this",
      "thus", "whereas", "sometimes", "besides", "towards", "afterwards", "across",
      "unless", "lens", "chaos", "aircraft", "sheep", "deer", "fish", "politics",
      "physics", "mathematics", "economics", "athletics", "ethics"};
  return words;
}

const std::unordered_map<std::string, std::string>& irregular_words() {
  static const std::unordered_map<std::string, std::string> words = {
      {"men", "man"},       {"women", "woman"},   {"children", "child"}, {"people", "person"},
      {"feet", "foot"},     {"teeth", "tooth"},   {"mice", "mouse"},     {"geese", "goose"},
      {"wolves", "wolf"},   {"knives", "knife"},  {"wives", "wife"},     {"lives", "life"},
      {"leaves", "leaf"},   {"halves", "half"},   {"shelves", "shelf"},  {"thieves", "thief"},
      {"calves", "calf"},   {"loaves", "loaf"},   {"buses", "bus"},      {"gases", "gas"},
      {"lenses", "lens"},   {"bonuses", "bonus"}, {"viruses", "virus"},  {"campuses", "campus"},
      {"statuses", "status"}, {"censuses", "census"}, {"atlases", "atlas"},
      {"aliases", "alias"}, {"focuses", "focus"}};
  return words;
}

// -ies words whose singular ends in -ie.
const std::unordered_set<std::string>& ie_words() {
  static const std::unordered_set<std::string> words = {
      "movies", "cookies", "zombies", "calories", "rookies", "hippies", "brownies", "eyries"};
  return words;
}

// -oes words whose singular ends in -oe.
const std::unordered_set<std::string>& oe_words() {
  static const std::unordered_set<std::string> words = {
      "shoes", "toes", "canoes", "oboes", "hoes", "foes", "floes", "sloes"};
  return words;
}

std::string replace_suffix(std::string_view word, std::size_t drop, std::string_view add) {
  std::string out(word.substr(0, word.size() - drop));
  out += add;
  return out;
}

}  // namespace

std::string singularize(std::string_view word) {
  const std::string lower = to_lower(word);
  if (lower.size() <= 3 || invariant_words().count(lower) != 0) return std::string(word);
  if (auto it = irregular_words().find(lower); it != irregular_words().end()) {
    // keep the caller's leading capital
    std::string out = it->second;
    if (!word.empty() && word[0] != lower[0]) out[0] = word[0];
    return out;
  }
  if (ends_with(lower, "ss") || ends_with(lower, "us") || ends_with(lower, "is")) {
    return std::string(word);
  }
  if (ends_with(lower, "ies") && lower.size() > 4) {
    if (ie_words().count(lower) != 0) return replace_suffix(word, 1, "");
    return replace_suffix(word, 3, "y");
  }
  if (ends_with(lower, "es")) {
    const std::string_view stem = std::string_view(lower).substr(0, lower.size() - 2);
    if (ends_with(stem, "ss") || ends_with(stem, "x") || ends_with(stem, "z") ||
        ends_with(stem, "ch") || ends_with(stem, "sh")) {
      return replace_suffix(word, 2, "");
    }
    if (ends_with(stem, "o") && oe_words().count(lower) == 0) return replace_suffix(word, 2, "");
  }
  if (ends_with(lower, "s")) return replace_suffix(word, 1, "");
  return std::string(word);
}

std::vector<std::string> singularize_tokens(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(singularize(t));
  return out;
}

}  // namespace fever::text
