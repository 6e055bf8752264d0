#include "fever/nsmn/vocabulary.hpp"

#include <fstream>
#include <istream>
#include <regex>
#include <sstream>

#include "fever/error.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::nsmn {

std::uint64_t fnv1a(std::string_view data, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Vocabulary::Vocabulary() { add(std::string(kUnknownToken)); }

int Vocabulary::add(const std::string& word) {
  auto [it, inserted] = ids_.emplace(word, static_cast<int>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& token_lists,
                             std::size_t min_count) {
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const auto& tokens : token_lists) {
    for (const auto& t : tokens) {
      const std::string w = text::to_lower(t);
      if (counts[w]++ == 0) order.push_back(w);
    }
  }
  Vocabulary v;
  for (const auto& w : order) {
    if (counts[w] >= min_count) v.add(w);
  }
  return v;
}

Vocabulary Vocabulary::from_words(const std::vector<std::string>& words) {
  Vocabulary v;
  v.words_.clear();
  v.ids_.clear();
  for (const auto& w : words) v.add(w);
  if (v.words_.empty() || v.words_[0] != kUnknownToken) {
    throw ValidationError("vocabulary must start with the unknown-word token");
  }
  return v;
}

int Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(text::to_lower(token));
  return it == ids_.end() ? kUnknown : it->second;
}

std::optional<std::string> canonical_number(std::string_view token) {
  static const std::regex pattern(R"(([+-]?)\$?(\d{1,3}(?:,\d{3})+|\d+)(\.\d+)?%?)");
  if (token.empty() || token.size() > 32) return std::nullopt;
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(token.begin(), token.end(), m, pattern)) return std::nullopt;
  std::string out = m[1].str() == "-" ? "-" : "";
  for (char c : m[2].str()) {
    if (c != ',') out += c;
  }
  out += m[3].str();
  return out;
}

NumberVocab::NumberVocab() : forms_{"<unseen>"} { ids_.emplace(forms_[0], 0); }

NumberVocab NumberVocab::build(const std::vector<std::vector<std::string>>& token_lists) {
  NumberVocab v;
  for (const auto& tokens : token_lists) {
    for (const auto& t : tokens) {
      if (auto form = canonical_number(t)) {
        if (v.ids_.emplace(*form, static_cast<int>(v.forms_.size())).second) {
          v.forms_.push_back(*form);
        }
      }
    }
  }
  return v;
}

NumberVocab NumberVocab::from_forms(const std::vector<std::string>& forms) {
  if (forms.empty()) throw ValidationError("number table must have the unseen row");
  NumberVocab v;
  v.forms_ = forms;
  v.ids_.clear();
  for (std::size_t i = 0; i < forms.size(); ++i) v.ids_.emplace(forms[i], static_cast<int>(i));
  return v;
}

int NumberVocab::id(std::string_view token) const {
  const auto form = canonical_number(token);
  if (!form) return -1;
  auto it = ids_.find(*form);
  return it == ids_.end() ? kUnseen : it->second;
}

StaticEmbeddings::StaticEmbeddings(std::size_t dim, std::uint64_t hash_seed)
    : dim_(dim), hash_seed_(hash_seed) {}

StaticEmbeddings StaticEmbeddings::load(std::istream& in, std::uint64_t hash_seed) {
  StaticEmbeddings out(0, hash_seed);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> vec;
    double x;
    while (fields >> x) vec.push_back(x);
    if (!fields.eof()) throw ParseError("non-numeric embedding value", line_no);
    if (out.dim_ == 0) out.dim_ = vec.size();
    if (vec.empty() || vec.size() != out.dim_) {
      throw ParseError("embedding width " + std::to_string(vec.size()) + ", expected " +
                           std::to_string(out.dim_),
                       line_no);
    }
    out.table_[token] = std::move(vec);
  }
  if (out.dim_ == 0) throw ValidationError("embedding file holds no vectors");
  return out;
}

StaticEmbeddings StaticEmbeddings::load(const std::filesystem::path& path,
                                        std::uint64_t hash_seed) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open embedding file " + path.string());
  return load(in, hash_seed);
}

bool StaticEmbeddings::contains(std::string_view token) const {
  return table_.count(std::string(token)) != 0 || table_.count(text::to_lower(token)) != 0;
}

void StaticEmbeddings::set(const std::string& token, std::vector<double> vec) {
  if (vec.size() != dim_) throw DimensionError("static vector width mismatch for '" + token + "'");
  table_[token] = std::move(vec);
}

void StaticEmbeddings::lookup(std::string_view token, double* out) const {
  if (!table_.empty()) {
    auto it = table_.find(std::string(token));
    if (it == table_.end()) it = table_.find(text::to_lower(token));
    if (it != table_.end()) {
      std::copy(it->second.begin(), it->second.end(), out);
      return;
    }
  }
  // splitmix64 stream seeded by the word hash; values uniform in [-0.5, 0.5)
  std::uint64_t state = fnv1a(text::to_lower(token), 0xcbf29ce484222325ULL ^ hash_seed_);
  for (std::size_t i = 0; i < dim_; ++i) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    out[i] = static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5;
  }
}

}  // namespace fever::nsmn
