#include "fever/corpus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fever/error.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::corpus {

using nlohmann::json;

namespace {

std::optional<std::size_t> parenthetical_start(std::string_view title) {
  if (title.size() < 4 || title.back() != ')') return std::nullopt;
  const std::size_t pos = title.rfind(" (");
  if (pos == std::string_view::npos || pos == 0) return std::nullopt;
  const std::string_view inner = title.substr(pos + 2, title.size() - pos - 3);
  if (inner.empty() || inner.find_first_of("()") != std::string_view::npos) return std::nullopt;
  return pos;
}

}  // namespace

bool is_disambiguative(std::string_view title) { return parenthetical_start(title).has_value(); }

std::string strip_parenthetical(std::string_view title) {
  const auto pos = parenthetical_start(title);
  return std::string(pos ? title.substr(0, *pos) : title);
}

std::string title_key(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
  std::string key;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) key += ' ';
    key += tokens[i];
  }
  for (std::size_t i = 1; i < key.size(); ++i) {
    key[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(key[i])));
  }
  return key;
}

std::string title_key(const std::vector<std::string>& tokens) {
  return title_key(tokens, 0, tokens.size());
}

const std::vector<DocIndex>* CorpusIndex::exact(const std::string& key) const {
  auto it = exact_.find(key);
  return it == exact_.end() ? nullptr : &it->second;
}

const std::vector<DocIndex>* CorpusIndex::stripped(const std::string& key) const {
  auto it = stripped_.find(key);
  return it == stripped_.end() ? nullptr : &it->second;
}

std::optional<std::uint32_t> CorpusIndex::term_id(std::string_view term) const {
  auto it = terms_.find(std::string(term));
  if (it == terms_.end()) return std::nullopt;
  return it->second;
}

std::size_t CorpusIndex::df(std::string_view term) const {
  const auto id = term_id(term);
  return id ? df_[*id] : 0;
}

double CorpusIndex::idf(std::string_view term) const {
  return std::log((static_cast<double>(doc_count_) + 1.0) / (static_cast<double>(df(term)) + 1.0)) +
         1.0;
}

Corpus Corpus::ingest(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    Document doc;
    try {
      const json j = json::parse(line);
      doc.id = j.at("id").get<std::string>();
      doc.title = j.at("title").get<std::string>();
      doc.sentences = j.at("sentences").get<std::vector<std::string>>();
      if (j.contains("links")) {
        doc.links = j.at("links").get<std::vector<std::vector<std::string>>>();
      }
      doc.pageview = j.value("pageview", std::int64_t{0});
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed document: ") + e.what(), line_no);
    }
    if (doc.id.empty()) throw ParseError("document id is empty", line_no);
    if (doc.sentences.empty() || doc.sentences.front() != doc.title) {
      throw ParseError("sentence 0 of '" + doc.id + "' must equal its title", line_no);
    }
    if (doc.links.size() > doc.sentences.size()) {
      throw ParseError("more link lists than sentences in '" + doc.id + "'", line_no);
    }
    if (doc.pageview < 0) throw ParseError("negative pageview in '" + doc.id + "'", line_no);
    doc.links.resize(doc.sentences.size());
    docs.push_back(std::move(doc));
  }
  return from_documents(std::move(docs));
}

Corpus Corpus::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file " + path.string());
  return ingest(in);
}

Corpus Corpus::from_documents(std::vector<Document> docs) {
  Corpus c;
  c.docs_ = std::move(docs);
  for (DocIndex i = 0; i < c.docs_.size(); ++i) {
    Document& d = c.docs_[i];
    if (d.sentences.empty()) d.sentences.push_back(d.title);
    d.links.resize(d.sentences.size());
    if (!c.by_id_.emplace(d.id, i).second) {
      throw ConflictError("duplicate document id '" + d.id + "'");
    }
  }
  c.build_index();
  return c;
}

const Document* Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

std::optional<DocIndex> Corpus::index_of(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Corpus::doc_repr(const Document& doc) const {
  std::vector<std::string> tokens = text::tokenize(doc.title);
  if (doc.sentences.size() > 1) {
    auto body = text::tokenize(doc.sentences[1]);
    tokens.insert(tokens.end(), body.begin(), body.end());
  }
  return tokens;
}

void Corpus::build_index() {
  CorpusIndex& ix = index_;
  ix = CorpusIndex{};
  ix.doc_count_ = docs_.size();
  ix.pageviews_.reserve(docs_.size());

  auto add_title = [&ix](std::unordered_map<std::string, std::vector<DocIndex>>& table,
                         const std::string& title, DocIndex doc) {
    const auto tokens = text::tokenize(title);
    if (tokens.empty()) return;
    if (tokens.size() > CorpusIndex::kMaxSpanTokens) {
      ix.long_titles_.push_back({title_key(tokens), tokens.size(), doc});
    } else {
      table[title_key(tokens)].push_back(doc);
    }
  };

  std::vector<std::map<std::uint32_t, std::size_t>> tf(docs_.size());
  for (DocIndex i = 0; i < docs_.size(); ++i) {
    const Document& d = docs_[i];
    ix.pageviews_.push_back(d.pageview);
    add_title(ix.exact_, d.title, i);
    if (is_disambiguative(d.title)) add_title(ix.stripped_, strip_parenthetical(d.title), i);

    std::string text = d.title;
    if (d.sentences.size() > 1) text += " " + d.sentences[1];
    for (const auto& term : text::content_terms(text)) {
      auto [it, inserted] = ix.terms_.emplace(term, static_cast<std::uint32_t>(ix.df_.size()));
      if (inserted) {
        ix.df_.push_back(0);
        ix.postings_.emplace_back();
      }
      if (tf[i][it->second]++ == 0) {
        ++ix.df_[it->second];
        ix.postings_[it->second].push_back(i);
      }
    }
  }

  const double n = static_cast<double>(docs_.size());
  ix.doc_vectors_.resize(docs_.size());
  for (DocIndex i = 0; i < docs_.size(); ++i) {
    SparseVector& v = ix.doc_vectors_[i];
    double sq = 0.0;
    for (const auto& [term, count] : tf[i]) {
      const double idf = std::log((n + 1.0) / (static_cast<double>(ix.df_[term]) + 1.0)) + 1.0;
      const double w = std::log(1.0 + static_cast<double>(count)) * idf;
      v.entries.emplace_back(term, w);
      sq += w * w;
    }
    v.norm = std::sqrt(sq);
  }
}

void write_document(std::ostream& out, const Document& doc) {
  json j;
  j["id"] = doc.id;
  j["title"] = doc.title;
  j["sentences"] = doc.sentences;
  j["links"] = doc.links;
  j["pageview"] = doc.pageview;
  out << j.dump() << '\n';
}

}  // namespace fever::corpus
