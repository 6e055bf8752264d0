#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fever/corpus/document.hpp"

namespace fever::corpus {

using DocIndex = std::uint32_t;

/// Sparse term-weight vector keyed by term id, sorted by id.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;
  double norm = 0.0;
};

/// Title-matching key: tokens joined by one space, with every character
/// except the first lowercased. "YouTube" and "Youtube" share a key,
/// "youtube" does not.
std::string title_key(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end);
std::string title_key(const std::vector<std::string>& tokens);

/// Immutable lookup structures built once from a document collection.
class CorpusIndex {
 public:
  static constexpr std::size_t kMaxSpanTokens = 7;

  struct LongTitle {
    std::string key;
    std::size_t token_count;
    DocIndex doc;
  };

  const std::vector<DocIndex>* exact(const std::string& key) const;
  const std::vector<DocIndex>* stripped(const std::string& key) const;
  /// Titles (full or stripped) with more than kMaxSpanTokens tokens.
  const std::vector<LongTitle>& long_titles() const noexcept { return long_titles_; }

  std::size_t doc_count() const noexcept { return doc_count_; }
  std::optional<std::uint32_t> term_id(std::string_view term) const;
  std::size_t df(std::string_view term) const;
  double idf(std::string_view term) const;
  /// ln(1 + tf)·idf vector over the document's title and first body sentence.
  const SparseVector& doc_vector(DocIndex doc) const { return doc_vectors_[doc]; }
  const std::vector<DocIndex>& postings(std::uint32_t term) const { return postings_[term]; }
  std::int64_t pageview(DocIndex doc) const { return pageviews_[doc]; }

 private:
  friend class Corpus;

  std::unordered_map<std::string, std::vector<DocIndex>> exact_;
  std::unordered_map<std::string, std::vector<DocIndex>> stripped_;
  std::vector<LongTitle> long_titles_;
  std::unordered_map<std::string, std::uint32_t> terms_;
  std::vector<std::size_t> df_;
  std::vector<std::vector<DocIndex>> postings_;
  std::vector<SparseVector> doc_vectors_;
  std::vector<std::int64_t> pageviews_;
  std::size_t doc_count_ = 0;
};

/// Document store plus its index. Immutable after construction and safe
/// for concurrent readers.
class Corpus {
 public:
  Corpus() = default;

  /// Parses JSONL, one document per line. Throws ParseError (with line
  /// number) on malformed input and ConflictError on duplicate ids.
  static Corpus ingest(std::istream& in);
  static Corpus load(const std::filesystem::path& path);
  static Corpus from_documents(std::vector<Document> docs);

  std::size_t size() const noexcept { return docs_.size(); }
  const std::vector<Document>& documents() const noexcept { return docs_; }
  const Document& document(DocIndex i) const { return docs_[i]; }
  const Document* find(std::string_view id) const;
  std::optional<DocIndex> index_of(std::string_view id) const;
  const CorpusIndex& index() const noexcept { return index_; }

  /// Tokens of the title followed by the first body sentence.
  std::vector<std::string> doc_repr(const Document& doc) const;

 private:
  void build_index();

  std::vector<Document> docs_;
  std::unordered_map<std::string, DocIndex> by_id_;
  CorpusIndex index_;
};

void write_document(std::ostream& out, const Document& doc);

}  // namespace fever::corpus
