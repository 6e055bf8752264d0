#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fever::verification {

enum class Direction { hyponym, hypernym };

/// Relation of word B to word A along hypernym edges.
struct HypernymPath {
  /// hypernym: B lies above A (A "dog", B "animal"); hyponym: B lies below A.
  Direction direction;
  std::size_t edges;
  bool operator==(const HypernymPath&) const = default;
};

/// WordNet-style lexical graph: lemmas map to synsets, synsets have
/// hypernym edges, lemmas have antonyms.
///
/// Text format, one record per line, fields separated by tabs or spaces:
///   LEMMA <lemma> <synset>...
///   HYPER <child synset> <parent synset>
///   ANT <lemma> <lemma>
/// Blank lines and lines starting with '#' are ignored.
class Ontology {
 public:
  static constexpr std::size_t kMaxDepth = 6;

  static Ontology load(std::istream& in);
  static Ontology load(const std::filesystem::path& path);

  void add_lemma(const std::string& lemma, const std::string& synset);
  void add_hypernym(const std::string& child, const std::string& parent);
  void add_antonym(const std::string& a, const std::string& b);
  /// Rejects hypernym edges naming undeclared synsets, and cycles.
  void validate() const;

  std::size_t synset_count() const noexcept { return synset_ids_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool has_lemma(std::string_view lemma) const;
  bool antonyms(std::string_view a, std::string_view b) const;

  /// Fewest upward edges from any synset of `from` to any synset of `to`,
  /// searching at most kMaxDepth edges. Zero-length paths are excluded.
  std::optional<std::size_t> up_distance(std::string_view from, std::string_view to) const;
  /// Shorter of the two directions; hypernym wins a tie.
  std::optional<HypernymPath> hypernym_distance(std::string_view a, std::string_view b) const;

  /// Synset id -> fewest upward edges (1..kMaxDepth) from any synset of `lemma`.
  std::unordered_map<std::uint32_t, std::size_t> ancestors(std::string_view lemma) const;
  const std::vector<std::uint32_t>& synsets_of(std::string_view lemma) const;

 private:
  std::uint32_t synset_id(const std::string& name);

  std::unordered_map<std::string, std::uint32_t> synset_ids_;
  std::vector<std::string> synset_names_;
  std::vector<std::vector<std::uint32_t>> parents_;
  std::vector<bool> declared_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> lemmas_;
  std::set<std::pair<std::string, std::string>> antonyms_;
  std::size_t edge_count_ = 0;
};

}  // namespace fever::verification
