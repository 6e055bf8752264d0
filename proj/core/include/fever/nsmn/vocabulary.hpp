#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fever::nsmn {

/// Lowercased word vocabulary for the trainable embedding channel.
/// Id 0 is reserved for unknown words.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;
  static constexpr std::string_view kUnknownToken = "<unk>";

  Vocabulary();
  /// Adds every word seen at least `min_count` times, in first-seen order.
  static Vocabulary build(const std::vector<std::vector<std::string>>& token_lists,
                          std::size_t min_count = 1);
  static Vocabulary from_words(const std::vector<std::string>& words);

  int id(std::string_view token) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  int add(const std::string& word);

  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

/// Canonical form of a number token, or nothing when the token is not a
/// number. Grammar: optional sign, optional "$", either plain digits or
/// comma-grouped digits, optional decimal part, optional trailing "%".
/// The canonical form drops "$", "+", "%" and grouping commas:
/// "$1,200.50" -> "1200.50", "70%" -> "70", "-3" -> "-3".
std::optional<std::string> canonical_number(std::string_view token);

/// Table of distinct numbers, keyed by canonical form. Row 0 stands for any
/// number not seen when the table was built.
class NumberVocab {
 public:
  static constexpr int kUnseen = 0;

  NumberVocab();
  static NumberVocab build(const std::vector<std::vector<std::string>>& token_lists);
  static NumberVocab from_forms(const std::vector<std::string>& forms);

  /// Row for a token: -1 if it is not a number, kUnseen if it is an unknown one.
  int id(std::string_view token) const;
  std::size_t size() const noexcept { return forms_.size(); }
  const std::vector<std::string>& forms() const noexcept { return forms_; }

 private:
  std::vector<std::string> forms_;
  std::unordered_map<std::string, int> ids_;
};

/// Frozen word vectors. Vectors come from a text file (token followed by
/// floats); any other token gets a vector drawn from a generator seeded by a
/// hash of its lowercased form, so the same word always maps to the same
/// vector.
class StaticEmbeddings {
 public:
  explicit StaticEmbeddings(std::size_t dim = 16, std::uint64_t hash_seed = 0x5eed);

  /// Reads "token v1 ... vd" lines. Every line must carry the same width.
  static StaticEmbeddings load(std::istream& in, std::uint64_t hash_seed = 0x5eed);
  static StaticEmbeddings load(const std::filesystem::path& path, std::uint64_t hash_seed = 0x5eed);

  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t hash_seed() const noexcept { return hash_seed_; }
  /// Writes the vector for `token` into out[0..dim).
  void lookup(std::string_view token, double* out) const;
  bool contains(std::string_view token) const;

  void set(const std::string& token, std::vector<double> vec);
  const std::unordered_map<std::string, std::vector<double>>& table() const noexcept {
    return table_;
  }

 private:
  std::size_t dim_;
  std::uint64_t hash_seed_;
  std::unordered_map<std::string, std::vector<double>> table_;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace fever::nsmn
