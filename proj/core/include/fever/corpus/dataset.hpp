#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fever/corpus/corpus.hpp"

namespace fever::corpus {

enum class Label : int { supports = 0, refutes = 1, nei = 2 };

inline constexpr std::size_t kLabelCount = 3;

std::string_view label_name(Label label);
/// Accepts SUPPORTS, REFUTES, NEI and NOT ENOUGH INFO.
Label parse_label(std::string_view name);

struct EvidencePointer {
  std::string doc_id;
  int sentence = 0;

  friend auto operator<=>(const EvidencePointer&, const EvidencePointer&) = default;
};

using EvidenceGroup = std::vector<EvidencePointer>;

struct ClaimRecord {
  std::int64_t id = 0;
  std::string claim;
  Label label = Label::nei;
  std::vector<EvidenceGroup> evidence;

  bool verifiable() const noexcept { return label != Label::nei; }
};

/// Parses claim JSONL. Enforces label == NEI ⇔ evidence is empty.
std::vector<ClaimRecord> load_claims(std::istream& in);
std::vector<ClaimRecord> load_claims(const std::filesystem::path& path);

/// Throws ValidationError if any evidence pointer is outside the corpus.
void validate_claims(const std::vector<ClaimRecord>& claims, const Corpus& corpus);

void write_claim(std::ostream& out, const ClaimRecord& record);

}  // namespace fever::corpus
