#include "fever/corpus/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fever/error.hpp"

namespace fever::corpus {

using nlohmann::json;

std::string_view label_name(Label label) {
  switch (label) {
    case Label::supports: return "SUPPORTS";
    case Label::refutes: return "REFUTES";
    case Label::nei: return "NOT ENOUGH INFO";
  }
  return "NOT ENOUGH INFO";
}

Label parse_label(std::string_view name) {
  if (name == "SUPPORTS" || name == "S") return Label::supports;
  if (name == "REFUTES" || name == "R") return Label::refutes;
  if (name == "NOT ENOUGH INFO" || name == "NEI") return Label::nei;
  throw ValidationError("unknown label '" + std::string(name) + "'");
}

std::vector<ClaimRecord> load_claims(std::istream& in) {
  std::vector<ClaimRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    ClaimRecord r;
    try {
      const json j = json::parse(line);
      r.id = j.at("id").get<std::int64_t>();
      r.claim = j.at("claim").get<std::string>();
      r.label = parse_label(j.at("label").get<std::string>());
      for (const auto& group : j.value("evidence", json::array())) {
        EvidenceGroup g;
        for (const auto& ptr : group) {
          g.push_back({ptr.at(0).get<std::string>(), ptr.at(1).get<int>()});
        }
        if (g.empty()) throw ParseError("empty evidence group", line_no);
        r.evidence.push_back(std::move(g));
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed claim: ") + e.what(), line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    if ((r.label == Label::nei) != r.evidence.empty()) {
      throw ParseError("claim " + std::to_string(r.id) +
                           ": NOT ENOUGH INFO must have empty evidence and only it",
                       line_no);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ClaimRecord> load_claims(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open claims file " + path.string());
  return load_claims(in);
}

void validate_claims(const std::vector<ClaimRecord>& claims, const Corpus& corpus) {
  for (const auto& r : claims) {
    for (const auto& group : r.evidence) {
      for (const auto& ptr : group) {
        const Document* d = corpus.find(ptr.doc_id);
        if (d == nullptr) {
          throw ValidationError("claim " + std::to_string(r.id) + ": unknown document '" +
                                ptr.doc_id + "'");
        }
        if (ptr.sentence < 0 || static_cast<std::size_t>(ptr.sentence) >= d->sentences.size()) {
          throw ValidationError("claim " + std::to_string(r.id) + ": sentence " +
                                std::to_string(ptr.sentence) + " outside '" + ptr.doc_id + "'");
        }
      }
    }
  }
}

void write_claim(std::ostream& out, const ClaimRecord& record) {
  json j;
  j["id"] = record.id;
  j["claim"] = record.claim;
  j["label"] = label_name(record.label);
  json ev = json::array();
  for (const auto& g : record.evidence) {
    json group = json::array();
    for (const auto& p : g) group.push_back(json::array({p.doc_id, p.sentence}));
    ev.push_back(std::move(group));
  }
  j["evidence"] = std::move(ev);
  out << j.dump() << '\n';
}

}  // namespace fever::corpus
