#include "fever/pipeline/jsonl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fever/error.hpp"

namespace fever::pipeline {

using nlohmann::json;

namespace {

void for_each_line(std::istream& in, const std::function<void(const json&)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
}

json scored_sentences(const std::vector<verification::EvidenceItem>& items) {
  json out = json::array();
  for (const auto& e : items) out.push_back(json::array({e.doc_id, e.sentence, e.sent_p, e.m_plus}));
  return out;
}

std::vector<verification::EvidenceItem> read_sentences(const json& arr,
                                                       const std::map<std::string, double>& doc_p,
                                                       const corpus::Corpus& corpus) {
  std::vector<verification::EvidenceItem> out;
  for (const auto& e : arr) {
    verification::EvidenceItem item;
    item.doc_id = e.at(0).get<std::string>();
    item.sentence = e.at(1).get<int>();
    item.sent_p = e.at(2).get<double>();
    item.m_plus = e.at(3).get<double>();
    auto it = doc_p.find(item.doc_id);
    item.doc_p = it == doc_p.end() ? 1.0 : it->second;
    const corpus::Document* d = corpus.find(item.doc_id);
    if (d == nullptr || item.sentence < 0 ||
        static_cast<std::size_t>(item.sentence) >= d->sentences.size()) {
      throw ValidationError("selected sentence (" + item.doc_id + ", " +
                            std::to_string(item.sentence) + ") is not in the corpus");
    }
    item.text = d->sentences[static_cast<std::size_t>(item.sentence)];
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

std::vector<std::string> RetrievedRecord::doc_ids() const {
  std::vector<std::string> out;
  for (const auto& d : docs) out.push_back(d.doc_id);
  return out;
}

void write_retrieved(std::ostream& out, const RetrievedRecord& record) {
  json scores = json::array();
  for (const auto& d : record.docs) {
    scores.push_back(json::array({d.doc_id, d.p, d.m_plus,
                                  d.priority == retrieval::Priority::guaranteed ? "guaranteed"
                                                                                : "ranked"}));
  }
  out << json{{"id", record.id}, {"retrieved", record.doc_ids()}, {"doc_scores", scores}}.dump()
      << '\n';
}

std::vector<RetrievedRecord> read_retrieved(std::istream& in) {
  std::vector<RetrievedRecord> out;
  for_each_line(in, [&out](const json& j) {
    RetrievedRecord r;
    r.id = j.at("id").get<std::int64_t>();
    const auto ids = j.at("retrieved").get<std::vector<std::string>>();
    const json scores = j.value("doc_scores", json::array());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      retrieval::RankedDoc d{ids[i], retrieval::Priority::guaranteed, 0.0, 1.0};
      if (i < scores.size()) {
        d.p = scores[i].at(1).get<double>();
        d.m_plus = scores[i].at(2).get<double>();
        if (scores[i].at(3).get<std::string>() == "ranked") d.priority = retrieval::Priority::ranked;
      }
      r.docs.push_back(std::move(d));
    }
    out.push_back(std::move(r));
  });
  return out;
}

void write_selected(std::ostream& out, const SelectedRecord& record) {
  std::map<std::string, double> doc_p;
  for (const auto* list : {&record.evidence, &record.pool}) {
    for (const auto& e : *list) doc_p.emplace(e.doc_id, e.doc_p);
  }
  out << json{{"id", record.id},
              {"evidence", scored_sentences(record.evidence)},
              {"doc_p", doc_p},
              {"pool", scored_sentences(record.pool)}}
             .dump()
      << '\n';
}

std::vector<SelectedRecord> read_selected(std::istream& in, const corpus::Corpus& corpus) {
  std::vector<SelectedRecord> out;
  for_each_line(in, [&](const json& j) {
    SelectedRecord r;
    r.id = j.at("id").get<std::int64_t>();
    const auto doc_p = j.value("doc_p", std::map<std::string, double>{});
    r.evidence = read_sentences(j.at("evidence"), doc_p, corpus);
    r.pool = read_sentences(j.value("pool", json::array()), doc_p, corpus);
    out.push_back(std::move(r));
  });
  return out;
}

void write_prediction(std::ostream& out, const verification::Prediction& p) {
  json ev = json::array();
  for (const auto& e : p.evidence) ev.push_back(json::array({e.doc_id, e.sentence}));
  out << json{{"id", p.claim_id},
              {"predicted_label", corpus::label_name(p.label)},
              {"predicted_evidence", ev},
              {"label_scores", p.scores}}
             .dump()
      << '\n';
}

std::vector<scoring::PredictionRecord> read_predictions(std::istream& in) {
  std::vector<scoring::PredictionRecord> out;
  for_each_line(in, [&out](const json& j) {
    scoring::PredictionRecord r;
    r.id = j.at("id").get<std::int64_t>();
    r.label = corpus::parse_label(j.at("predicted_label").get<std::string>());
    for (const auto& e : j.at("predicted_evidence")) {
      r.evidence.push_back({e.at(0).get<std::string>(), e.at(1).get<int>()});
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return in;
}

}  // namespace fever::pipeline
