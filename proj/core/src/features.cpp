#include "fever/verification/features.hpp"

#include <sstream>
#include <unordered_map>

#include "fever/error.hpp"
#include "fever/text/singularize.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::verification {

std::string lemma(std::string_view token) { return text::singularize(text::to_lower(token)); }

namespace {

struct OtherWord {
  std::string lemma;
  std::vector<std::uint32_t> synsets;
};

void fire(WordNetVector& v, std::size_t channel, Side side) {
  v[3 * channel] = side == Side::evidence ? 1.0 : 0.0;
  v[3 * channel + 1] = side == Side::evidence ? 0.0 : 1.0;
  v[3 * channel + 2] = 1.0;
}

void fire_distance(WordNetVector& v, Direction dir, std::size_t edges, Side side) {
  const bool hyper = dir == Direction::hypernym;
  fire(v, hyper ? kHypernym : kHyponym, side);
  if (edges == 1) fire(v, hyper ? kHypernym1 : kHyponym1, side);
  else if (edges == 2) fire(v, hyper ? kHypernym2 : kHyponym2, side);
  else fire(v, hyper ? kHypernymFar : kHyponymFar, side);
}

WordNetVector channels_for(const std::string& lem,
                           const std::unordered_map<std::uint32_t, std::size_t>& up,
                           const std::vector<OtherWord>& others,
                           const std::unordered_map<std::string,
                                                    std::unordered_map<std::uint32_t, std::size_t>>&
                               other_up,
                           const std::vector<std::uint32_t>& own_synsets, Side side,
                           const Ontology& graph) {
  WordNetVector v{};
  for (const auto& o : others) {
    if (o.lemma == lem) fire(v, kExactLemma, side);
    if (graph.antonyms(lem, o.lemma)) fire(v, kAntonym, side);
    // other word above the token
    std::optional<std::size_t> above;
    for (std::uint32_t s : o.synsets) {
      auto it = up.find(s);
      if (it != up.end() && (!above || it->second < *above)) above = it->second;
    }
    if (above) fire_distance(v, Direction::hypernym, *above, side);
    // token above the other word
    std::optional<std::size_t> below;
    const auto& oup = other_up.at(o.lemma);
    for (std::uint32_t s : own_synsets) {
      auto it = oup.find(s);
      if (it != oup.end() && (!below || it->second < *below)) below = it->second;
    }
    if (below) fire_distance(v, Direction::hyponym, *below, side);
  }
  return v;
}

std::vector<OtherWord> other_words(
    const std::vector<std::string>& other, const Ontology& graph,
    std::unordered_map<std::string, std::unordered_map<std::uint32_t, std::size_t>>& other_up) {
  std::vector<OtherWord> out;
  std::unordered_map<std::string, bool> seen;
  for (const auto& t : other) {
    if (text::is_punctuation_token(t)) continue;
    std::string l = lemma(t);
    if (seen.emplace(l, true).second) {
      other_up.emplace(l, graph.ancestors(l));
      out.push_back({l, graph.synsets_of(l)});
    }
  }
  return out;
}

}  // namespace

WordNetVector wordnet_channels(std::string_view token, const std::vector<std::string>& other,
                               Side side, const Ontology& graph) {
  if (text::is_punctuation_token(token)) return WordNetVector{};
  std::unordered_map<std::string, std::unordered_map<std::uint32_t, std::size_t>> other_up;
  const auto others = other_words(other, graph, other_up);
  const std::string lem = lemma(token);
  return channels_for(lem, graph.ancestors(lem), others, other_up, graph.synsets_of(lem), side,
                      graph);
}

std::vector<WordNetVector> wordnet_features(const std::vector<std::string>& tokens,
                                            const std::vector<std::string>& other, Side side,
                                            const Ontology& graph) {
  std::unordered_map<std::string, std::unordered_map<std::uint32_t, std::size_t>> other_up;
  const auto others = other_words(other, graph, other_up);
  std::unordered_map<std::string, WordNetVector> cache;
  std::vector<WordNetVector> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (text::is_punctuation_token(t)) {
      out.push_back(WordNetVector{});
      continue;
    }
    const std::string lem = lemma(t);
    auto it = cache.find(lem);
    if (it == cache.end()) {
      it = cache
               .emplace(lem, channels_for(lem, graph.ancestors(lem), others, other_up,
                                          graph.synsets_of(lem), side, graph))
               .first;
    }
    out.push_back(it->second);
  }
  return out;
}

FeatureConfig parse_features(std::string_view list) {
  FeatureConfig c{false, false, false, false};
  std::stringstream ss{std::string(list)};
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty() || item == "none") continue;
    if (item == "wn") c.wordnet = true;
    else if (item == "num") c.number = true;
    else if (item == "srs" || item == "srs-sent") c.srs_sent = true;
    else if (item == "srs-doc") c.srs_doc = true;
    else throw ValidationError("unknown feature '" + item + "'");
  }
  return c;
}

std::string features_string(const FeatureConfig& config) {
  std::string out;
  auto add = [&out](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(config.wordnet, "wn");
  add(config.number, "num");
  add(config.srs_sent, "srs-sent");
  add(config.srs_doc, "srs-doc");
  return out.empty() ? "none" : out;
}

num::Tensor token_features(const std::vector<std::string>& tokens,
                           const std::vector<std::string>& other, Side side,
                           const std::vector<Srs>& srs, const Ontology& graph,
                           const FeatureConfig& config) {
  const nsmn::FeatureLayout layout = config.layout();
  num::Tensor out(layout.constant_width(), tokens.size());
  if (!srs.empty() && srs.size() != tokens.size()) {
    throw DimensionError("one SRS entry per token expected");
  }
  std::size_t row = 0;
  if (config.wordnet) {
    const auto wn = wordnet_features(tokens, other, side, graph);
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      for (std::size_t k = 0; k < wn[j].size(); ++k) out(k, j) = wn[j][k];
    }
    row += nsmn::FeatureLayout::kWordNetWidth;
  }
  if (layout.srs && !srs.empty()) {
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      out(row, j) = config.srs_doc ? srs[j].doc : 0.0;
      out(row + 1, j) = config.srs_sent ? srs[j].sent : 0.0;
    }
  }
  return out;
}

std::array<double, 5> number_feature(const nsmn::Model& model, std::string_view token) {
  std::array<double, 5> out{};
  if (!model.config().features.number) return out;
  const int id = model.numbers().id(token);
  if (id < 0) return out;
  const num::Tensor& table = model.params().at("embed.number").value;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = table(static_cast<std::size_t>(id), k);
  return out;
}

}  // namespace fever::verification
