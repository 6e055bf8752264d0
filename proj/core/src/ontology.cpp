#include "fever/verification/ontology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <sstream>

#include "fever/error.hpp"

namespace fever::verification {

Ontology Ontology::load(std::istream& in) {
  Ontology g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind[0] == '#') continue;
    std::vector<std::string> args;
    for (std::string a; fields >> a;) args.push_back(a);
    if (kind == "LEMMA" && args.size() >= 2) {
      for (std::size_t i = 1; i < args.size(); ++i) g.add_lemma(args[0], args[i]);
    } else if (kind == "HYPER" && args.size() == 2) {
      g.add_hypernym(args[0], args[1]);
    } else if (kind == "ANT" && args.size() == 2) {
      g.add_antonym(args[0], args[1]);
    } else {
      throw ParseError("bad ontology record '" + line + "'", line_no);
    }
  }
  g.validate();
  return g;
}

Ontology Ontology::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open ontology file " + path.string());
  return load(in);
}

std::uint32_t Ontology::synset_id(const std::string& name) {
  auto [it, inserted] = synset_ids_.emplace(name, static_cast<std::uint32_t>(synset_names_.size()));
  if (inserted) {
    synset_names_.push_back(name);
    parents_.emplace_back();
    declared_.push_back(false);
  }
  return it->second;
}

void Ontology::add_lemma(const std::string& lemma, const std::string& synset) {
  const std::uint32_t id = synset_id(synset);
  declared_[id] = true;
  auto& list = lemmas_[lemma];
  if (std::find(list.begin(), list.end(), id) == list.end()) list.push_back(id);
}

void Ontology::add_hypernym(const std::string& child, const std::string& parent) {
  const std::uint32_t c = synset_id(child);
  const std::uint32_t p = synset_id(parent);
  auto& ps = parents_[c];
  if (std::find(ps.begin(), ps.end(), p) == ps.end()) {
    ps.push_back(p);
    ++edge_count_;
  }
}

void Ontology::add_antonym(const std::string& a, const std::string& b) {
  antonyms_.emplace(a, b);
  antonyms_.emplace(b, a);
}

void Ontology::validate() const {
  for (std::size_t i = 0; i < synset_names_.size(); ++i) {
    if (!declared_[i]) {
      throw ValidationError("synset '" + synset_names_[i] + "' is not attached to any lemma");
    }
  }
  // Iterative three-colour DFS over the hypernym edges.
  std::vector<int> colour(synset_names_.size(), 0);
  for (std::uint32_t root = 0; root < synset_names_.size(); ++root) {
    if (colour[root] != 0) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < parents_[node].size()) {
        const std::uint32_t p = parents_[node][next++];
        if (colour[p] == 1) {
          throw ValidationError("hypernym cycle through synset '" + synset_names_[p] + "'");
        }
        if (colour[p] == 0) {
          colour[p] = 1;
          stack.push_back({p, 0});
        }
      } else {
        colour[node] = 2;
        stack.pop_back();
      }
    }
  }
}

bool Ontology::has_lemma(std::string_view lemma) const {
  return lemmas_.count(std::string(lemma)) != 0;
}

bool Ontology::antonyms(std::string_view a, std::string_view b) const {
  return antonyms_.count({std::string(a), std::string(b)}) != 0;
}

const std::vector<std::uint32_t>& Ontology::synsets_of(std::string_view lemma) const {
  static const std::vector<std::uint32_t> none;
  auto it = lemmas_.find(std::string(lemma));
  return it == lemmas_.end() ? none : it->second;
}

std::unordered_map<std::uint32_t, std::size_t> Ontology::ancestors(std::string_view lemma) const {
  std::unordered_map<std::uint32_t, std::size_t> dist;
  std::deque<std::pair<std::uint32_t, std::size_t>> queue;
  for (std::uint32_t s : synsets_of(lemma)) queue.emplace_back(s, 0);
  // starting synsets stay unseen so one can still be reached from another
  std::vector<bool> seen(synset_names_.size(), false);
  while (!queue.empty()) {
    const auto [node, d] = queue.front();
    queue.pop_front();
    if (d == kMaxDepth) continue;
    for (std::uint32_t p : parents_[node]) {
      if (seen[p]) continue;
      seen[p] = true;
      dist.emplace(p, d + 1);
      queue.emplace_back(p, d + 1);
    }
  }
  return dist;
}

std::optional<std::size_t> Ontology::up_distance(std::string_view from, std::string_view to) const {
  const auto& targets = synsets_of(to);
  if (targets.empty()) return std::nullopt;
  const auto anc = ancestors(from);
  std::optional<std::size_t> best;
  for (std::uint32_t t : targets) {
    auto it = anc.find(t);
    if (it != anc.end() && (!best || it->second < *best)) best = it->second;
  }
  return best;
}

std::optional<HypernymPath> Ontology::hypernym_distance(std::string_view a,
                                                        std::string_view b) const {
  const auto up = up_distance(a, b);
  const auto down = up_distance(b, a);
  if (up && (!down || *up <= *down)) return HypernymPath{Direction::hypernym, *up};
  if (down) return HypernymPath{Direction::hyponym, *down};
  return std::nullopt;
}

}  // namespace fever::verification
