#include "fever/pipeline/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fever/corpus/corpus.hpp"
#include "fever/error.hpp"

namespace fever::pipeline {

namespace {

using Rng = std::mt19937_64;

const std::array<std::pair<const char*, const char*>, 40> kAntonyms{{
    {"generous", "stingy"},       {"ancient", "modern"},      {"famous", "obscure"},
    {"wealthy", "poor"},          {"large", "small"},         {"cheerful", "gloomy"},
    {"honest", "deceitful"},      {"brave", "cowardly"},      {"strong", "weak"},
    {"loud", "quiet"},            {"fast", "slow"},           {"popular", "unpopular"},
    {"successful", "unsuccessful"}, {"busy", "idle"},         {"polite", "rude"},
    {"clean", "dirty"},           {"simple", "complex"},      {"safe", "dangerous"},
    {"humble", "arrogant"},       {"careful", "careless"},    {"friendly", "hostile"},
    {"calm", "anxious"},          {"optimistic", "pessimistic"}, {"formal", "informal"},
    {"flexible", "rigid"},        {"mature", "immature"},     {"visible", "invisible"},
    {"reliable", "unreliable"},   {"patient", "impatient"},   {"loyal", "disloyal"},
    {"tidy", "messy"},            {"bright", "dark"},         {"heavy", "light"},
    {"spicy", "mild"},            {"public", "private"},      {"urban", "rural"},
    {"wise", "foolish"},          {"active", "passive"},      {"major", "minor"},
    {"profitable", "unprofitable"},
}};

// child -> parent; every name is both the lemma and (prefixed) its synset
const std::array<std::pair<const char*, const char*>, 37> kTaxonomy{{
    {"mammal", "animal"},     {"bird", "animal"},      {"reptile", "animal"},
    {"fish", "animal"},       {"carnivore", "mammal"}, {"ungulate", "mammal"},
    {"rodent", "mammal"},     {"canine", "carnivore"}, {"feline", "carnivore"},
    {"dog", "canine"},        {"cat", "feline"},       {"horse", "ungulate"},
    {"parrot", "bird"},       {"raptor", "bird"},      {"lizard", "reptile"},
    {"turtle", "reptile"},    {"poodle", "dog"},       {"beagle", "dog"},
    {"terrier", "dog"},       {"collie", "dog"},       {"dalmatian", "dog"},
    {"tabby", "cat"},         {"siamese", "cat"},      {"persian", "cat"},
    {"pony", "horse"},        {"stallion", "horse"},   {"hamster", "rodent"},
    {"gerbil", "rodent"},     {"macaw", "parrot"},     {"cockatoo", "parrot"},
    {"parakeet", "parrot"},   {"owl", "raptor"},       {"falcon", "raptor"},
    {"gecko", "lizard"},      {"iguana", "lizard"},    {"tortoise", "turtle"},
    {"goldfish", "fish"},
}};

const std::array<const char*, 10> kCategories{"band",  "film",       "novel", "album", "river",
                                              "ship",  "painter",    "footballer", "city", "game"};

const std::array<const char*, 28> kSyllables{"ka", "lo", "mi", "ra", "ven", "tor", "sel",
                                             "da", "rin", "mo", "ta", "li", "qua", "zen",
                                             "bel", "dor", "fa", "gri", "hal", "ju", "nex",
                                             "pol", "sar", "tel", "vu", "wen", "yor", "zu"};

const std::array<const char*, 6> kFillers{
    "{} is mentioned in several regional records .",
    "{} attracted attention from local critics .",
    "Little else is documented about {} .",
    "{} was discussed in a number of newspaper columns .",
    "Archives describe {} in some detail .",
    "{} remains a topic of informal conversation .",
};

std::string fill(std::string pattern, const std::string& value) {
  const auto pos = pattern.find("{}");
  return pos == std::string::npos ? pattern : pattern.replace(pos, 2, value);
}

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string format_count(int n) {
  if (n < 1000) return std::to_string(n);
  std::string s = std::to_string(n);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
  return s;
}

// "a dog", "an owl"
std::string indefinite(const std::string& noun) {
  const bool vowel = !noun.empty() && std::string("aeiou").find(noun[0]) != std::string::npos;
  return (vowel ? "an " : "a ") + noun;
}

std::string doc_id_of(const std::string& title) {
  std::string id = title;
  std::replace(id.begin(), id.end(), ' ', '_');
  return id;
}

struct Entity {
  std::string title;
  std::string id;
  std::string mention;  // name used inside sentences
  std::string noun;
  std::string place;
  bool disambiguative = false;
  std::optional<int> year;
  std::optional<int> count;
  std::optional<std::string> adjective;
  std::optional<std::string> pet;
  std::optional<std::size_t> link;  // entity index
  std::map<std::string, int> sentence_of;
};

class Generator {
 public:
  explicit Generator(const SyntheticSpec& spec) : spec_(spec), rng_(spec.seed) {
    for (const auto& [c, p] : kTaxonomy) {
      parent_[c] = p;
      if (std::none_of(kTaxonomy.begin(), kTaxonomy.end(),
                       [c = std::string(c)](const auto& e) { return e.second == c; })) {
        pets_.push_back(c);
      }
    }
    for (const auto& [a, b] : kAntonyms) {
      antonym_[a] = b;
      antonym_[b] = a;
      adjectives_.push_back(a);
      adjectives_.push_back(b);
    }
  }

  SyntheticData run() {
    SyntheticData out;
    build_entities();
    out.disambiguative_count = disambiguative_.size();
    out.documents = documents();
    std::vector<corpus::ClaimRecord> claims;
    make_claims(claims, out.trace);
    split(claims, out);
    out.ontology_tsv = ontology();
    return out;
  }

 private:
  std::string fresh_name() {
    for (;;) {
      std::string name;
      const std::size_t parts = 2 + pick(rng_, 2);
      for (std::size_t i = 0; i < parts; ++i) name += kSyllables[pick(rng_, kSyllables.size())];
      name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
      if (names_.insert(name).second) return name;
    }
  }

  int random_count() {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (u < 0.5) return std::uniform_int_distribution<int>(2, 99)(rng_);
    if (u < 0.8) return std::uniform_int_distribution<int>(100, 999)(rng_);
    return std::uniform_int_distribution<int>(1000, 20000)(rng_);
  }

  void assign_facts(Entity& e) {
    e.place = places_[pick(rng_, places_.size())];
    if (chance(rng_, 0.7)) e.year = std::uniform_int_distribution<int>(1900, 2019)(rng_);
    if (chance(rng_, 0.7)) e.count = random_count();
    if (chance(rng_, 0.7)) e.adjective = adjectives_[pick(rng_, adjectives_.size())];
    if (chance(rng_, 0.7)) e.pet = pets_[pick(rng_, pets_.size())];
  }

  void build_entities() {
    const std::size_t n = spec_.documents;
    const auto n_dis = static_cast<std::size_t>(std::llround(static_cast<double>(n) *
                                                             spec_.disambiguative_fraction));
    const std::size_t n_places = std::max<std::size_t>(3, n / 12);

    for (std::size_t i = 0; i < n_places; ++i) places_.push_back(fresh_name());

    // disambiguation groups of 6..9 pages (a smaller remainder forms its own group)
    std::vector<std::size_t> groups;
    for (std::size_t left = n_dis; left > 0;) {
      std::size_t size = left;
      if (left > 9) {
        size = std::uniform_int_distribution<std::size_t>(6, std::min<std::size_t>(9, left - 6))(rng_);
      }
      groups.push_back(size);
      left -= size;
    }
    std::size_t bases = 0;
    for (std::size_t size : groups) {
      const std::string base = fresh_name();
      std::vector<std::size_t> cats(kCategories.size());
      for (std::size_t i = 0; i < cats.size(); ++i) cats[i] = i;
      std::shuffle(cats.begin(), cats.end(), rng_);
      for (std::size_t j = 0; j < size; ++j) {
        Entity e;
        e.noun = kCategories[cats[j % cats.size()]];
        e.title = base + " (" + e.noun + ")";
        e.mention = base;
        e.disambiguative = true;
        assign_facts(e);
        disambiguative_.push_back(entities_.size());
        entities_.push_back(std::move(e));
      }
      if (chance(rng_, 0.5) && n_places + n_dis + bases < n) {
        Entity e;
        e.noun = kCategories[pick(rng_, kCategories.size())];
        e.title = e.mention = base;
        assign_facts(e);
        plain_.push_back(entities_.size());
        entities_.push_back(std::move(e));
        ++bases;
      }
    }
    if (n < n_places + n_dis + bases + 10) {
      throw ValidationError("synthetic spec leaves too few ordinary documents");
    }
    const std::size_t n_plain = n - n_places - n_dis - bases;
    for (std::size_t i = 0; i < n_plain; ++i) {
      Entity e;
      e.noun = kCategories[pick(rng_, kCategories.size())];
      e.title = e.mention = fresh_name();
      assign_facts(e);
      plain_.push_back(entities_.size());
      entities_.push_back(std::move(e));
    }
    for (auto& e : entities_) e.id = doc_id_of(e.title);
    std::vector<std::size_t> with_year;
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      if (entities_[i].year) with_year.push_back(i);
    }
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      if (!chance(rng_, 0.6)) continue;
      std::size_t t = with_year[pick(rng_, with_year.size())];
      if (t == i) continue;
      entities_[i].link = t;
    }
  }

  std::vector<corpus::Document> documents() {
    std::vector<corpus::Document> docs;
    for (const auto& p : places_) {
      corpus::Document d;
      d.id = doc_id_of(p);
      d.title = p;
      d.sentences = {p, p + " is a region on the northern coast .",
                     p + " has a population of " + format_count(random_count() * 100) + " people .",
                     fill(kFillers[pick(rng_, kFillers.size())], p)};
      d.links.assign(d.sentences.size(), {});
      d.pageview = std::uniform_int_distribution<std::int64_t>(10, 100000)(rng_);
      docs.push_back(std::move(d));
    }
    for (auto& e : entities_) {
      struct Line {
        std::string key, text;
        std::vector<std::string> links;
      };
      std::vector<Line> body;
      const std::string& m = e.mention;
      if (e.year) body.push_back({"year", m + " was established in " + std::to_string(*e.year) + " .", {}});
      if (e.count) body.push_back({"count", m + " has " + format_count(*e.count) + " members .", {}});
      if (e.adjective) body.push_back({"adjective", m + " is widely regarded as " + *e.adjective + " .", {}});
      if (e.pet) body.push_back({"pet", m + " keeps " + indefinite(*e.pet) + " as its mascot .", {}});
      if (e.link) {
        const Entity& t = entities_[*e.link];
        body.push_back({"link", m + " collaborated with " + t.mention + " .", {t.id}});
      }
      const std::size_t fillers = 1 + pick(rng_, 2);
      std::vector<std::size_t> used;
      for (std::size_t i = 0; i < fillers; ++i) {
        std::size_t f = pick(rng_, kFillers.size());
        if (std::find(used.begin(), used.end(), f) != used.end()) continue;
        used.push_back(f);
        body.push_back({"filler", fill(kFillers[f], m), {}});
      }
      std::shuffle(body.begin(), body.end(), rng_);
      body.insert(body.begin(), Line{"place", m + " is " + indefinite(e.noun) + " from " + e.place + " .",
                                     {doc_id_of(e.place)}});
      corpus::Document d;
      d.id = e.id;
      d.title = e.title;
      d.sentences = {e.title};
      d.links = {{}};
      for (auto& line : body) {
        if (line.key != "filler") e.sentence_of[line.key] = static_cast<int>(d.sentences.size());
        d.sentences.push_back(line.text);
        d.links.push_back(line.links);
      }
      d.pageview = std::uniform_int_distribution<std::int64_t>(10, 100000)(rng_);
      docs.push_back(std::move(d));
    }
    return docs;
  }

  std::string subject(const Entity& e) const {
    return e.disambiguative ? "The " + e.noun + " " + e.mention : e.mention;
  }

  bool has(const Entity& e, const std::string& attr) const {
    if (attr == "year") return e.year.has_value();
    if (attr == "count") return e.count.has_value();
    if (attr == "adjective") return e.adjective.has_value();
    if (attr == "pet") return e.pet.has_value();
    if (attr == "place") return true;
    if (attr == "link") return e.link.has_value();
    return false;
  }

  std::string claim_text(const std::string& attr, const std::string& subj, const std::string& value,
                         const std::string& extra = {}) const {
    if (attr == "year") return subj + " was founded in " + value + " .";
    if (attr == "count") return subj + " counts " + value + " members .";
    if (attr == "adjective") return subj + " is considered " + value + " .";
    if (attr == "pet") return subj + " has " + indefinite(value) + " as a mascot .";
    if (attr == "place") return subj + " originated in " + value + " .";
    return subj + " collaborated with " + indefinite(extra) + " founded in " + value + " .";
  }

  std::string value_of(const Entity& e, const std::string& attr) const {
    if (attr == "year") return std::to_string(*e.year);
    if (attr == "count") return format_count(*e.count);
    if (attr == "adjective") return *e.adjective;
    if (attr == "pet") return *e.pet;
    return e.place;
  }

  std::string ancestor(const std::string& leaf, std::size_t up) const {
    std::string cur = leaf;
    for (std::size_t i = 0; i < up; ++i) {
      auto it = parent_.find(cur);
      if (it == parent_.end()) break;
      cur = it->second;
    }
    return cur;
  }

  std::optional<std::size_t> choose_subject(const std::string& attr, bool present) {
    const bool dis = !disambiguative_.empty() && chance(rng_, spec_.disambiguative_subject_rate);
    const auto& pool = dis ? disambiguative_ : plain_;
    for (int attempt = 0; attempt < 200; ++attempt) {
      const std::size_t i = pool[pick(rng_, pool.size())];
      if (has(entities_[i], attr) == present) return i;
    }
    return std::nullopt;
  }

  void make_claims(std::vector<corpus::ClaimRecord>& claims, std::vector<ClaimTrace>& trace) {
    std::set<std::string> texts;
    std::int64_t next_id = 1;
    auto emit = [&](corpus::ClaimRecord c, ClaimTrace t) {
      if (!texts.insert(c.claim).second) return false;
      c.id = t.id = next_id++;
      t.label = c.label;
      claims.push_back(std::move(c));
      trace.push_back(std::move(t));
      return true;
    };
    auto pointer = [&](const Entity& e, const std::string& key) {
      return corpus::EvidencePointer{e.id, e.sentence_of.at(key)};
    };

    const std::size_t per_label = spec_.claims_per_label;
    for (int label = 0; label < 3; ++label) {
      std::size_t made = 0;
      for (std::size_t guard = 0; made < per_label && guard < per_label * 200; ++guard) {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        corpus::ClaimRecord c;
        ClaimTrace t;
        c.label = static_cast<corpus::Label>(label);
        if (label == 0 && u < 0.2) {
          // two-hop: the claim names the linking page, the fact sits on the linked one
          auto s = choose_subject("link", true);
          if (!s) continue;
          const Entity& e = entities_[*s];
          const Entity& target = entities_[*e.link];
          t = {0, "two_hop", "year", e.id, target.id, std::to_string(*target.year),
               std::to_string(*target.year), c.label};
          c.claim = claim_text("link", subject(e), t.claim_value, target.noun);
          c.evidence = {{pointer(e, "link"), pointer(target, "year")}};
        } else if (label == 0 && u < 0.45) {
          auto s = choose_subject("pet", true);
          if (!s) continue;
          const Entity& e = entities_[*s];
          const std::string general = ancestor(*e.pet, 1 + pick(rng_, 3));
          t = {0, "hypernym", "pet", e.id, "", *e.pet, general, c.label};
          c.claim = claim_text("pet", subject(e), general);
          c.evidence = {{pointer(e, "pet")}};
        } else if (label == 0) {
          static const std::array<const char*, 5> attrs{"year", "count", "adjective", "pet", "place"};
          const std::string attr = attrs[pick(rng_, attrs.size())];
          auto s = choose_subject(attr, true);
          if (!s) continue;
          const Entity& e = entities_[*s];
          const std::string v = value_of(e, attr);
          t = {0, "same", attr, e.id, "", v, v, c.label};
          c.claim = claim_text(attr, subject(e), v);
          c.evidence = {{pointer(e, attr)}};
        } else if (label == 1 && u < 0.5) {
          auto s = choose_subject("adjective", true);
          if (!s) continue;
          const Entity& e = entities_[*s];
          const std::string flipped = antonym_.at(*e.adjective);
          t = {0, "antonym", "adjective", e.id, "", *e.adjective, flipped, c.label};
          c.claim = claim_text("adjective", subject(e), flipped);
          c.evidence = {{pointer(e, "adjective")}};
        } else if (label == 1) {
          const std::string attr = chance(rng_, 0.5) ? "year" : "count";
          auto s = choose_subject(attr, true);
          if (!s) continue;
          const Entity& e = entities_[*s];
          std::string flipped;
          if (attr == "year") {
            int d = std::uniform_int_distribution<int>(1, 40)(rng_);
            if (chance(rng_, 0.5)) d = -d;
            flipped = std::to_string(*e.year + d);
          } else {
            const int spread = std::max(1, *e.count / 2);
            int v = *e.count;
            while (v == *e.count || v < 1) v = *e.count + std::uniform_int_distribution<int>(-spread, spread)(rng_);
            flipped = format_count(v);
          }
          t = {0, "number", attr, e.id, "", value_of(e, attr), flipped, c.label};
          c.claim = claim_text(attr, subject(e), flipped);
          c.evidence = {{pointer(e, attr)}};
        } else {
          static const std::array<const char*, 4> attrs{"year", "count", "adjective", "pet"};
          const std::string attr = attrs[pick(rng_, attrs.size())];
          auto s = choose_subject(attr, false);
          if (!s) continue;
          const Entity& e = entities_[*s];
          std::string v;
          if (attr == "year") v = std::to_string(std::uniform_int_distribution<int>(1900, 2019)(rng_));
          else if (attr == "count") v = format_count(random_count());
          else if (attr == "adjective") v = adjectives_[pick(rng_, adjectives_.size())];
          else v = ancestor(pets_[pick(rng_, pets_.size())], pick(rng_, 3));
          t = {0, "absent", attr, e.id, "", "", v, c.label};
          c.claim = claim_text(attr, subject(e), v);
        }
        if (emit(std::move(c), std::move(t))) ++made;
      }
      if (made < per_label) throw ValidationError("synthetic corpus too small for the claim count");
    }
  }

  void split(std::vector<corpus::ClaimRecord>& claims, SyntheticData& out) {
    std::shuffle(claims.begin(), claims.end(), rng_);
    const auto n_train = static_cast<std::size_t>(
        std::llround(static_cast<double>(claims.size()) * spec_.train_fraction));
    out.train.assign(claims.begin(), claims.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.dev.assign(claims.begin() + static_cast<std::ptrdiff_t>(n_train), claims.end());
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(out.train.begin(), out.train.end(), by_id);
    std::sort(out.dev.begin(), out.dev.end(), by_id);
  }

  std::string ontology() const {
    std::ostringstream out;
    std::set<std::string> nouns;
    for (const auto& [c, p] : kTaxonomy) {
      nouns.insert(c);
      nouns.insert(p);
    }
    for (const auto& n : nouns) out << "LEMMA\t" << n << "\tn." << n << '\n';
    for (const auto& [c, p] : kTaxonomy) out << "HYPER\tn." << c << "\tn." << p << '\n';
    for (const auto& [a, b] : kAntonyms) {
      out << "LEMMA\t" << a << "\ta." << a << '\n';
      out << "LEMMA\t" << b << "\ta." << b << '\n';
      out << "ANT\t" << a << '\t' << b << '\n';
    }
    return out.str();
  }

  SyntheticSpec spec_;
  Rng rng_;
  std::set<std::string> names_;
  std::vector<std::string> places_;
  std::vector<Entity> entities_;
  std::vector<std::size_t> disambiguative_;
  std::vector<std::size_t> plain_;
  std::map<std::string, std::string> parent_;
  std::map<std::string, std::string> antonym_;
  std::vector<std::string> pets_;
  std::vector<std::string> adjectives_;
};

}  // namespace

void SyntheticSpec::validate() const {
  if (documents < 30) throw ValidationError("synthetic corpus needs at least 30 documents");
  if (disambiguative_fraction < 0.0 || disambiguative_fraction > 0.5) {
    throw ValidationError("disambiguative fraction must lie in [0, 0.5]");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0, 1)");
  }
  if (claims_per_label == 0) throw ValidationError("claims per label must be positive");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  return Generator(spec).run();
}

void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("corpus.jsonl");
    for (const auto& d : data.documents) corpus::write_document(out, d);
  }
  {
    auto out = open("train.jsonl");
    for (const auto& c : data.train) corpus::write_claim(out, c);
  }
  {
    auto out = open("dev.jsonl");
    for (const auto& c : data.dev) corpus::write_claim(out, c);
  }
  {
    auto out = open("ontology.tsv");
    out << data.ontology_tsv;
  }
  {
    auto out = open("trace.jsonl");
    for (const auto& t : data.trace) {
      out << nlohmann::json{{"id", t.id},
                            {"kind", t.kind},
                            {"attribute", t.attribute},
                            {"entity", t.entity},
                            {"target", t.target},
                            {"doc_value", t.doc_value},
                            {"claim_value", t.claim_value},
                            {"label", corpus::label_name(t.label)}}
                 .dump()
          << '\n';
    }
  }
}

}  // namespace fever::pipeline
