#include "fever/nsmn/checkpoint.hpp"

#include <fstream>

#include "fever/error.hpp"

namespace fever::nsmn {

using nlohmann::json;
using num::Tensor;

namespace {

constexpr std::string_view kFormat = "fever-nsmn-checkpoint";
constexpr int kVersion = 1;

json tensor_json(const Tensor& t) {
  const auto v = t.values();
  return json{{"rows", t.rows()}, {"cols", t.cols()}, {"values", std::vector<double>(v.begin(), v.end())}};
}

Tensor tensor_from(const json& j) {
  Tensor t(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto vals = j.at("values").get<std::vector<double>>();
  if (vals.size() != t.size()) throw ValidationError("checkpoint tensor has the wrong size");
  std::copy(vals.begin(), vals.end(), t.values().begin());
  return t;
}

}  // namespace

void save_checkpoint(std::ostream& out, const Model& model, const json& meta) {
  const ModelConfig& c = model.config();
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["config"] = {{"architecture", architecture_name(c.architecture)},
                 {"head", head_name(c.head)},
                 {"static_dim", c.dims.static_dim},
                 {"trainable_dim", c.dims.trainable_dim},
                 {"d1", c.dims.d1},
                 {"d2", c.dims.d2},
                 {"d3", c.dims.d3},
                 {"out_hidden", c.dims.out_hidden},
                 {"wordnet", c.features.wordnet},
                 {"number", c.features.number},
                 {"srs", c.features.srs},
                 {"init_range", c.init_range}};
  j["vocab"] = model.vocabulary().words();
  j["numbers"] = model.numbers().forms();
  json vectors = json::object();
  for (const auto& [token, vec] : model.statics().table()) vectors[token] = vec;
  j["static"] = {{"dim", model.statics().dim()},
                 {"hash_seed", model.statics().hash_seed()},
                 {"vectors", std::move(vectors)}};
  json params = json::object();
  json m = json::object();
  json v = json::object();
  for (const auto& [name, p] : model.params()) {
    params[name] = tensor_json(p.value);
    m[name] = tensor_json(model.params().first_moment(name));
    v[name] = tensor_json(model.params().second_moment(name));
  }
  j["params"] = std::move(params);
  j["optimizer"] = {{"step", model.params().step()}, {"m", std::move(m)}, {"v", std::move(v)}};
  j["meta"] = meta.is_null() ? json::object() : meta;
  out << j.dump() << '\n';
  if (!out) throw Error("failed writing checkpoint");
}

void save_checkpoint(const std::filesystem::path& path, const Model& model, const json& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  save_checkpoint(out, model, meta);
}

Checkpoint load_checkpoint(std::istream& in) {
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != kFormat || j.at("version").get<int>() != kVersion) {
      throw ValidationError("not a checkpoint of a supported version");
    }
    const json& cj = j.at("config");
    ModelConfig c;
    c.architecture = parse_architecture(cj.at("architecture").get<std::string>());
    c.head = parse_head(cj.at("head").get<std::string>());
    c.dims.static_dim = cj.at("static_dim").get<std::size_t>();
    c.dims.trainable_dim = cj.at("trainable_dim").get<std::size_t>();
    c.dims.d1 = cj.at("d1").get<std::size_t>();
    c.dims.d2 = cj.at("d2").get<std::size_t>();
    c.dims.d3 = cj.at("d3").get<std::size_t>();
    c.dims.out_hidden = cj.at("out_hidden").get<std::size_t>();
    c.features.wordnet = cj.at("wordnet").get<bool>();
    c.features.number = cj.at("number").get<bool>();
    c.features.srs = cj.at("srs").get<bool>();
    c.init_range = cj.at("init_range").get<double>();

    const json& sj = j.at("static");
    StaticEmbeddings statics(sj.at("dim").get<std::size_t>(), sj.at("hash_seed").get<std::uint64_t>());
    for (const auto& [token, vec] : sj.at("vectors").items()) {
      statics.set(token, vec.get<std::vector<double>>());
    }
    Model model(c, Vocabulary::from_words(j.at("vocab").get<std::vector<std::string>>()),
                NumberVocab::from_forms(j.at("numbers").get<std::vector<std::string>>()),
                std::move(statics), 0);

    const json& pj = j.at("params");
    if (pj.size() != model.params().size()) {
      throw ValidationError("checkpoint parameter set does not match its configuration");
    }
    const json& oj = j.at("optimizer");
    const auto step = oj.at("step").get<std::uint64_t>();
    for (auto& [name, p] : model.params()) {
      Tensor value = tensor_from(pj.at(name));
      if (!value.same_shape(p.value)) {
        throw ValidationError("checkpoint tensor '" + name + "' has shape " +
                              value.shape_string() + ", expected " + p.value.shape_string());
      }
      p.value = std::move(value);
      model.params().set_optimizer_state(step, name, tensor_from(oj.at("m").at(name)),
                                         tensor_from(oj.at("v").at(name)));
    }
    return Checkpoint{std::move(model), j.value("meta", json::object())};
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed checkpoint: ") + e.what());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  return load_checkpoint(in);
}

}  // namespace fever::nsmn
