#include "fever/pipeline/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "fever/error.hpp"
#include "fever/nsmn/checkpoint.hpp"
#include "fever/nsmn/vocabulary.hpp"
#include "fever/parallel.hpp"
#include "fever/text/tokenizer.hpp"

namespace fever::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::doc: return "doc";
    case Stage::sent: return "sent";
    case Stage::verif: return "verif";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  if (name == "doc") return Stage::doc;
  if (name == "sent") return Stage::sent;
  if (name == "verif") return Stage::verif;
  throw ValidationError("unknown stage '" + std::string(name) + "' (doc, sent, verif)");
}

fs::path PipelineConfig::checkpoint(Stage s) const {
  const fs::path& explicit_path = s == Stage::doc ? doc_model : s == Stage::sent ? sent_model : verif_model;
  if (!explicit_path.empty()) return explicit_path;
  return work_dir / (std::string(stage_name(s)) + ".nsmn.json");
}

void PipelineConfig::validate() const {
  retrieval.validate();
  selection.validate();
  for (const auto* t : {&doc_training, &sent_training, &verif_training}) {
    if (t->epochs == 0 || t->batch_size == 0) throw ValidationError("epochs and batch size must be positive");
    if (!(t->learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  }
  if (workers == 0) throw ValidationError("workers must be at least 1");
  if (dims.d1 % 2 != 0 || dims.d3 % 2 != 0) throw ValidationError("d1 and d3 must be even");
}

void PipelineConfig::require_files(const std::vector<std::pair<std::string, fs::path>>& files) {
  for (const auto& [what, path] : files) {
    if (path.empty()) throw ValidationError(what + " path is not set");
    if (!fs::exists(path)) throw ValidationError(what + " '" + path.string() + "' does not exist");
  }
}

json PipelineConfig::to_json() const {
  auto training = [](const StageTraining& t) {
    return json{{"epochs", t.epochs}, {"batch_size", t.batch_size}, {"learning_rate", t.learning_rate}};
  };
  return json{
      {"corpus", corpus.string()},
      {"train_claims", train_claims.string()},
      {"dev_claims", dev_claims.string()},
      {"claims", inference_claims().string()},
      {"ontology", ontology.string()},
      {"embeddings", embeddings.string()},
      {"retrieval",
       {{"strategy", retrieval::strategy_name(retrieval.strategy)},
        {"k", retrieval.k},
        {"doc_threshold", retrieval.doc_threshold},
        {"disambiguative_cap", retrieval.disambiguative_cap},
        {"seed", retrieval.seed}}},
      {"selection", {{"sent_threshold", selection.sent_threshold}, {"max_evidence", selection.max_evidence}}},
      {"features", verification::features_string(features)},
      {"enhance", enhance},
      {"annealed", annealed},
      {"dims",
       {dims.static_dim, dims.trainable_dim, dims.d1, dims.d2, dims.d3, dims.out_hidden}},
      {"seed", seed},
      {"train", {{"doc", training(doc_training)}, {"sent", training(sent_training)},
                 {"verif", training(verif_training)}}},
  };
}

nsmn::StaticEmbeddings load_statics(const fs::path& path, std::size_t dim) {
  if (path.empty()) return nsmn::StaticEmbeddings(dim);
  auto statics = nsmn::StaticEmbeddings::load(path);
  if (statics.dim() != dim) {
    throw ValidationError("embeddings in '" + path.string() + "' have dimension " +
                          std::to_string(statics.dim()) + ", expected " + std::to_string(dim));
  }
  return statics;
}

nsmn::Model new_model(nsmn::Head head, const nsmn::FeatureLayout& features, const nsmn::Dims& dims,
                      const corpus::Corpus& corpus, const std::vector<corpus::ClaimRecord>& claims,
                      nsmn::StaticEmbeddings statics, std::uint64_t seed) {
  std::vector<std::vector<std::string>> texts;
  for (const auto& d : corpus.documents()) {
    for (const auto& s : d.sentences) texts.push_back(text::tokenize(s));
  }
  for (const auto& c : claims) texts.push_back(text::tokenize(c.claim));
  nsmn::ModelConfig config;
  config.head = head;
  config.dims = dims;
  config.features = features;
  return nsmn::Model(config, nsmn::Vocabulary::build(texts), nsmn::NumberVocab::build(texts),
                     std::move(statics), seed);
}

std::vector<RetrievedRecord> retrieve_all(const std::vector<corpus::ClaimRecord>& claims,
                                          const corpus::Corpus& corpus,
                                          const nsmn::PairScorer* doc_model,
                                          const retrieval::RetrievalConfig& config,
                                          std::size_t workers) {
  config.validate();
  return parallel_map(claims.size(), workers, [&](std::size_t i) {
    return RetrievedRecord{claims[i].id,
                           retrieval::retrieve_documents(claims[i].claim, corpus, doc_model, config)};
  });
}

namespace {

verification::EvidenceItem to_item(const selection::RankedSentence& s,
                                   const std::map<std::string, double>& doc_p) {
  auto it = doc_p.find(s.doc_id);
  return {s.doc_id, s.sentence, it == doc_p.end() ? 1.0 : it->second, s.p, s.m_plus, s.text};
}

void check_aligned(std::size_t claims, std::size_t records, const char* what) {
  if (claims != records) {
    throw ValidationError(std::string(what) + " has " + std::to_string(records) +
                          " records for " + std::to_string(claims) + " claims");
  }
}

void check_ids(const std::vector<corpus::ClaimRecord>& claims, std::int64_t id, std::size_t i,
               const char* what) {
  if (claims[i].id != id) {
    throw ValidationError(std::string(what) + " record " + std::to_string(i) + " has id " +
                          std::to_string(id) + ", claim file has " + std::to_string(claims[i].id));
  }
}

}  // namespace

std::vector<SelectedRecord> select_all(const std::vector<corpus::ClaimRecord>& claims,
                                       const std::vector<RetrievedRecord>& retrieved,
                                       const corpus::Corpus& corpus,
                                       const nsmn::PairScorer& sent_model,
                                       const selection::SelectionConfig& config,
                                       std::size_t workers) {
  config.validate();
  check_aligned(claims.size(), retrieved.size(), "retrieval output");
  for (std::size_t i = 0; i < claims.size(); ++i) check_ids(claims, retrieved[i].id, i, "retrieval");
  return parallel_map(claims.size(), workers, [&](std::size_t i) {
    std::map<std::string, double> doc_p;
    for (const auto& d : retrieved[i].docs) doc_p.emplace(d.doc_id, d.p);
    const auto result =
        selection::select_sentences(claims[i].claim, retrieved[i].doc_ids(), corpus, sent_model, config);
    SelectedRecord r;
    r.id = claims[i].id;
    for (const auto& s : result.evidence) r.evidence.push_back(to_item(s, doc_p));
    for (const auto& s : result.pool) r.pool.push_back(to_item(s, doc_p));
    return r;
  });
}

std::vector<SelectedRecord> enhance_all(const std::vector<corpus::ClaimRecord>& claims,
                                        const std::vector<SelectedRecord>& selected,
                                        const VerifyContext& ctx, std::size_t workers) {
  check_aligned(claims.size(), selected.size(), "selection output");
  if (ctx.sent_model == nullptr) throw ValidationError("enhancement needs a sentence model");
  return parallel_map(claims.size(), workers, [&](std::size_t i) {
    SelectedRecord r = selected[i];
    r.evidence = verification::enhance_evidence(claims[i].claim, r.evidence, *ctx.corpus,
                                                ctx.doc_model, *ctx.sent_model, ctx.retrieval,
                                                ctx.selection);
    return r;
  });
}

std::vector<verification::Prediction> verify_all(const std::vector<corpus::ClaimRecord>& claims,
                                                 const std::vector<SelectedRecord>& selected,
                                                 const VerifyContext& ctx, std::size_t workers) {
  check_aligned(claims.size(), selected.size(), "selection output");
  for (std::size_t i = 0; i < claims.size(); ++i) check_ids(claims, selected[i].id, i, "selection");
  const auto& input = ctx.enhance ? enhance_all(claims, selected, ctx, workers) : selected;
  return parallel_map(claims.size(), workers, [&](std::size_t i) {
    return verification::verify(claims[i].id, claims[i].claim, input[i].evidence, *ctx.verif_model,
                                 *ctx.graph, ctx.features);
  });
}

std::vector<scoring::PredictionRecord> to_records(
    const std::vector<verification::Prediction>& predictions) {
  std::vector<scoring::PredictionRecord> out;
  out.reserve(predictions.size());
  for (const auto& p : predictions) out.push_back({p.claim_id, p.label, p.evidence});
  return out;
}

std::map<std::int64_t, std::vector<corpus::EvidencePointer>> evidence_map(
    const std::vector<SelectedRecord>& selected) {
  std::map<std::int64_t, std::vector<corpus::EvidencePointer>> out;
  for (const auto& r : selected) {
    auto& v = out[r.id];
    for (const auto& e : r.evidence) v.push_back(e.pointer());
  }
  return out;
}

nsmn::TrainConfig train_config(const StageTraining& t, std::uint64_t seed) {
  nsmn::TrainConfig c;
  c.epochs = t.epochs;
  c.batch_size = t.batch_size;
  c.adam.lr = t.learning_rate;
  c.seed = seed;
  return c;
}

TrainedModel train_doc_model(const corpus::Corpus& corpus,
                             const std::vector<corpus::ClaimRecord>& train,
                             const std::vector<corpus::ClaimRecord>& dev,
                             const nsmn::StaticEmbeddings& statics, const nsmn::Dims& dims,
                             const StageTraining& t, std::uint64_t seed, std::ostream* log) {
  TrainedModel out{new_model(nsmn::Head::extraction, {}, dims, corpus, train, statics, seed), {}};
  const auto pairs = retrieval::make_doc_training_pairs(train, corpus);
  const auto dev_pairs = retrieval::make_doc_training_pairs(dev, corpus);
  if (log) *log << "doc pairs " << pairs.size() << " dev " << dev_pairs.size() << '\n';
  out.report = retrieval::train_dnsmn(pairs, corpus, out.model, train_config(t, seed), dev_pairs, log);
  return out;
}

TrainedModel train_sent_model(const corpus::Corpus& corpus,
                              const std::vector<corpus::ClaimRecord>& train,
                              const std::vector<RetrievedRecord>& train_retrieved,
                              const std::vector<corpus::ClaimRecord>& dev,
                              const std::vector<RetrievedRecord>& dev_retrieved,
                              const nsmn::StaticEmbeddings& statics, const nsmn::Dims& dims,
                              const selection::SelectionConfig& selection, bool annealed,
                              const StageTraining& t, std::uint64_t seed, std::ostream* log) {
  check_aligned(train.size(), train_retrieved.size(), "training retrieval output");
  TrainedModel out{new_model(nsmn::Head::extraction, {}, dims, corpus, train, statics, seed), {}};
  std::vector<std::vector<std::string>> docs;
  for (const auto& r : train_retrieved) docs.push_back(r.doc_ids());
  const auto pairs = selection::make_sent_training_pairs(train, docs, corpus);
  if (log) {
    *log << "sentence pairs positive " << pairs.positives.size() << " negative "
         << pairs.negatives.size() << '\n';
  }
  nsmn::DevMetric metric;
  std::vector<corpus::ClaimRecord> dev_verifiable;
  std::vector<RetrievedRecord> dev_docs;
  for (std::size_t i = 0; i < dev.size() && i < dev_retrieved.size(); ++i) {
    if (dev[i].verifiable()) {
      dev_verifiable.push_back(dev[i]);
      dev_docs.push_back(dev_retrieved[i]);
    }
  }
  if (!dev_verifiable.empty()) {
    metric = [&](const nsmn::Model& m) {
      return scoring::ofever(evidence_map(select_all(dev_verifiable, dev_docs, corpus, m, selection)),
                             dev_verifiable);
    };
  }
  out.report = selection::train_snsmn(pairs, corpus, out.model, train_config(t, seed), annealed,
                                      metric, log);
  return out;
}

TrainedModel train_verif_model(const corpus::Corpus& corpus,
                               const std::vector<corpus::ClaimRecord>& train,
                               const std::vector<SelectedRecord>& train_selected,
                               const std::vector<corpus::ClaimRecord>& dev,
                               const std::vector<SelectedRecord>& dev_selected,
                               const nsmn::PairScorer* doc_model,
                               const nsmn::PairScorer* sent_model,
                               const verification::Ontology& graph,
                               const verification::FeatureConfig& features,
                               const nsmn::StaticEmbeddings& statics, const nsmn::Dims& dims,
                               const StageTraining& t, std::uint64_t seed, std::ostream* log) {
  check_aligned(train.size(), train_selected.size(), "training selection output");
  TrainedModel out{
      new_model(nsmn::Head::verification, features.layout(), dims, corpus, train, statics, seed), {}};
  auto pools = [](const std::vector<SelectedRecord>& s) {
    std::vector<std::vector<verification::EvidenceItem>> p;
    for (const auto& r : s) p.push_back(r.pool);
    return p;
  };
  const auto data = verification::build_verification_training(train, pools(train_selected), corpus,
                                                              doc_model, sent_model, seed);
  // model selection looks at the evidence the pipeline actually hands over
  std::vector<verification::VerificationExample> dev_data;
  if (dev.size() == dev_selected.size()) {
    for (std::size_t i = 0; i < dev.size(); ++i) {
      dev_data.push_back({dev[i].id, dev[i].claim, dev_selected[i].evidence, dev[i].label});
    }
  }
  if (log) *log << "verification examples " << data.size() << " dev " << dev_data.size() << '\n';
  out.report = verification::train_vnsmn(data, out.model, graph, features, train_config(t, seed),
                                         dev_data, log);
  return out;
}

IngestSummary ingest_files(const fs::path& corpus_path, const std::vector<fs::path>& claim_files) {
  const auto corpus = corpus::Corpus::load(corpus_path);
  IngestSummary s;
  s.documents = corpus.size();
  for (const auto& d : corpus.documents()) {
    if (corpus::is_disambiguative(d.title)) ++s.disambiguative;
    s.sentences += d.body_sentence_count();
    for (const auto& l : d.links) s.links += l.size();
  }
  for (const auto& f : claim_files) {
    const auto claims = corpus::load_claims(f);
    corpus::validate_claims(claims, corpus);
    s.claims += claims.size();
  }
  return s;
}

namespace {

struct Loaded {
  corpus::Corpus corpus;
  std::optional<nsmn::Checkpoint> doc;
  std::optional<nsmn::Checkpoint> sent;
  std::optional<nsmn::Checkpoint> verif;
  std::optional<verification::Ontology> graph;

  const nsmn::PairScorer* doc_scorer() const { return doc ? &doc->model : nullptr; }
};

std::vector<corpus::ClaimRecord> load_valid_claims(const fs::path& path, const corpus::Corpus& corpus) {
  auto claims = corpus::load_claims(path);
  corpus::validate_claims(claims, corpus);
  return claims;
}

nsmn::Checkpoint load_model(const PipelineConfig& config, Stage s) {
  const fs::path path = config.checkpoint(s);
  if (!fs::exists(path)) {
    throw ValidationError("missing " + std::string(stage_name(s)) + " checkpoint '" + path.string() +
                          "'; run `train " + std::string(stage_name(s)) + "` first");
  }
  return nsmn::load_checkpoint(path);
}

bool needs_doc_model(const PipelineConfig& config) {
  return retrieval::uses_dnsmn(config.retrieval.strategy);
}

template <typename Record, typename Write>
void write_jsonl(const fs::path& path, const std::vector<Record>& records, Write write) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (const auto& r : records) write(out, r);
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::vector<RetrievedRecord> read_retrieved_file(const fs::path& path) {
  auto in = open_input(path);
  return read_retrieved(in);
}

std::vector<SelectedRecord> read_selected_file(const fs::path& path, const corpus::Corpus& corpus) {
  auto in = open_input(path);
  return read_selected(in, corpus);
}

void save_model(const PipelineConfig& config, Stage s, const TrainedModel& trained) {
  const fs::path path = config.checkpoint(s);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  json epochs = json::array();
  for (const auto& e : trained.report.epochs) {
    json r{{"epoch", e.epoch}, {"examples", e.examples}, {"loss", e.mean_loss}};
    if (e.sampling_p) r["p_e"] = *e.sampling_p;
    if (e.dev_metric) r["dev"] = *e.dev_metric;
    epochs.push_back(std::move(r));
  }
  json meta{{"stage", stage_name(s)}, {"best_epoch", trained.report.best_epoch}, {"epochs", epochs}};
  if (s == Stage::verif) meta["features"] = verification::features_string(config.features);
  save_checkpoint(path, trained.model, meta);
}

}  // namespace

void train_stage(Stage stage, const PipelineConfig& config, std::ostream* log) {
  config.validate();
  PipelineConfig::require_files({{"corpus", config.corpus}, {"training claims", config.train_claims}});
  const auto corpus = corpus::Corpus::load(config.corpus);
  const auto train = load_valid_claims(config.train_claims, corpus);
  std::vector<corpus::ClaimRecord> dev;
  if (!config.dev_claims.empty()) {
    PipelineConfig::require_files({{"dev claims", config.dev_claims}});
    dev = load_valid_claims(config.dev_claims, corpus);
  }
  const auto statics = load_statics(config.embeddings, config.dims.static_dim);

  fs::create_directories(config.work_dir);
  const fs::path log_path = config.work_dir / ("train-" + std::string(stage_name(stage)) + ".log");
  std::ofstream file_log(log_path);
  // tee the training log to the file and the caller's stream
  struct Tee : std::streambuf {
    std::streambuf* a;
    std::streambuf* b;
    int overflow(int c) override {
      if (c == EOF) return std::char_traits<char>::not_eof(c);
      if (a) a->sputc(static_cast<char>(c));
      if (b) b->sputc(static_cast<char>(c));
      return c;
    }
  } tee;
  tee.a = file_log.rdbuf();
  tee.b = log ? log->rdbuf() : nullptr;
  std::ostream out(&tee);

  const std::size_t w = config.workers;
  std::optional<nsmn::Checkpoint> doc;
  if (stage != Stage::doc && needs_doc_model(config)) doc = load_model(config, Stage::doc);
  const nsmn::PairScorer* doc_scorer = doc ? &doc->model : nullptr;

  switch (stage) {
    case Stage::doc: {
      const auto trained = train_doc_model(corpus, train, dev, statics, config.dims,
                                           config.doc_training, config.seed, &out);
      save_model(config, stage, trained);
      break;
    }
    case Stage::sent: {
      const auto train_docs = retrieve_all(train, corpus, doc_scorer, config.retrieval, w);
      const auto dev_docs = retrieve_all(dev, corpus, doc_scorer, config.retrieval, w);
      write_jsonl(config.work_dir / "train.retrieved.jsonl", train_docs, write_retrieved);
      const auto trained = train_sent_model(corpus, train, train_docs, dev, dev_docs, statics,
                                            config.dims, config.selection, config.annealed,
                                            config.sent_training, config.seed, &out);
      save_model(config, stage, trained);
      break;
    }
    case Stage::verif: {
      PipelineConfig::require_files({{"ontology", config.ontology}});
      const auto graph = verification::Ontology::load(config.ontology);
      const auto sent = load_model(config, Stage::sent);
      auto pools_for = [&](const std::vector<corpus::ClaimRecord>& claims) {
        return select_all(claims, retrieve_all(claims, corpus, doc_scorer, config.retrieval, w),
                          corpus, sent.model, config.selection, w);
      };
      const auto train_sel = pools_for(train);
      const auto dev_sel = pools_for(dev);
      write_jsonl(config.work_dir / "train.selected.jsonl", train_sel, write_selected);
      const auto trained = train_verif_model(corpus, train, train_sel, dev, dev_sel, doc_scorer,
                                             &sent.model, graph, config.features, statics,
                                             config.dims, config.verif_training, config.seed, &out);
      save_model(config, stage, trained);
      break;
    }
  }
  out.flush();
}

void retrieve_file(const PipelineConfig& config, const fs::path& claims_path, const fs::path& out) {
  config.validate();
  PipelineConfig::require_files({{"corpus", config.corpus}, {"claims", claims_path}});
  const auto corpus = corpus::Corpus::load(config.corpus);
  const auto claims = load_valid_claims(claims_path, corpus);
  std::optional<nsmn::Checkpoint> doc;
  if (needs_doc_model(config)) doc = load_model(config, Stage::doc);
  write_jsonl(out, retrieve_all(claims, corpus, doc ? &doc->model : nullptr, config.retrieval,
                                config.workers),
              write_retrieved);
}

void select_file(const PipelineConfig& config, const fs::path& claims_path, const fs::path& retrieved,
                 const fs::path& out) {
  config.validate();
  PipelineConfig::require_files(
      {{"corpus", config.corpus}, {"claims", claims_path}, {"retrieval output", retrieved}});
  const auto corpus = corpus::Corpus::load(config.corpus);
  const auto claims = load_valid_claims(claims_path, corpus);
  const auto sent = load_model(config, Stage::sent);
  write_jsonl(out,
              select_all(claims, read_retrieved_file(retrieved), corpus, sent.model,
                         config.selection, config.workers),
              write_selected);
}

void verify_file(const PipelineConfig& config, const fs::path& claims_path, const fs::path& selected,
                 const fs::path& out) {
  config.validate();
  PipelineConfig::require_files({{"corpus", config.corpus},
                                 {"claims", claims_path},
                                 {"selection output", selected},
                                 {"ontology", config.ontology}});
  const auto corpus = corpus::Corpus::load(config.corpus);
  const auto claims = load_valid_claims(claims_path, corpus);
  const auto graph = verification::Ontology::load(config.ontology);
  const auto verif = load_model(config, Stage::verif);
  std::optional<nsmn::Checkpoint> doc, sent;
  if (config.enhance) {
    sent = load_model(config, Stage::sent);
    if (needs_doc_model(config)) doc = load_model(config, Stage::doc);
  }
  VerifyContext ctx{&corpus,        &verif.model, &graph, config.features, config.enhance,
                    doc ? &doc->model : nullptr, sent ? &sent->model : nullptr, config.retrieval,
                    config.selection};
  write_jsonl(out, verify_all(claims, read_selected_file(selected, corpus), ctx, config.workers),
              write_prediction);
}

scoring::ScoreReport score_files(const fs::path& gold_path, const fs::path& predictions,
                                 std::optional<scoring::SubsetKind> subset, const fs::path& corpus_path) {
  PipelineConfig::require_files({{"gold claims", gold_path}, {"predictions", predictions}});
  auto gold = corpus::load_claims(gold_path);
  if (subset) {
    PipelineConfig::require_files({{"corpus", corpus_path}});
    gold = scoring::difficult_subset(gold, *subset, corpus::Corpus::load(corpus_path));
  }
  auto in = open_input(predictions);
  const auto records = read_predictions(in);
  return scoring::score(scoring::index_predictions(records), gold);
}

std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << nsmn::fnv1a(buf.str());
  return hex.str();
}

namespace {

template <typename Fn>
auto run_stage(const char* name, std::ostream* log, Fn fn) {
  if (log) *log << "stage " << name << '\n';
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, std::ostream* log) {
  config.validate();
  const fs::path claims_path = config.inference_claims();
  PipelineConfig::require_files({{"corpus", config.corpus},
                                 {"claims", claims_path},
                                 {"ontology", config.ontology}});
  // all checkpoints are checked before any work starts
  Loaded m{corpus::Corpus::load(config.corpus), {}, {}, {}, {}};
  if (needs_doc_model(config)) m.doc = load_model(config, Stage::doc);
  m.sent = load_model(config, Stage::sent);
  m.verif = load_model(config, Stage::verif);
  m.graph = verification::Ontology::load(config.ontology);
  const auto claims = load_valid_claims(claims_path, m.corpus);

  const fs::path dir = config.work_dir;
  fs::create_directories(dir);
  const fs::path retrieved_path = dir / "retrieved.jsonl";
  const fs::path selected_path = dir / "selected.jsonl";
  const fs::path predictions_path = dir / "predictions.jsonl";
  const fs::path score_path = dir / "score.json";
  const std::size_t w = config.workers;

  const auto retrieved = run_stage("retrieve", log, [&] {
    auto r = retrieve_all(claims, m.corpus, m.doc_scorer(), config.retrieval, w);
    write_jsonl(retrieved_path, r, write_retrieved);
    return r;
  });
  const auto selected = run_stage("select", log, [&] {
    auto s = select_all(claims, retrieved, m.corpus, m.sent->model, config.selection, w);
    write_jsonl(selected_path, s, write_selected);
    return s;
  });
  const auto predictions = run_stage("verify", log, [&] {
    VerifyContext ctx{&m.corpus,        &m.verif->model, &*m.graph,       config.features,
                      config.enhance,   m.doc_scorer(),  &m.sent->model, config.retrieval,
                      config.selection};
    auto p = verify_all(claims, selected, ctx, w);
    write_jsonl(predictions_path, p, write_prediction);
    return p;
  });
  const auto report = run_stage("score", log, [&] {
    auto r = scoring::score(scoring::index_predictions(to_records(predictions)), claims);
    std::ofstream out(score_path, std::ios::binary);
    out << scoring::to_json(r).dump(2) << '\n';
    return r;
  });

  json files = json::object();
  for (const auto& p : {retrieved_path, selected_path, predictions_path, score_path}) {
    files[p.filename().string()] = {{"fnv1a64", file_hash(p)}, {"bytes", fs::file_size(p)}};
  }
  json inputs = json::object();
  for (const auto& p : {config.corpus, claims_path, config.ontology}) {
    inputs[p.string()] = file_hash(p);
  }
  for (Stage s : {Stage::doc, Stage::sent, Stage::verif}) {
    if (s == Stage::doc && !needs_doc_model(config)) continue;
    inputs[config.checkpoint(s).string()] = file_hash(config.checkpoint(s));
  }
  json manifest{{"config", config.to_json()}, {"inputs", inputs}, {"artifacts", files}};
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
  return {predictions_path, report, manifest};
}

}  // namespace fever::pipeline
