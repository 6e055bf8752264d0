// fever: command-line front end for the retrieval / selection / verification
// pipeline. Every option can also be given as a key in an INI file passed
// with --config; flags on the command line win.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fever/error.hpp"
#include "fever/pipeline/pipeline.hpp"
#include "fever/pipeline/synthetic.hpp"

namespace fs = std::filesystem;
using fever::pipeline::PipelineConfig;

namespace {

struct Options {
  PipelineConfig cfg;
  std::string strategy = "km+pageview+dnsmn";
  std::string features = "wn,num,srs";
  std::size_t dim = 32;
  double lr = 1e-3;
  std::uint64_t retrieval_seed = 1;
};

void add_config_options(CLI::App& app, Options& o) {
  auto& c = o.cfg;
  app.add_option("--corpus", c.corpus, "corpus JSONL");
  app.add_option("--train-claims", c.train_claims, "training claims JSONL");
  app.add_option("--dev-claims", c.dev_claims, "development claims JSONL");
  app.add_option("--claims", c.claims, "claims to run on (default: dev claims)");
  app.add_option("--ontology", c.ontology, "ontology TSV");
  app.add_option("--embeddings", c.embeddings, "static word vectors (optional)");
  app.add_option("--work-dir", c.work_dir, "checkpoints and intermediate files")->capture_default_str();
  app.add_option("--doc-model", c.doc_model, "document model checkpoint");
  app.add_option("--sent-model", c.sent_model, "sentence model checkpoint");
  app.add_option("--verif-model", c.verif_model, "verification model checkpoint");

  app.add_option("--k", c.retrieval.k, "documents kept per claim")->capture_default_str();
  app.add_option("--doc-threshold", c.retrieval.doc_threshold)->capture_default_str();
  app.add_option("--strategy", o.strategy,
                 "km | km+tfidf | km+pageview | km+dnsmn | km+pageview+dnsmn")
      ->capture_default_str();
  app.add_option("--disambiguative-cap", c.retrieval.disambiguative_cap,
                 "random cap for the plain keyword strategy")
      ->capture_default_str();
  app.add_option("--retrieval-seed", o.retrieval_seed)->capture_default_str();
  app.add_option("--sent-threshold", c.selection.sent_threshold)->capture_default_str();
  app.add_option("--features", o.features, "wn,num,srs,srs-sent,srs-doc or none")
      ->capture_default_str();
  app.add_flag("--enhance,!--no-enhance", c.enhance, "hyperlink evidence enhancement")
      ->capture_default_str();
  app.add_flag("--annealed,!--no-annealed", c.annealed, "annealed negative sampling")
      ->capture_default_str();

  app.add_option("--seed", c.seed)->capture_default_str();
  app.add_option("--dim", o.dim, "hidden width of every layer")->capture_default_str();
  app.add_option("--static-dim", c.dims.static_dim)->capture_default_str();
  app.add_option("--trainable-dim", c.dims.trainable_dim)->capture_default_str();
  app.add_option("--lr", o.lr)->capture_default_str();
  app.add_option("--doc-epochs", c.doc_training.epochs)->capture_default_str();
  app.add_option("--sent-epochs", c.sent_training.epochs)->capture_default_str();
  app.add_option("--verif-epochs", c.verif_training.epochs)->capture_default_str();
  app.add_option("--doc-batch", c.doc_training.batch_size)->capture_default_str();
  app.add_option("--sent-batch", c.sent_training.batch_size)->capture_default_str();
  app.add_option("--verif-batch", c.verif_training.batch_size)->capture_default_str();
  app.add_option("--workers", c.workers, "parallel claims per stage")->capture_default_str();
}

PipelineConfig finish(Options& o) {
  auto c = o.cfg;
  c.retrieval.strategy = fever::retrieval::parse_strategy(o.strategy);
  c.retrieval.seed = o.retrieval_seed;
  c.features = fever::verification::parse_features(o.features);
  c.dims.d1 = c.dims.d2 = c.dims.d3 = c.dims.out_hidden = o.dim;
  for (auto* t : {&c.doc_training, &c.sent_training, &c.verif_training}) t->learning_rate = o.lr;
  c.validate();
  return c;
}

int run(int argc, char** argv) {
  CLI::App app{"Claim verification pipeline: retrieval, sentence selection, verification"};
  app.set_config("--config", "", "INI file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  o.cfg.dims = {16, 16, 32, 32, 32, 32};
  add_config_options(app, o);

  auto* ingest = app.add_subcommand("ingest", "validate a corpus and claim files");

  auto* gen = app.add_subcommand("gen-synthetic", "write a seeded synthetic corpus and claims");
  fever::pipeline::SyntheticSpec spec;
  fs::path gen_out;
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--documents", spec.documents)->capture_default_str();
  gen->add_option("--disambiguative-fraction", spec.disambiguative_fraction)->capture_default_str();
  gen->add_option("--claims-per-label", spec.claims_per_label)->capture_default_str();
  gen->add_option("--train-fraction", spec.train_fraction)->capture_default_str();

  auto* train = app.add_subcommand("train", "train one stage model");
  std::string stage;
  train->add_option("stage", stage, "doc | sent | verif")->required();

  fs::path model, out, retrieved, selected, gold, pred, corpus_override;
  auto* retrieve = app.add_subcommand("retrieve", "document retrieval");
  retrieve->add_option("--model", model, "document model checkpoint");
  retrieve->add_option("--out", out)->required();

  auto* select = app.add_subcommand("select", "sentence selection");
  select->add_option("--model", model, "sentence model checkpoint");
  select->add_option("--retrieved", retrieved)->required();
  select->add_option("--out", out)->required();

  auto* verify = app.add_subcommand("verify", "claim verification");
  verify->add_option("--model", model, "verification model checkpoint");
  verify->add_option("--selected", selected)->required();
  verify->add_option("--out", out)->required();

  auto* score = app.add_subcommand("score", "score predictions against gold claims");
  std::string subset;
  score->add_option("--gold", gold)->required();
  score->add_option("--pred", pred)->required();
  score->add_option("--subset", subset, "doc | sentence")->check(CLI::IsMember({"doc", "sentence"}));

  auto* pipeline = app.add_subcommand("pipeline", "retrieve, select, verify and score");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*gen) {
    spec.seed = o.cfg.seed;
    const auto data = fever::pipeline::generate_synthetic(spec);
    fever::pipeline::write_synthetic(data, gen_out);
    std::cout << nlohmann::json{{"documents", data.documents.size()},
                                {"disambiguative", data.disambiguative_count},
                                {"train", data.train.size()},
                                {"dev", data.dev.size()},
                                {"out", gen_out.string()}}
                     .dump()
              << '\n';
    return 0;
  }
  if (*score) {
    std::optional<fever::scoring::SubsetKind> kind;
    if (subset == "doc") kind = fever::scoring::SubsetKind::doc;
    if (subset == "sentence") kind = fever::scoring::SubsetKind::sentence;
    const auto report = fever::pipeline::score_files(gold, pred, kind, o.cfg.corpus);
    std::cout << fever::scoring::to_json(report).dump(2) << '\n';
    return 0;
  }

  PipelineConfig cfg = finish(o);
  if (*ingest) {
    std::vector<fs::path> files;
    for (const auto& p : {cfg.train_claims, cfg.dev_claims, cfg.claims}) {
      if (!p.empty()) files.push_back(p);
    }
    PipelineConfig::require_files({{"corpus", cfg.corpus}});
    const auto s = fever::pipeline::ingest_files(cfg.corpus, files);
    std::cout << nlohmann::json{{"documents", s.documents},
                                {"disambiguative", s.disambiguative},
                                {"sentences", s.sentences},
                                {"links", s.links},
                                {"claims", s.claims}}
                     .dump()
              << '\n';
  } else if (*train) {
    fever::pipeline::train_stage(fever::pipeline::parse_stage(stage), cfg, &std::clog);
  } else if (*retrieve) {
    if (!model.empty()) cfg.doc_model = model;
    fever::pipeline::retrieve_file(cfg, cfg.inference_claims(), out);
  } else if (*select) {
    if (!model.empty()) cfg.sent_model = model;
    fever::pipeline::select_file(cfg, cfg.inference_claims(), retrieved, out);
  } else if (*verify) {
    if (!model.empty()) cfg.verif_model = model;
    fever::pipeline::verify_file(cfg, cfg.inference_claims(), selected, out);
  } else if (*pipeline) {
    const auto result = fever::pipeline::run_pipeline(cfg, &std::clog);
    std::cout << fever::scoring::to_json(result.report).dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fever::ValidationError& e) {
    std::cerr << "fever: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fever: " << e.what() << '\n';
    return 2;
  }
}
