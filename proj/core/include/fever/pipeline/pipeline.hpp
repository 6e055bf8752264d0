#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fever/corpus/corpus.hpp"
#include "fever/corpus/dataset.hpp"
#include "fever/nsmn/model.hpp"
#include "fever/nsmn/training.hpp"
#include "fever/pipeline/jsonl.hpp"
#include "fever/retrieval/retrieval.hpp"
#include "fever/scoring/scoring.hpp"
#include "fever/selection/selection.hpp"
#include "fever/verification/features.hpp"
#include "fever/verification/ontology.hpp"
#include "fever/verification/verification.hpp"

namespace fever::pipeline {

enum class Stage { doc, sent, verif };
std::string_view stage_name(Stage s);
Stage parse_stage(std::string_view name);

struct StageTraining {
  std::size_t epochs = 3;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
};

struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path train_claims;
  std::filesystem::path dev_claims;
  /// Claims to run inference on; defaults to dev_claims.
  std::filesystem::path claims;
  std::filesystem::path ontology;
  /// Optional "token v1 .. vd" text file; hashed vectors when empty.
  std::filesystem::path embeddings;
  std::filesystem::path work_dir = "work";
  std::filesystem::path doc_model;
  std::filesystem::path sent_model;
  std::filesystem::path verif_model;

  retrieval::RetrievalConfig retrieval;
  selection::SelectionConfig selection;
  verification::FeatureConfig features;
  bool enhance = true;
  bool annealed = true;
  nsmn::Dims dims;
  std::uint64_t seed = 1;
  StageTraining doc_training{3, 128, 1e-3};
  StageTraining sent_training{3, 128, 1e-3};
  StageTraining verif_training{6, 32, 1e-3};
  std::size_t workers = 1;

  std::filesystem::path checkpoint(Stage s) const;
  std::filesystem::path inference_claims() const { return claims.empty() ? dev_claims : claims; }
  /// Range checks on the numeric settings.
  void validate() const;
  /// Throws ValidationError naming the first listed path that does not exist.
  static void require_files(const std::vector<std::pair<std::string, std::filesystem::path>>& files);
  nlohmann::json to_json() const;
};

nsmn::StaticEmbeddings load_statics(const std::filesystem::path& path, std::size_t dim);

/// Fresh model whose vocabularies cover the corpus and the given claims.
nsmn::Model new_model(nsmn::Head head, const nsmn::FeatureLayout& features, const nsmn::Dims& dims,
                      const corpus::Corpus& corpus, const std::vector<corpus::ClaimRecord>& claims,
                      nsmn::StaticEmbeddings statics, std::uint64_t seed);

// In-memory stages. Results line up with `claims`.

std::vector<RetrievedRecord> retrieve_all(const std::vector<corpus::ClaimRecord>& claims,
                                          const corpus::Corpus& corpus,
                                          const nsmn::PairScorer* doc_model,
                                          const retrieval::RetrievalConfig& config,
                                          std::size_t workers = 1);

std::vector<SelectedRecord> select_all(const std::vector<corpus::ClaimRecord>& claims,
                                       const std::vector<RetrievedRecord>& retrieved,
                                       const corpus::Corpus& corpus,
                                       const nsmn::PairScorer& sent_model,
                                       const selection::SelectionConfig& config,
                                       std::size_t workers = 1);

struct VerifyContext {
  const corpus::Corpus* corpus = nullptr;
  const nsmn::Model* verif_model = nullptr;
  const verification::Ontology* graph = nullptr;
  verification::FeatureConfig features;
  bool enhance = false;
  /// Only needed for enhancement.
  const nsmn::PairScorer* doc_model = nullptr;
  const nsmn::PairScorer* sent_model = nullptr;
  retrieval::RetrievalConfig retrieval;
  selection::SelectionConfig selection;
};

std::vector<verification::Prediction> verify_all(const std::vector<corpus::ClaimRecord>& claims,
                                                 const std::vector<SelectedRecord>& selected,
                                                 const VerifyContext& ctx, std::size_t workers = 1);

/// Applies enhancement to every record; the pool is left untouched.
std::vector<SelectedRecord> enhance_all(const std::vector<corpus::ClaimRecord>& claims,
                                        const std::vector<SelectedRecord>& selected,
                                        const VerifyContext& ctx, std::size_t workers = 1);

std::vector<scoring::PredictionRecord> to_records(
    const std::vector<verification::Prediction>& predictions);

std::map<std::int64_t, std::vector<corpus::EvidencePointer>> evidence_map(
    const std::vector<SelectedRecord>& selected);

// Training. Each returns the trained model and its per-epoch report.

struct TrainedModel {
  nsmn::Model model;
  nsmn::TrainReport report;
};

nsmn::TrainConfig train_config(const StageTraining& t, std::uint64_t seed);

TrainedModel train_doc_model(const corpus::Corpus& corpus,
                             const std::vector<corpus::ClaimRecord>& train,
                             const std::vector<corpus::ClaimRecord>& dev,
                             const nsmn::StaticEmbeddings& statics, const nsmn::Dims& dims,
                             const StageTraining& t, std::uint64_t seed, std::ostream* log);

/// Dev metric is the share of verifiable dev claims whose selected
/// evidence covers a gold group.
TrainedModel train_sent_model(const corpus::Corpus& corpus,
                              const std::vector<corpus::ClaimRecord>& train,
                              const std::vector<RetrievedRecord>& train_retrieved,
                              const std::vector<corpus::ClaimRecord>& dev,
                              const std::vector<RetrievedRecord>& dev_retrieved,
                              const nsmn::StaticEmbeddings& statics, const nsmn::Dims& dims,
                              const selection::SelectionConfig& selection, bool annealed,
                              const StageTraining& t, std::uint64_t seed, std::ostream* log);

/// Dev metric is label accuracy on the dev claims with their selected
/// evidence (not gold evidence), so the kept epoch reflects pipeline use.
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
                               const StageTraining& t, std::uint64_t seed, std::ostream* log);

// File-backed stages used by the command-line tool.

struct IngestSummary {
  std::size_t documents = 0;
  std::size_t disambiguative = 0;
  std::size_t sentences = 0;
  std::size_t links = 0;
  std::size_t claims = 0;
};
IngestSummary ingest_files(const std::filesystem::path& corpus,
                           const std::vector<std::filesystem::path>& claim_files);

/// Trains one stage from the files named in `config` and writes the
/// checkpoint plus `<work_dir>/train-<stage>.log`. The sentence and
/// verification stages need the upstream checkpoints.
void train_stage(Stage stage, const PipelineConfig& config, std::ostream* log);

void retrieve_file(const PipelineConfig& config, const std::filesystem::path& claims,
                   const std::filesystem::path& out);
void select_file(const PipelineConfig& config, const std::filesystem::path& claims,
                 const std::filesystem::path& retrieved, const std::filesystem::path& out);
void verify_file(const PipelineConfig& config, const std::filesystem::path& claims,
                 const std::filesystem::path& selected, const std::filesystem::path& out);
scoring::ScoreReport score_files(const std::filesystem::path& gold,
                                 const std::filesystem::path& predictions,
                                 std::optional<scoring::SubsetKind> subset,
                                 const std::filesystem::path& corpus);

struct PipelineResult {
  std::filesystem::path predictions;
  scoring::ScoreReport report;
  nlohmann::json manifest;
};

/// retrieve -> select -> verify (with optional enhancement) -> score over
/// `config.inference_claims()`. Intermediates, score.json and manifest.json
/// land in work_dir. Failures are rethrown with the stage name prefixed.
PipelineResult run_pipeline(const PipelineConfig& config, std::ostream* log = nullptr);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

}  // namespace fever::pipeline
