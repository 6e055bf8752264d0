#pragma once

// Neural semantic matching network: a shared BiLSTM encoder, soft alignment
// between the two sequences, a rectified affine combiner, a BiLSTM matcher
// fed with a shortcut of the non-static input channels, and a two-layer
// output network over max-pooled summaries.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fever/corpus/dataset.hpp"
#include "fever/numerics/autodiff.hpp"
#include "fever/numerics/lstm.hpp"
#include "fever/numerics/param_set.hpp"
#include "fever/nsmn/vocabulary.hpp"

namespace fever::nsmn {

enum class Head { extraction, verification };
enum class Architecture { nsmn, maxpool_encoder };

std::size_t head_size(Head head);
std::string_view head_name(Head head);
Head parse_head(std::string_view name);
std::string_view architecture_name(Architecture arch);
Architecture parse_architecture(std::string_view name);

/// Which task features make up the feature channel. The number block is a
/// trainable lookup; the WordNet and SRS blocks are supplied per token.
struct FeatureLayout {
  static constexpr std::size_t kWordNetWidth = 30;
  static constexpr std::size_t kNumberWidth = 5;
  static constexpr std::size_t kSrsWidth = 2;

  bool wordnet = false;
  bool number = false;
  bool srs = false;

  /// Rows of the per-token constant block (WordNet then SRS).
  std::size_t constant_width() const noexcept {
    return (wordnet ? kWordNetWidth : 0) + (srs ? kSrsWidth : 0);
  }
  std::size_t width() const noexcept { return constant_width() + (number ? kNumberWidth : 0); }
  bool operator==(const FeatureLayout&) const = default;
};

struct Dims {
  std::size_t static_dim = 16;
  std::size_t trainable_dim = 16;
  /// Encoder output d1, combiner output d2, matcher output d3. d1 and d3
  /// are BiLSTM outputs and must be even.
  std::size_t d1 = 16;
  std::size_t d2 = 16;
  std::size_t d3 = 16;
  std::size_t out_hidden = 16;

  bool operator==(const Dims&) const = default;
};

struct ModelConfig {
  Architecture architecture = Architecture::nsmn;
  Head head = Head::extraction;
  Dims dims;
  FeatureLayout features;
  double init_range = 0.08;

  std::size_t input_dim() const noexcept {
    return dims.static_dim + dims.trainable_dim + features.width();
  }
  /// Width of the shortcut channel: everything except the static vectors.
  std::size_t shortcut_dim() const noexcept { return dims.trainable_dim + features.width(); }
};

/// One sequence prepared for the network. Columns are tokens.
struct SequenceInput {
  std::vector<int> word_ids;
  num::Tensor static_vectors;  // static_dim × n
  std::vector<int> number_ids;  // -1 for non-number tokens; empty when unused
  num::Tensor features;         // constant_width × n

  std::size_t length() const noexcept { return word_ids.size(); }
};

/// The four layers as free functions over taped values.
namespace layers {

struct AffineWeights {
  num::Var W;
  num::Var b;
};

struct OutputWeights {
  AffineWeights first;
  AffineWeights second;
};

struct Alignment {
  num::Var E;        // n × m, E = Ūᵀ·V̄
  num::Var U_tilde;  // d1 × n, V̄ weighted by softmax_col(Eᵀ)
  num::Var V_tilde;  // d1 × m, Ū weighted by softmax_col(E)
};

num::Var encode(const num::Var& U, const num::BiLstmWeights& encoder);
Alignment align(const num::Var& U_bar, const num::Var& V_bar);
/// relu(f([X̄; X̃; X̄ − X̃; X̄ ∘ X̃])).
num::Var combine(const num::Var& X_bar, const num::Var& X_tilde, const AffineWeights& f);
/// bilstm([S; U*]); a shortcut with zero rows is skipped.
num::Var match(const num::Var& S, const num::Var& U_star, const num::BiLstmWeights& matcher);
/// Two affine layers, rectified in between, over [p; q; |p − q|; p ∘ q] where
/// p and q are row-wise max pools of P and Q.
num::Var output(const num::Var& P, const num::Var& Q, const OutputWeights& h);

}  // namespace layers

struct MatchResult {
  std::vector<double> scores;
  /// Extraction head only.
  double m_plus = 0.0;
  double m_minus = 0.0;
  double p = 0.5;

  /// Verification head: argmax of the three scores, first index on ties.
  corpus::Label label() const;
  /// Softmax over the scores.
  std::vector<double> probabilities() const;
};

/// Scores a (evidence-side, claim-side) token pair with an extraction head.
/// Implementations must be safe to call concurrently.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual MatchResult score(const std::vector<std::string>& evidence,
                            const std::vector<std::string>& claim) const = 0;
};

class Model : public PairScorer {
 public:
  static constexpr std::string_view kEmptyToken = "<empty>";

  Model(ModelConfig config, Vocabulary vocab, NumberVocab numbers, StaticEmbeddings statics,
        std::uint64_t seed);

  const ModelConfig& config() const noexcept { return config_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const NumberVocab& numbers() const noexcept { return numbers_; }
  const StaticEmbeddings& statics() const noexcept { return statics_; }
  num::ParamSet& params() noexcept { return params_; }
  const num::ParamSet& params() const noexcept { return params_; }

  /// Builds network input for `tokens`. `features` must have
  /// config().features.constant_width() rows and one column per token (it may
  /// be empty when that width is 0). An empty token list becomes a single
  /// sentinel token with zero features.
  SequenceInput prepare(const std::vector<std::string>& tokens,
                        const num::Tensor& features = {}) const;

  /// Logit column (head_size × 1) with gradients flowing into params().
  num::Var logits_for_training(num::Tape& tape, const SequenceInput& u, const SequenceInput& v);
  /// Logit column over read-only parameters.
  num::Var logits(num::Tape& tape, const SequenceInput& u, const SequenceInput& v) const;

  MatchResult score_inputs(const SequenceInput& u, const SequenceInput& v) const;
  MatchResult score(const std::vector<std::string>& evidence,
                    const std::vector<std::string>& claim) const override;

 private:
  template <typename Params>
  num::Var forward(num::Tape& tape, Params& params, const SequenceInput& u,
                   const SequenceInput& v) const;
  void validate(const SequenceInput& s) const;

  ModelConfig config_;
  Vocabulary vocab_;
  NumberVocab numbers_;
  StaticEmbeddings statics_;
  num::ParamSet params_;
};

/// Turns raw head scores into a MatchResult.
MatchResult make_match_result(Head head, std::vector<double> scores);

}  // namespace fever::nsmn
