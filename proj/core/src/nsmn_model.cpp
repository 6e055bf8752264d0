#include "fever/nsmn/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "fever/error.hpp"

namespace fever::nsmn {

using num::Tape;
using num::Tensor;
using num::Var;
namespace ops = num::ops;

std::size_t head_size(Head head) { return head == Head::extraction ? 2 : 3; }

std::string_view head_name(Head head) {
  return head == Head::extraction ? "extraction" : "verification";
}

Head parse_head(std::string_view name) {
  if (name == "extraction") return Head::extraction;
  if (name == "verification") return Head::verification;
  throw ValidationError("unknown head '" + std::string(name) + "'");
}

std::string_view architecture_name(Architecture arch) {
  return arch == Architecture::nsmn ? "nsmn" : "maxpool-encoder";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "nsmn") return Architecture::nsmn;
  if (name == "maxpool-encoder") return Architecture::maxpool_encoder;
  throw ValidationError("unknown architecture '" + std::string(name) + "'");
}

namespace layers {

Var encode(const Var& U, const num::BiLstmWeights& encoder) { return ops::bilstm(U, encoder); }

Alignment align(const Var& U_bar, const Var& V_bar) {
  if (U_bar.rows() != V_bar.rows()) {
    throw DimensionError("align: encoded widths differ, " + U_bar.value().shape_string() +
                         " vs " + V_bar.value().shape_string());
  }
  Var E = ops::matmul(ops::transpose(U_bar), V_bar);
  Var U_tilde = ops::matmul(V_bar, ops::softmax_col(ops::transpose(E)));
  Var V_tilde = ops::matmul(U_bar, ops::softmax_col(E));
  return {E, U_tilde, V_tilde};
}

Var combine(const Var& X_bar, const Var& X_tilde, const AffineWeights& f) {
  const std::array<Var, 4> parts{X_bar, X_tilde, ops::sub(X_bar, X_tilde), ops::mul(X_bar, X_tilde)};
  return ops::affine(ops::concat_rows(parts), f.W, f.b, num::Activation::rectifier);
}

Var match(const Var& S, const Var& U_star, const num::BiLstmWeights& matcher) {
  if (U_star.rows() == 0) return ops::bilstm(S, matcher);
  if (U_star.cols() != S.cols()) {
    throw DimensionError("match: shortcut " + U_star.value().shape_string() +
                         " does not align with " + S.value().shape_string());
  }
  const std::array<Var, 2> parts{S, U_star};
  return ops::bilstm(ops::concat_rows(parts), matcher);
}

Var output(const Var& P, const Var& Q, const OutputWeights& h) {
  Var p = ops::maxpool_row(P);
  Var q = ops::maxpool_row(Q);
  const std::array<Var, 4> parts{p, q, ops::abs(ops::sub(p, q)), ops::mul(p, q)};
  Var hidden =
      ops::affine(ops::concat_rows(parts), h.first.W, h.first.b, num::Activation::rectifier);
  return ops::affine(hidden, h.second.W, h.second.b, num::Activation::none);
}

}  // namespace layers

corpus::Label MatchResult::label() const {
  if (scores.size() != 3) throw LabelError("label() needs a verification head result");
  const auto it = std::max_element(scores.begin(), scores.end());
  return static_cast<corpus::Label>(it - scores.begin());
}

std::vector<double> MatchResult::probabilities() const { return num::softmax(scores); }

MatchResult make_match_result(Head head, std::vector<double> scores) {
  if (scores.size() != head_size(head)) {
    throw DimensionError("head produced " + std::to_string(scores.size()) + " scores");
  }
  MatchResult r;
  if (head == Head::extraction) {
    r.m_plus = scores[0];
    r.m_minus = scores[1];
    const double p = 1.0 / (1.0 + std::exp(r.m_minus - r.m_plus));
    r.p = std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
  }
  r.scores = std::move(scores);
  return r;
}

Model::Model(ModelConfig config, Vocabulary vocab, NumberVocab numbers, StaticEmbeddings statics,
             std::uint64_t seed)
    : config_(config),
      vocab_(std::move(vocab)),
      numbers_(std::move(numbers)),
      statics_(std::move(statics)) {
  const Dims& d = config_.dims;
  if (d.d1 == 0 || d.d3 == 0 || d.d1 % 2 != 0 || d.d3 % 2 != 0) {
    throw ValidationError("d1 and d3 must be positive and even");
  }
  if (d.d2 == 0 || d.out_hidden == 0) throw ValidationError("d2 and out_hidden must be positive");
  if (statics_.dim() != d.static_dim) {
    throw ValidationError("static embeddings have width " + std::to_string(statics_.dim()) +
                          ", model expects " + std::to_string(d.static_dim));
  }
  std::mt19937_64 rng(seed);
  const double r = config_.init_range;
  params_.add_uniform("embed.word", vocab_.size(), d.trainable_dim, r, rng);
  if (config_.features.number) {
    params_.add_uniform("embed.number", numbers_.size(), FeatureLayout::kNumberWidth, r, rng);
  }
  num::add_bilstm_params(params_, "encoder", {config_.input_dim(), d.d1 / 2}, r, rng);
  std::size_t pooled = d.d1;
  if (config_.architecture == Architecture::nsmn) {
    params_.add_uniform("combine.W", d.d2, 4 * d.d1, r, rng);
    params_.add_uniform("combine.b", d.d2, 1, r, rng);
    num::add_bilstm_params(params_, "matcher", {d.d2 + config_.shortcut_dim(), d.d3 / 2}, r, rng);
    pooled = d.d3;
  }
  params_.add_uniform("output.W1", d.out_hidden, 4 * pooled, r, rng);
  params_.add_uniform("output.b1", d.out_hidden, 1, r, rng);
  params_.add_uniform("output.W2", head_size(config_.head), d.out_hidden, r, rng);
  params_.add_uniform("output.b2", head_size(config_.head), 1, r, rng);
}

SequenceInput Model::prepare(const std::vector<std::string>& tokens,
                             const Tensor& features) const {
  static const std::vector<std::string> sentinel{std::string(kEmptyToken)};
  const bool empty = tokens.empty();
  const std::vector<std::string>& toks = empty ? sentinel : tokens;
  const std::size_t n = toks.size(), sd = config_.dims.static_dim;
  const std::size_t fw = config_.features.constant_width();

  SequenceInput in;
  in.word_ids.reserve(n);
  in.static_vectors = Tensor(sd, n);
  std::vector<double> buf(sd);
  for (std::size_t j = 0; j < n; ++j) {
    in.word_ids.push_back(vocab_.id(toks[j]));
    statics_.lookup(toks[j], buf.data());
    for (std::size_t k = 0; k < sd; ++k) in.static_vectors(k, j) = buf[k];
  }
  if (config_.features.number) {
    in.number_ids.reserve(n);
    for (const auto& t : toks) in.number_ids.push_back(empty ? -1 : numbers_.id(t));
  }
  if (!empty && !features.empty()) {
    if (features.rows() != fw || features.cols() != n) {
      throw DimensionError("token features " + features.shape_string() + ", expected [" +
                           std::to_string(fw) + "x" + std::to_string(n) + "]");
    }
    in.features = features;
  } else {
    in.features = Tensor(fw, n);
  }
  return in;
}

void Model::validate(const SequenceInput& s) const {
  const std::size_t n = s.length();
  if (n == 0) throw EmptySequenceError("model input sequence is empty");
  if (s.static_vectors.rows() != config_.dims.static_dim || s.static_vectors.cols() != n) {
    throw DimensionError("static vectors " + s.static_vectors.shape_string() +
                         " do not match the sequence");
  }
  if (config_.features.number && s.number_ids.size() != n) {
    throw DimensionError("number ids do not match the sequence length");
  }
  const std::size_t fw = config_.features.constant_width();
  if (s.features.rows() != fw || (fw > 0 && s.features.cols() != n)) {
    throw DimensionError("token features " + s.features.shape_string() +
                         " do not match the feature layout");
  }
}

template <typename Params>
Var Model::forward(Tape& tape, Params& params, const SequenceInput& u,
                   const SequenceInput& v) const {
  validate(u);
  validate(v);
  Var word_table = tape.param(params.at("embed.word"));
  const bool use_numbers = config_.features.number;
  Var number_table = use_numbers ? tape.param(params.at("embed.number")) : Var{};

  // Returns the full input and the shortcut (all channels but the static one).
  auto channels = [&](const SequenceInput& s) {
    std::vector<Var> shortcut{ops::gather_columns(word_table, s.word_ids)};
    if (use_numbers) shortcut.push_back(ops::gather_columns(number_table, s.number_ids));
    if (s.features.rows() > 0) shortcut.push_back(tape.constant(s.features));
    std::vector<Var> full{tape.constant(s.static_vectors)};
    full.insert(full.end(), shortcut.begin(), shortcut.end());
    Var star = shortcut.size() == 1 ? shortcut[0] : ops::concat_rows(shortcut);
    return std::pair{ops::concat_rows(full), star};
  };
  auto [U, U_star] = channels(u);
  auto [V, V_star] = channels(v);

  const num::BiLstmWeights encoder = num::bind_bilstm(tape, params, "encoder");
  const layers::OutputWeights out{
      {tape.param(params.at("output.W1")), tape.param(params.at("output.b1"))},
      {tape.param(params.at("output.W2")), tape.param(params.at("output.b2"))}};

  Var U_bar = layers::encode(U, encoder);
  Var V_bar = layers::encode(V, encoder);
  if (config_.architecture == Architecture::maxpool_encoder) {
    return layers::output(U_bar, V_bar, out);
  }
  const layers::Alignment a = layers::align(U_bar, V_bar);
  const layers::AffineWeights f{tape.param(params.at("combine.W")),
                                tape.param(params.at("combine.b"))};
  Var S = layers::combine(U_bar, a.U_tilde, f);
  Var T = layers::combine(V_bar, a.V_tilde, f);
  const num::BiLstmWeights matcher = num::bind_bilstm(tape, params, "matcher");
  Var P = layers::match(S, U_star, matcher);
  Var Q = layers::match(T, V_star, matcher);
  return layers::output(P, Q, out);
}

Var Model::logits_for_training(Tape& tape, const SequenceInput& u, const SequenceInput& v) {
  return forward(tape, params_, u, v);
}

Var Model::logits(Tape& tape, const SequenceInput& u, const SequenceInput& v) const {
  return forward(tape, params_, u, v);
}

MatchResult Model::score_inputs(const SequenceInput& u, const SequenceInput& v) const {
  Tape tape;
  const Var out = logits(tape, u, v);
  const auto vals = out.value().values();
  return make_match_result(config_.head, std::vector<double>(vals.begin(), vals.end()));
}

MatchResult Model::score(const std::vector<std::string>& evidence,
                         const std::vector<std::string>& claim) const {
  return score_inputs(prepare(evidence), prepare(claim));
}

}  // namespace fever::nsmn
