#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "fever/numerics/tensor.hpp"
#include "fever/nsmn/model.hpp"
#include "fever/verification/ontology.hpp"

namespace fever::verification {

enum class Side { evidence, claim };

/// Index of each WordNet channel in the 10-channel block. The hyponym and
/// hypernym channels describe the other-side word relative to the current
/// token: "hypernym" fires for "dog" when the other side holds "animal".
enum Channel : std::size_t {
  kExactLemma = 0,
  kAntonym,
  kHyponym,
  kHypernym,
  kHyponym1,
  kHypernym1,
  kHyponym2,
  kHypernym2,
  kHyponymFar,
  kHypernymFar,
  kChannelCount
};

using WordNetVector = std::array<double, 30>;

/// Lowercase plus singularization.
std::string lemma(std::string_view token);

/// The 30 indicator values for one token: each fired channel c writes the
/// side's position code ([1,0] evidence, [0,1] claim) and a 1 into entries
/// 3c..3c+2. Punctuation tokens never fire.
WordNetVector wordnet_channels(std::string_view token, const std::vector<std::string>& other,
                               Side side, const Ontology& graph);
/// wordnet_channels for every token, sharing lookups across tokens.
std::vector<WordNetVector> wordnet_features(const std::vector<std::string>& tokens,
                                            const std::vector<std::string>& other, Side side,
                                            const Ontology& graph);

struct FeatureConfig {
  bool wordnet = true;
  bool number = true;
  bool srs_sent = true;
  bool srs_doc = false;

  nsmn::FeatureLayout layout() const { return {wordnet, number, srs_sent || srs_doc}; }
};

/// Parses a comma-separated list drawn from "wn", "num", "srs", "srs-sent",
/// "srs-doc" ("srs" means "srs-sent"). "none" or an empty string turns every
/// feature off.
FeatureConfig parse_features(std::string_view list);
std::string features_string(const FeatureConfig& config);

/// Document-stage and sentence-stage relatedness carried by one token.
struct Srs {
  double doc = 0.0;
  double sent = 0.0;
};

/// Constant per-token feature block (WordNet rows, then the two SRS rows),
/// laid out as the model expects. `srs` is empty or one entry per token;
/// components whose flag is off are written as zero.
num::Tensor token_features(const std::vector<std::string>& tokens,
                           const std::vector<std::string>& other, Side side,
                           const std::vector<Srs>& srs, const Ontology& graph,
                           const FeatureConfig& config);

/// The trainable 5-value number embedding the model would use for `token`,
/// or zeros for non-numbers.
std::array<double, 5> number_feature(const nsmn::Model& model, std::string_view token);

}  // namespace fever::verification
