#pragma once

#include <random>
#include <string>

#include "fever/numerics/autodiff.hpp"
#include "fever/numerics/param_set.hpp"

namespace fever::num {

/// Shape of a bidirectional LSTM layer. The output has 2·hidden rows.
struct BiLstmShape {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;

  std::size_t output_dim() const noexcept { return 2 * hidden_dim; }
};

/// Gate weights of one direction: W is 4h×d_in, U is 4h×h, b is 4h×1.
/// Gate blocks are stacked in the order input, forget, cell, output.
struct LstmWeights {
  Var W;
  Var U;
  Var b;
};

struct BiLstmWeights {
  LstmWeights forward;
  LstmWeights backward;
};

/// Registers `<prefix>.{fw,bw}.{W,U,b}` with uniform init in [−range, range].
void add_bilstm_params(ParamSet& params, const std::string& prefix, BiLstmShape shape,
                       double init_range, std::mt19937_64& rng);

/// Binds a registered BiLSTM onto a tape. When `trainable` is false the
/// leaves are read-only and receive no gradient.
BiLstmWeights bind_bilstm(Tape& tape, ParamSet& params, const std::string& prefix);
BiLstmWeights bind_bilstm(Tape& tape, const ParamSet& params, const std::string& prefix);

namespace ops {

/// Bidirectional LSTM over the columns of `seq` (d_in×n). Rows 0..h−1 hold
/// the left-to-right states, rows h..2h−1 the right-to-left states. Initial
/// hidden and cell states are zero.
Var bilstm(const Var& seq, const BiLstmWeights& weights);

}  // namespace ops

}  // namespace fever::num
