#include "fever/numerics/lstm.hpp"

#include <cmath>
#include <memory>

#include "fever/error.hpp"

namespace fever::num {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Per-direction activations cached for backpropagation through time.
// Index t is the position in the input sequence, not the processing step.
struct DirectionCache {
  std::size_t hidden = 0;
  std::vector<double> gates;  // n × 4h, activated (i, f, g, o)
  std::vector<double> cell;   // n × h
  std::vector<double> tanh_cell;
  std::vector<double> state;  // n × h
};

void check_weights(const Tensor& W, const Tensor& U, const Tensor& b, std::size_t d_in) {
  const std::size_t h = U.cols();
  if (W.rows() != 4 * h || U.rows() != 4 * h || b.rows() != 4 * h || b.cols() != 1) {
    throw DimensionError("bilstm: inconsistent gate weights W " + W.shape_string() + ", U " +
                         U.shape_string() + ", b " + b.shape_string());
  }
  if (W.cols() != d_in) {
    throw DimensionError("bilstm: W " + W.shape_string() + " incompatible with input of " +
                         std::to_string(d_in) + " rows");
  }
}

void run_direction(const Tensor& x, const Tensor& W, const Tensor& U, const Tensor& b,
                   bool reverse, DirectionCache& cache) {
  const std::size_t n = x.cols(), d = x.rows(), h = U.cols(), g4 = 4 * h;
  cache.hidden = h;
  cache.gates.assign(n * g4, 0.0);
  cache.cell.assign(n * h, 0.0);
  cache.tanh_cell.assign(n * h, 0.0);
  cache.state.assign(n * h, 0.0);
  std::vector<double> z(g4);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t t = reverse ? n - 1 - step : step;
    const bool has_prev = step > 0;
    const std::size_t prev = reverse ? t + 1 : t - 1;
    for (std::size_t r = 0; r < g4; ++r) {
      double acc = b(r, 0);
      const double* wrow = W.data() + r * d;
      for (std::size_t k = 0; k < d; ++k) acc += wrow[k] * x(k, t);
      if (has_prev) {
        const double* urow = U.data() + r * h;
        const double* hp = cache.state.data() + prev * h;
        for (std::size_t k = 0; k < h; ++k) acc += urow[k] * hp[k];
      }
      z[r] = acc;
    }
    double* gates = cache.gates.data() + t * g4;
    for (std::size_t k = 0; k < h; ++k) {
      gates[k] = sigmoid(z[k]);
      gates[h + k] = sigmoid(z[h + k]);
      gates[2 * h + k] = std::tanh(z[2 * h + k]);
      gates[3 * h + k] = sigmoid(z[3 * h + k]);
    }
    for (std::size_t k = 0; k < h; ++k) {
      const double c_prev = has_prev ? cache.cell[prev * h + k] : 0.0;
      const double c = gates[h + k] * c_prev + gates[k] * gates[2 * h + k];
      cache.cell[t * h + k] = c;
      cache.tanh_cell[t * h + k] = std::tanh(c);
      cache.state[t * h + k] = gates[3 * h + k] * cache.tanh_cell[t * h + k];
    }
  }
}

// Backpropagation through time for one direction. `row_offset` selects the
// block of the output gradient that belongs to this direction.
void backprop_direction(const Tensor& x, const Tensor& W, const Tensor& U,
                        const DirectionCache& cache, const Tensor& gout, std::size_t row_offset,
                        bool reverse, Tensor* gx, Tensor& gW, Tensor& gU, Tensor& gb) {
  const std::size_t n = x.cols(), d = x.rows(), h = cache.hidden, g4 = 4 * h;
  std::vector<double> dh_next(h, 0.0), dc_next(h, 0.0), dz(g4), dh(h);
  for (std::size_t step = n; step-- > 0;) {
    const std::size_t t = reverse ? n - 1 - step : step;
    const bool has_prev = step > 0;
    const std::size_t prev = reverse ? t + 1 : t - 1;
    const double* gates = cache.gates.data() + t * g4;
    for (std::size_t k = 0; k < h; ++k) dh[k] = gout(row_offset + k, t) + dh_next[k];
    for (std::size_t k = 0; k < h; ++k) {
      const double i = gates[k], f = gates[h + k], g = gates[2 * h + k], o = gates[3 * h + k];
      const double tc = cache.tanh_cell[t * h + k];
      const double c_prev = has_prev ? cache.cell[prev * h + k] : 0.0;
      const double d_o = dh[k] * tc;
      const double dc = dh[k] * o * (1.0 - tc * tc) + dc_next[k];
      dz[k] = dc * g * i * (1.0 - i);
      dz[h + k] = dc * c_prev * f * (1.0 - f);
      dz[2 * h + k] = dc * i * (1.0 - g * g);
      dz[3 * h + k] = d_o * o * (1.0 - o);
      dc_next[k] = dc * f;
    }
    for (std::size_t r = 0; r < g4; ++r) {
      const double dzr = dz[r];
      gb(r, 0) += dzr;
      if (dzr == 0.0) continue;
      double* gwrow = gW.data() + r * d;
      for (std::size_t k = 0; k < d; ++k) gwrow[k] += dzr * x(k, t);
      if (has_prev) {
        double* gurow = gU.data() + r * h;
        const double* hp = cache.state.data() + prev * h;
        for (std::size_t k = 0; k < h; ++k) gurow[k] += dzr * hp[k];
      }
    }
    if (gx != nullptr) {
      for (std::size_t r = 0; r < g4; ++r) {
        const double dzr = dz[r];
        if (dzr == 0.0) continue;
        const double* wrow = W.data() + r * d;
        for (std::size_t k = 0; k < d; ++k) (*gx)(k, t) += wrow[k] * dzr;
      }
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    if (has_prev) {
      for (std::size_t r = 0; r < g4; ++r) {
        const double dzr = dz[r];
        if (dzr == 0.0) continue;
        const double* urow = U.data() + r * h;
        for (std::size_t k = 0; k < h; ++k) dh_next[k] += urow[k] * dzr;
      }
    }
  }
}

template <typename Params>
BiLstmWeights bind_impl(Tape& tape, Params& params, const std::string& prefix) {
  auto one = [&](const char* dir) {
    const std::string base = prefix + "." + dir + ".";
    return LstmWeights{tape.param(params.at(base + "W")), tape.param(params.at(base + "U")),
                       tape.param(params.at(base + "b"))};
  };
  return BiLstmWeights{one("fw"), one("bw")};
}

}  // namespace

void add_bilstm_params(ParamSet& params, const std::string& prefix, BiLstmShape shape,
                       double init_range, std::mt19937_64& rng) {
  const std::size_t h = shape.hidden_dim, d = shape.input_dim;
  for (const char* dir : {"fw", "bw"}) {
    const std::string base = prefix + "." + dir + ".";
    params.add_uniform(base + "W", 4 * h, d, init_range, rng);
    params.add_uniform(base + "U", 4 * h, h, init_range, rng);
    params.add_uniform(base + "b", 4 * h, 1, init_range, rng);
  }
}

BiLstmWeights bind_bilstm(Tape& tape, ParamSet& params, const std::string& prefix) {
  return bind_impl(tape, params, prefix);
}

BiLstmWeights bind_bilstm(Tape& tape, const ParamSet& params, const std::string& prefix) {
  return bind_impl(tape, params, prefix);
}

namespace ops {

Var bilstm(const Var& seq, const BiLstmWeights& w) {
  const Tensor& x = seq.value();
  if (x.cols() == 0) throw EmptySequenceError("bilstm: empty input sequence");
  const Tensor& Wf = w.forward.W.value();
  const Tensor& Uf = w.forward.U.value();
  const Tensor& Wb = w.backward.W.value();
  const Tensor& Ub = w.backward.U.value();
  check_weights(Wf, Uf, w.forward.b.value(), x.rows());
  check_weights(Wb, Ub, w.backward.b.value(), x.rows());
  if (Uf.cols() != Ub.cols()) throw DimensionError("bilstm: directions differ in hidden size");

  auto fw = std::make_shared<DirectionCache>();
  auto bw = std::make_shared<DirectionCache>();
  run_direction(x, Wf, Uf, w.forward.b.value(), false, *fw);
  run_direction(x, Wb, Ub, w.backward.b.value(), true, *bw);

  const std::size_t h = Uf.cols(), n = x.cols();
  Tensor out(2 * h, n);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < h; ++k) {
      out(k, t) = fw->state[t * h + k];
      out(h + k, t) = bw->state[t * h + k];
    }

  const std::uint32_t xi = seq.id;
  const LstmWeights f = w.forward, b = w.backward;
  return seq.tape->record(std::move(out), [xi, f, b, fw, bw](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& X = t.value(xi);
    Tensor& gx = t.grad(xi);
    backprop_direction(X, t.value(f.W.id), t.value(f.U.id), *fw, g, 0, false, &gx,
                       t.grad(f.W.id), t.grad(f.U.id), t.grad(f.b.id));
    backprop_direction(X, t.value(b.W.id), t.value(b.U.id), *bw, g, fw->hidden, true, &gx,
                       t.grad(b.W.id), t.grad(b.U.id), t.grad(b.b.id));
  });
}

}  // namespace ops
}  // namespace fever::num
