#include "fever/numerics/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fever/error.hpp"

namespace fever::num {

const Tensor& Var::value() const { return tape->value(id); }

Var Tape::constant(Tensor value) {
  Node node;
  node.own = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1), generation_};
}

Var Tape::param(Parameter& p) {
  Node node;
  node.source = &p;
  node.trainable = &p;
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1), generation_};
}

Var Tape::param(const Parameter& p) {
  Node node;
  node.source = &p;
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1), generation_};
}

Var Tape::record(Tensor value, BackwardFn backward) {
  Node node;
  node.own = std::move(value);
  node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1), generation_};
}

const Tensor& Tape::value(std::uint32_t id) const {
  const Node& node = nodes_[id];
  return node.source != nullptr ? node.source->value : node.own;
}

Tensor& Tape::grad(std::uint32_t id) {
  Node& node = nodes_[id];
  if (node.trainable != nullptr) {
    Parameter& p = *node.trainable;
    if (!p.grad.same_shape(p.value)) p.grad = Tensor(p.value.rows(), p.value.cols());
    return p.grad;
  }
  if (node.grad.empty()) {
    const Tensor& v = value(id);
    node.grad = Tensor(v.rows(), v.cols());
  }
  return node.grad;
}

bool Tape::has_grad(std::uint32_t id) const { return !nodes_[id].grad.empty(); }

void Tape::backward(const Var& loss, double seed) {
  if (loss.tape != this || loss.generation != generation_ || loss.id >= nodes_.size()) {
    throw StaleTapeError("backward called on a tape that was already consumed or cleared");
  }
  const Tensor& lv = value(loss.id);
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw DimensionError("backward expects a 1x1 loss, got " + lv.shape_string());
  }
  grad(loss.id)(0, 0) += seed;
  for (std::int64_t i = loss.id; i >= 0; --i) {
    Node& node = nodes_[static_cast<std::size_t>(i)];
    if (node.backward && !node.grad.empty()) {
      node.backward(*this, static_cast<std::uint32_t>(i));
    }
  }
  clear();
}

void Tape::clear() {
  nodes_.clear();
  ++generation_;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double mx = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

namespace ops {
namespace {

void same_tape(const Var& a, const Var& b) {
  if (a.tape != b.tape) throw Error("operands recorded on different tapes");
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                         b.shape_string());
  }
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows()) {
    throw DimensionError("matmul: shape mismatch " + av.shape_string() + " vs " + bv.shape_string());
  }
  const std::uint32_t ai = a.id, bi = b.id;
  return a.tape->record(num::matmul(av, bv), [ai, bi](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& A = t.value(ai);
    const Tensor& B = t.value(bi);
    const std::size_t n = A.rows(), k = A.cols(), m = B.cols();
    {
      Tensor& gA = t.grad(ai);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          const double gij = g(i, j);
          if (gij == 0.0) continue;
          for (std::size_t p = 0; p < k; ++p) gA(i, p) += gij * B(p, j);
        }
    }
    {
      Tensor& gB = t.grad(bi);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = A(i, p);
          if (aip == 0.0) continue;
          for (std::size_t j = 0; j < m; ++j) gB(p, j) += aip * g(i, j);
        }
    }
  });
}

Var transpose(const Var& a) {
  const std::uint32_t ai = a.id;
  return a.tape->record(num::transpose(a.value()), [ai](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(ai);
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) ga(c, r) += g(r, c);
  });
}

Var add(const Var& a, const Var& b) {
  same_tape(a, b);
  require_same_shape("add", a.value(), b.value());
  Tensor out = a.value();
  out.add_inplace(b.value());
  const std::uint32_t ai = a.id, bi = b.id;
  return a.tape->record(std::move(out), [ai, bi](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    t.grad(ai).add_inplace(g);
    t.grad(bi).add_inplace(g);
  });
}

Var sub(const Var& a, const Var& b) {
  same_tape(a, b);
  require_same_shape("sub", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const std::uint32_t ai = a.id, bi = b.id;
  return a.tape->record(std::move(out), [ai, bi](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    t.grad(ai).add_inplace(g);
    Tensor& gb = t.grad(bi);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
  });
}

Var mul(const Var& a, const Var& b) {
  same_tape(a, b);
  require_same_shape("mul", a.value(), b.value());
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const std::uint32_t ai = a.id, bi = b.id;
  return a.tape->record(std::move(out), [ai, bi](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& A = t.value(ai);
    const Tensor& B = t.value(bi);
    {
      Tensor& ga = t.grad(ai);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * B[i];
    }
    Tensor& gb = t.grad(bi);
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * A[i];
  });
}

Var abs(const Var& a) {
  Tensor out = a.value();
  for (double& v : out.values()) v = std::fabs(v);
  const std::uint32_t ai = a.id;
  return a.tape->record(std::move(out), [ai](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& x = t.value(ai);
    Tensor& ga = t.grad(ai);
    // subgradient at 0 is 0
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (x[i] > 0.0) {
        ga[i] += g[i];
      } else if (x[i] < 0.0) {
        ga[i] -= g[i];
      }
    }
  });
}

Var relu(const Var& a) {
  Tensor out = a.value();
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  const std::uint32_t ai = a.id;
  return a.tape->record(std::move(out), [ai](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& x = t.value(ai);
    Tensor& ga = t.grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > 0.0) ga[i] += g[i];
  });
}

Var scale(const Var& a, double factor) {
  Tensor out = a.value();
  for (double& v : out.values()) v *= factor;
  const std::uint32_t ai = a.id;
  return a.tape->record(std::move(out), [ai, factor](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor * g[i];
  });
}

Var sum(const Var& a) {
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  const std::uint32_t ai = a.id;
  return a.tape->record(Tensor::scalar(total), [ai](Tape& t, std::uint32_t self) {
    const double g = t.grad(self)(0, 0);
    Tensor& ga = t.grad(ai);
    for (double& v : ga.values()) v += g;
  });
}

Var affine(const Var& x, const Var& W, const Var& b, Activation act) {
  same_tape(x, W);
  same_tape(x, b);
  const Tensor& xv = x.value();
  const Tensor& Wv = W.value();
  const Tensor& bv = b.value();
  if (Wv.cols() != xv.rows()) {
    throw DimensionError("affine: W " + Wv.shape_string() + " incompatible with x " +
                         xv.shape_string());
  }
  if (bv.rows() != Wv.rows() || bv.cols() != 1) {
    throw DimensionError("affine: bias " + bv.shape_string() + " incompatible with W " +
                         Wv.shape_string());
  }
  Tensor out = num::matmul(Wv, xv);
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) {
      double v = out(r, c) + bv(r, 0);
      if (act == Activation::rectifier && v < 0.0) v = 0.0;
      out(r, c) = v;
    }
  const std::uint32_t xi = x.id, wi = W.id, bi = b.id;
  return x.tape->record(std::move(out), [xi, wi, bi, act](Tape& t, std::uint32_t self) {
    Tensor dz = t.grad(self);
    if (act == Activation::rectifier) {
      const Tensor& y = t.value(self);
      for (std::size_t i = 0; i < dz.size(); ++i)
        if (y[i] <= 0.0) dz[i] = 0.0;
    }
    const Tensor& X = t.value(xi);
    const Tensor& Wm = t.value(wi);
    const std::size_t out_dim = Wm.rows(), in_dim = Wm.cols(), n = X.cols();
    {
      Tensor& gW = t.grad(wi);
      for (std::size_t r = 0; r < out_dim; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          const double d = dz(r, c);
          if (d == 0.0) continue;
          for (std::size_t k = 0; k < in_dim; ++k) gW(r, k) += d * X(k, c);
        }
    }
    {
      Tensor& gb = t.grad(bi);
      for (std::size_t r = 0; r < out_dim; ++r)
        for (std::size_t c = 0; c < n; ++c) gb(r, 0) += dz(r, c);
    }
    Tensor& gx = t.grad(xi);
    for (std::size_t r = 0; r < out_dim; ++r)
      for (std::size_t k = 0; k < in_dim; ++k) {
        const double w = Wm(r, k);
        if (w == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) gx(k, c) += w * dz(r, c);
      }
  });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat_rows: no inputs");
  const std::size_t cols = parts.front().value().cols();
  std::size_t rows = 0;
  for (const Var& p : parts) {
    same_tape(parts.front(), p);
    if (p.value().cols() != cols) {
      throw DimensionError("concat_rows: column mismatch " + parts.front().value().shape_string() +
                           " vs " + p.value().shape_string());
    }
    rows += p.value().rows();
  }
  Tensor out(rows, cols);
  std::vector<std::uint32_t> ids;
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    std::copy(v.data(), v.data() + v.size(), out.data() + offset * cols);
    offset += v.rows();
    ids.push_back(p.id);
  }
  return parts.front().tape->record(std::move(out), [ids](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    std::size_t offset = 0;
    for (std::uint32_t id : ids) {
      const std::size_t r = t.value(id).rows();
      if (r > 0) {
        Tensor& gp = t.grad(id);
        const double* src = g.data() + offset * g.cols();
        for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += src[i];
      }
      offset += r;
    }
  });
}

Var softmax_col(const Var& a) {
  const Tensor& x = a.value();
  Tensor out(x.rows(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < x.rows(); ++r) mx = std::max(mx, x(r, c));
    double total = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      out(r, c) = std::exp(x(r, c) - mx);
      total += out(r, c);
    }
    for (std::size_t r = 0; r < x.rows(); ++r) out(r, c) /= total;
  }
  const std::uint32_t ai = a.id;
  return a.tape->record(std::move(out), [ai](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    const Tensor& y = t.value(self);
    Tensor& ga = t.grad(ai);
    for (std::size_t c = 0; c < y.cols(); ++c) {
      double dot = 0.0;
      for (std::size_t r = 0; r < y.rows(); ++r) dot += g(r, c) * y(r, c);
      for (std::size_t r = 0; r < y.rows(); ++r) ga(r, c) += y(r, c) * (g(r, c) - dot);
    }
  });
}

Var maxpool_row(const Var& a) {
  const Tensor& x = a.value();
  if (x.cols() == 0) throw EmptySequenceError("maxpool_row: sequence has no columns");
  Tensor out(x.rows(), 1);
  std::vector<std::size_t> arg(x.rows(), 0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double best = x(r, 0);
    for (std::size_t c = 1; c < x.cols(); ++c) {
      if (x(r, c) > best) {
        best = x(r, c);
        arg[r] = c;
      }
    }
    out(r, 0) = best;
  }
  const std::uint32_t ai = a.id;
  return a.tape->record(std::move(out), [ai, arg = std::move(arg)](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad(ai);
    for (std::size_t r = 0; r < arg.size(); ++r) ga(r, arg[r]) += g(r, 0);
  });
}

Var cross_entropy(const Var& logits, std::size_t gold) {
  const Tensor& z = logits.value();
  if (z.cols() != 1 || z.rows() == 0) {
    throw DimensionError("cross_entropy expects a nonempty column, got " + z.shape_string());
  }
  if (gold >= z.rows()) {
    throw LabelError("gold label " + std::to_string(gold) + " out of range for " +
                     std::to_string(z.rows()) + " classes");
  }
  double mx = z(0, 0);
  for (std::size_t r = 1; r < z.rows(); ++r) mx = std::max(mx, z(r, 0));
  double total = 0.0;
  for (std::size_t r = 0; r < z.rows(); ++r) total += std::exp(z(r, 0) - mx);
  const double lse = mx + std::log(total);
  const std::uint32_t zi = logits.id;
  return logits.tape->record(Tensor::scalar(lse - z(gold, 0)),
                             [zi, gold, lse](Tape& t, std::uint32_t self) {
                               const double g = t.grad(self)(0, 0);
                               const Tensor& zz = t.value(zi);
                               Tensor& gz = t.grad(zi);
                               for (std::size_t r = 0; r < zz.rows(); ++r) {
                                 const double p = std::exp(zz(r, 0) - lse);
                                 gz(r, 0) += g * (p - (r == gold ? 1.0 : 0.0));
                               }
                             });
}

Var gather_columns(const Var& table, std::span<const int> ids) {
  const Tensor& tb = table.value();
  const std::size_t d = tb.cols();
  Tensor out(d, ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const int id = ids[j];
    if (id < 0) continue;
    if (static_cast<std::size_t>(id) >= tb.rows()) {
      throw DimensionError("gather_columns: row " + std::to_string(id) + " outside table " +
                           tb.shape_string());
    }
    const double* row = tb.data() + static_cast<std::size_t>(id) * d;
    for (std::size_t k = 0; k < d; ++k) out(k, j) = row[k];
  }
  const std::uint32_t ti = table.id;
  std::vector<int> rows(ids.begin(), ids.end());
  return table.tape->record(std::move(out), [ti, rows = std::move(rows)](Tape& t, std::uint32_t self) {
    const Tensor& g = t.grad(self);
    Tensor& gt = t.grad(ti);
    const std::size_t d = gt.cols();
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[j] < 0) continue;
      double* row = gt.data() + static_cast<std::size_t>(rows[j]) * d;
      for (std::size_t k = 0; k < d; ++k) row[k] += g(k, j);
    }
  });
}

}  // namespace ops
}  // namespace fever::num
