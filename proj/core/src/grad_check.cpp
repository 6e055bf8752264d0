#include "fever/numerics/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fever::num {
namespace {

double evaluate(const LossFn& loss, Tape& tape) {
  tape.clear();
  const double v = loss(tape).value()(0, 0);
  tape.clear();
  return v;
}

}  // namespace

GradCheckResult grad_check(const LossFn& loss, ParamSet& params, const GradCheckOptions& options) {
  params.zero_grad();
  Tape tape;
  tape.backward(loss(tape));

  std::map<std::string, Tensor> analytic;
  for (auto& [name, p] : params) analytic[name] = p.grad;

  GradCheckResult result;
  std::mt19937_64 rng(options.seed);
  for (auto& [name, p] : params) {
    std::vector<std::size_t> coords(p.value.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (options.max_coords_per_param != 0 && coords.size() > options.max_coords_per_param) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(options.max_coords_per_param);
    }
    for (std::size_t i : coords) {
      const double original = p.value[i];
      p.value[i] = original + options.eps;
      const double up = evaluate(loss, tape);
      p.value[i] = original - options.eps;
      const double down = evaluate(loss, tape);
      p.value[i] = original;

      const double numeric = (up - down) / (2.0 * options.eps);
      const double a = analytic[name][i];
      const double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      const double err = std::fabs(a - numeric) / denom;
      ++result.coordinates_checked;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_param = name;
        result.worst_index = i;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  params.zero_grad();
  return result;
}

}  // namespace fever::num
