#include "fever/numerics/param_set.hpp"

#include <cmath>

#include "fever/error.hpp"

namespace fever::num {

Parameter& ParamSet::add(const std::string& name, Tensor init) {
  if (params_.count(name) != 0) throw ConflictError("duplicate parameter '" + name + "'");
  Parameter& p = params_[name];
  p.name = name;
  p.value = std::move(init);
  moments_[name] = {Tensor(p.value.rows(), p.value.cols()), Tensor(p.value.rows(), p.value.cols())};
  return p;
}

Parameter& ParamSet::add_uniform(const std::string& name, std::size_t rows, std::size_t cols,
                                 double range, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-range, range);
  Tensor t(rows, cols);
  for (double& v : t.values()) v = dist(rng);
  return add(name, std::move(t));
}

Parameter& ParamSet::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error("unknown parameter '" + name + "'");
  return it->second;
}

const Parameter& ParamSet::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error("unknown parameter '" + name + "'");
  return it->second;
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, p] : params_) n += p.value.size();
  return n;
}

void ParamSet::zero_grad() {
  for (auto& [name, p] : params_) p.zero_grad();
}

void ParamSet::adam_step(const AdamConfig& config) {
  for (const auto& [name, p] : params_) {
    if (!p.grad_initialized()) {
      throw UninitializedGradientError("parameter '" + name + "' has no gradient");
    }
  }
  ++step_;
  const double t = static_cast<double>(step_);
  const double bc1 = 1.0 - std::pow(config.beta1, t);
  const double bc2 = 1.0 - std::pow(config.beta2, t);
  for (auto& [name, p] : params_) {
    auto& [m, v] = moments_.at(name);
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p.value[i] -= config.lr * mhat / (std::sqrt(vhat) + config.eps);
    }
    p.grad.fill(0.0);
  }
}

void ParamSet::set_optimizer_state(std::uint64_t step, const std::string& name, Tensor m, Tensor v) {
  const Parameter& p = at(name);
  if (!m.same_shape(p.value) || !v.same_shape(p.value)) {
    throw DimensionError("optimizer moments for '" + name + "' do not match " +
                         p.value.shape_string());
  }
  step_ = step;
  moments_[name] = {std::move(m), std::move(v)};
}

void ParamSet::copy_values_from(const ParamSet& other) {
  for (auto& [name, p] : params_) {
    const Parameter& src = other.at(name);
    if (!src.value.same_shape(p.value)) {
      throw DimensionError("parameter '" + name + "' shape differs: " + src.value.shape_string() +
                           " vs " + p.value.shape_string());
    }
    p.value = src.value;
  }
}

}  // namespace fever::num
