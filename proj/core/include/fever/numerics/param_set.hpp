#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "fever/numerics/autodiff.hpp"

namespace fever::num {

/// Adam hyperparameters. Defaults are the commonly used ones.
struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Named parameters with Adam moment estimates and a step counter.
///
/// Parameters live in node-stable storage, so references handed to a Tape
/// remain valid while parameters are added.
class ParamSet {
 public:
  Parameter& add(const std::string& name, Tensor init);
  /// Adds a parameter initialized uniformly in [−range, range].
  Parameter& add_uniform(const std::string& name, std::size_t rows, std::size_t cols,
                         double range, std::mt19937_64& rng);

  bool contains(const std::string& name) const { return params_.count(name) != 0; }
  Parameter& at(const std::string& name);
  const Parameter& at(const std::string& name) const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }
  std::size_t size() const noexcept { return params_.size(); }
  std::size_t scalar_count() const;

  void zero_grad();

  /// One bias-corrected Adam update over every parameter, then zeroes the
  /// gradients. Throws UninitializedGradientError if any gradient was never
  /// initialized.
  void adam_step(const AdamConfig& config);

  std::uint64_t step() const noexcept { return step_; }
  const Tensor& first_moment(const std::string& name) const { return moments_.at(name).first; }
  const Tensor& second_moment(const std::string& name) const { return moments_.at(name).second; }

  /// Restores optimizer state (used when resuming from a checkpoint).
  void set_optimizer_state(std::uint64_t step, const std::string& name, Tensor m, Tensor v);

  /// Copies parameter values (not gradients or moments) from `other`.
  void copy_values_from(const ParamSet& other);

 private:
  std::map<std::string, Parameter> params_;
  std::map<std::string, std::pair<Tensor, Tensor>> moments_;
  std::uint64_t step_ = 0;
};

}  // namespace fever::num
