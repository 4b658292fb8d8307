#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "absa/core/tensor.hpp"

namespace absa::core {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam. Moments are keyed by position in the parameter list,
/// so every step must pass the same parameters in the same order.
class Adam {
 public:
  explicit Adam(AdamConfig config = {});

  void step(std::span<Parameter* const> params);

  std::uint64_t steps() const noexcept { return step_; }
  const AdamConfig& config() const noexcept { return config_; }
  const std::vector<Tensor>& first_moments() const noexcept { return m_; }
  const std::vector<Tensor>& second_moments() const noexcept { return v_; }

 private:
  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace absa::core
