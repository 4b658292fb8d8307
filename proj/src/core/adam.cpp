#include "absa/core/adam.hpp"

#include <cmath>

#include "absa/core/error.hpp"

namespace absa::core {

Adam::Adam(AdamConfig config) : config_(config) {
  if (!(config_.learning_rate >= 0.0)) throw ArgumentError("Adam learning rate must be non-negative");
}

void Adam::step(std::span<Parameter* const> params) {
  if (m_.empty()) {
    for (const Parameter* p : params) {
      m_.push_back(Tensor::zeros_like(p->value));
      v_.push_back(Tensor::zeros_like(p->value));
    }
  }
  if (m_.size() != params.size()) throw InternalError("Adam: parameter list changed between steps");
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Parameter& p = *params[k];
    if (p.grad.shape() != p.value.shape()) throw InternalError("Adam: missing gradient for parameter '" + p.name + "'");
    if (m_[k].shape() != p.value.shape()) throw InternalError("Adam: parameter '" + p.name + "' changed shape");
  }

  ++step_;
  const auto t = static_cast<double>(step_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  const double lr = config_.learning_rate;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
      if (lr == 0.0) continue;
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      p.value[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

}  // namespace absa::core
