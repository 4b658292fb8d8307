#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absa/data/example.hpp"
#include "absa/model/hyperparams.hpp"
#include "absa/model/model_state.hpp"

namespace absa::model {

struct GradCheckConfig {
  std::uint64_t seed = 0;
  std::size_t tokens = 5;
  std::size_t embed_dim = 8;
  HyperParams hp{.hidden = 8, .layers = 2};
  double step = 1e-5;
  double tolerance = 1e-4;
  /// Every parameter is drawn uniform in [-init_range, init_range], biases included.
  double init_range = 0.5;
  /// Test hook: scale the analytic gradient of this parameter by 1.5 before comparing.
  std::optional<std::string> corrupt_parameter;
};

struct ParameterCheck {
  std::string name;
  std::size_t size = 0;
  /// ||analytic - numeric|| / max(||analytic||, ||numeric||, 1e-12)
  double rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t worst_index = 0;
};

struct GradCheckReport {
  std::vector<ParameterCheck> parameters;
  double max_rel_error = 0.0;
  std::string worst_parameter;
  bool passed = false;
  double loss = 0.0;
};

/// Random tree-shaped example with distinct tokens "w0".."w{n-1}".
data::Example random_example(std::size_t tokens, std::uint64_t seed);

/// Compares backprop gradients of the total loss on `ex` with central
/// differences for every entry of every parameter.
GradCheckReport check_gradients(const data::Example& ex, ModelState& state, const HyperParams& hp, double step,
                                double tolerance, const std::optional<std::string>& corrupt_parameter = {});

/// Builds a random model and example from `cfg` and checks them.
GradCheckReport run_gradcheck(const GradCheckConfig& cfg);

std::string format_report(const GradCheckReport& report);

}  // namespace absa::model
