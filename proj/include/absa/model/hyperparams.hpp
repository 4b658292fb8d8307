#pragma once

#include <cstddef>

namespace absa::model {

struct HyperParams {
  std::size_t hidden = 200;
  std::size_t layers = 2;
  double alpha = 1.0;  // weight of the consistency loss
  double beta = 1.0;   // weight of the prediction loss
  bool include_self_loop = true;

  bool gate_on = true;
  bool div_on = true;
  bool con_on = true;
  /// Diversity computed directly on the gate vectors instead of the regulated hidden vectors.
  bool gatediv_baseline = false;
  /// Cosine instead of raw dot product inside the diversity term.
  bool normalize_div = false;

  /// Throws ArgumentError on out-of-range values.
  void validate() const;
  /// Turning the gate off removes the diversity term as well.
  bool diversity_active() const noexcept { return gate_on && div_on && layers >= 2; }

  bool operator==(const HyperParams&) const = default;
};

}  // namespace absa::model
