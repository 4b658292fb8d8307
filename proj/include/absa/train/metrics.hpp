#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "absa/data/example.hpp"
#include "absa/model/forward.hpp"

namespace absa::train {

struct ClassStats {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Metrics {
  std::size_t count = 0;
  double accuracy = 0.0;
  /// Unweighted mean over all three classes; a class never predicted nor present scores 0.
  double macro_f1 = 0.0;
  std::array<ClassStats, data::kNumClasses> per_class{};
  model::LossTerms mean_loss;

  bool operator==(const Metrics& o) const;
};

/// Accuracy and per-class/macro F1. Throws ArgumentError on empty or mismatched input.
Metrics score_predictions(std::span<const data::Polarity> gold, std::span<const data::Polarity> predicted);

/// Forward-only pass over `data`: argmax predictions plus mean loss terms.
Metrics evaluate(const model::ModelState& model, const std::vector<model::PreparedExample>& data,
                 const model::HyperParams& hp);
Metrics evaluate(const model::ModelState& model, const std::vector<data::Example>& data, const model::HyperParams& hp);

}  // namespace absa::train
