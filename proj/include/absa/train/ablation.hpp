#pragma once

#include <string>
#include <vector>

#include "absa/train/trainer.hpp"

namespace absa::train {

struct AblationVariant {
  std::string name;
  model::HyperParams hp;
};

/// full, -Div, -Con, -Div-Con, -Gate, -Gate-Con, GateDiv, derived from `base`.
std::vector<AblationVariant> standard_variants(const model::HyperParams& base);

struct AblationRow {
  std::string variant;
  model::HyperParams hp;
  std::size_t best_epoch = 0;
  Metrics dev;
  std::vector<EpochLog> log;
};

/// Trains every variant from the same initial parameters and seed.
std::vector<AblationRow> run_ablations(const model::ModelState& initial, const std::vector<data::Example>& train_set,
                                       const std::vector<data::Example>& dev_set, const TrainConfig& config,
                                       const std::vector<AblationVariant>& variants);
std::vector<AblationRow> run_ablations(const model::ModelState& initial, const std::vector<data::Example>& train_set,
                                       const std::vector<data::Example>& dev_set, const TrainConfig& config);

/// One JSON object per variant: {variant, best_epoch, accuracy, macro_f1, loss_div, loss_const, loss_pred, loss_total}.
std::string ablation_jsonl(const std::vector<AblationRow>& rows);
/// Fixed-width text table for terminals.
std::string ablation_table(const std::vector<AblationRow>& rows);

}  // namespace absa::train
