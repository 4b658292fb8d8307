#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absa/data/embeddings.hpp"
#include "absa/data/example.hpp"
#include "absa/model/hyperparams.hpp"
#include "absa/model/model_state.hpp"
#include "absa/train/metrics.hpp"

namespace absa::train {

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  model::HyperParams hp;
  bool shuffle = true;
  /// Embedding width when no pretrained table is supplied.
  std::size_t embed_dim = 100;
  /// Stop once the post-epoch training accuracy reaches this value (evaluates the train set every epoch).
  std::optional<double> target_train_accuracy;

  void validate() const;
};

struct EpochLog {
  std::size_t epoch = 0;
  std::string split;
  Metrics metrics;
};

struct TrainResult {
  model::ModelState best;
  std::size_t best_epoch = 0;
  std::vector<EpochLog> log;
};

/// Independent sub-seed `stream` of `seed` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Model over the training vocabulary (or the given pretrained table),
/// initialized from `config.seed`.
model::ModelState init_model(const std::vector<data::Example>& train_set, std::optional<data::EmbeddingTable> table,
                             const TrainConfig& config);

/// Mini-batch Adam training on the mean per-example loss. Epoch 0 in the log
/// is the untrained state. With a dev set the returned model is the epoch with
/// the best dev accuracy (earliest on ties), otherwise the last epoch.
TrainResult train(const model::ModelState& initial, const std::vector<data::Example>& train_set,
                  const std::vector<data::Example>* dev_set, const TrainConfig& config);

/// One JSON object per log entry: {epoch, split, accuracy, macro_f1, loss_div, loss_const, loss_pred, loss_total}.
std::string metrics_jsonl(const std::vector<EpochLog>& log);

}  // namespace absa::train
