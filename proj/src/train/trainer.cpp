#include "absa/train/trainer.hpp"

#include <json.hpp>
#include <numeric>

#include "absa/core/adam.hpp"
#include "absa/core/error.hpp"
#include "absa/core/ops.hpp"
#include "absa/core/random.hpp"
#include "absa/model/forward.hpp"

namespace absa::train {

void TrainConfig::validate() const {
  if (epochs < 1) throw ArgumentError("epochs must be at least 1");
  if (batch_size < 1) throw ArgumentError("batch_size must be at least 1");
  if (!(learning_rate > 0.0)) throw ArgumentError("learning_rate must be positive");
  if (embed_dim < 1) throw ArgumentError("embed_dim must be positive");
  hp.validate();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

model::ModelState init_model(const std::vector<data::Example>& train_set, std::optional<data::EmbeddingTable> table,
                             const TrainConfig& config) {
  config.validate();
  if (!table) {
    table = data::random_embeddings(data::corpus_vocabulary(train_set), config.embed_dim, derive_seed(config.seed, 0));
  }
  return model::make_model(std::move(*table), config.hp, derive_seed(config.seed, 1));
}

namespace {

EpochLog log_entry(std::size_t epoch, const char* split, Metrics m) { return EpochLog{epoch, split, std::move(m)}; }

}  // namespace

TrainResult train(const model::ModelState& initial, const std::vector<data::Example>& train_set,
                  const std::vector<data::Example>* dev_set, const TrainConfig& config) {
  config.validate();
  if (train_set.empty()) throw ArgumentError("training set is empty");
  const auto& hp = config.hp;

  model::ModelState state = initial;
  const auto train_data = model::prepare_all(train_set, state.vocab, hp.include_self_loop);
  std::vector<model::PreparedExample> dev_data;
  if (dev_set && !dev_set->empty()) dev_data = model::prepare_all(*dev_set, state.vocab, hp.include_self_loop);

  TrainResult result;
  result.log.push_back(log_entry(0, "train", evaluate(state, train_data, hp)));
  if (!dev_data.empty()) result.log.push_back(log_entry(0, "dev", evaluate(state, dev_data, hp)));

  core::Adam adam(core::AdamConfig{.learning_rate = config.learning_rate});
  core::Rng order_rng(derive_seed(config.seed, 2));
  std::vector<std::size_t> order(train_data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  double best_dev = -1.0;
  bool have_best = false;
  const auto params = state.trainable_parameters();
  state.zero_grad();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) order_rng.shuffle(order);

    std::vector<data::Polarity> gold, predicted;
    model::LossTerms sum;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double weight = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = start; k < end; ++k) {
        const auto& ex = train_data[order[k]];
        core::Tape tape;
        model::ForwardGraph g = model::forward(tape, ex, state, hp);
        tape.backward(core::scale(g.total, weight));
        gold.push_back(ex.example.label);
        predicted.push_back(model::argmax_class(g.prediction.probs.value()));
        sum.div += g.loss_div.value().item();
        sum.cons += g.loss_const.value().item();
        sum.pred += g.loss_pred.value().item();
        sum.total += g.total.value().item();
      }
      adam.step(params);
      state.zero_grad();
    }

    Metrics running = score_predictions(gold, predicted);
    const auto n = static_cast<double>(order.size());
    running.mean_loss = {sum.div / n, sum.cons / n, sum.pred / n, sum.total / n};
    result.log.push_back(log_entry(epoch, "train", std::move(running)));

    bool reached_target = false;
    if (config.target_train_accuracy) {
      const Metrics after = evaluate(state, train_data, hp);
      reached_target = after.accuracy >= *config.target_train_accuracy;
    }

    if (!dev_data.empty()) {
      Metrics dev = evaluate(state, dev_data, hp);
      if (!have_best || dev.accuracy > best_dev) {
        best_dev = dev.accuracy;
        result.best = state;
        result.best_epoch = epoch;
        have_best = true;
      }
      result.log.push_back(log_entry(epoch, "dev", std::move(dev)));
    }
    if (dev_data.empty()) {
      result.best = state;
      result.best_epoch = epoch;
    }
    if (reached_target) break;
  }
  // Gradients are scratch; keep the returned model clean.
  result.best.zero_grad();
  return result;
}

std::string metrics_jsonl(const std::vector<EpochLog>& log) {
  std::string out;
  for (const auto& e : log) {
    nlohmann::ordered_json j{{"epoch", e.epoch},
                             {"split", e.split},
                             {"accuracy", e.metrics.accuracy},
                             {"macro_f1", e.metrics.macro_f1},
                             {"loss_div", e.metrics.mean_loss.div},
                             {"loss_const", e.metrics.mean_loss.cons},
                             {"loss_pred", e.metrics.mean_loss.pred},
                             {"loss_total", e.metrics.mean_loss.total}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace absa::train
