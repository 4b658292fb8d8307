#include "absa/train/metrics.hpp"

#include "absa/core/error.hpp"

namespace absa::train {

bool Metrics::operator==(const Metrics& o) const {
  auto same_loss = [](const model::LossTerms& a, const model::LossTerms& b) {
    return a.div == b.div && a.cons == b.cons && a.pred == b.pred && a.total == b.total;
  };
  for (std::size_t k = 0; k < data::kNumClasses; ++k) {
    const auto &a = per_class[k], &b = o.per_class[k];
    if (a.tp != b.tp || a.fp != b.fp || a.fn != b.fn || a.f1 != b.f1) return false;
  }
  return count == o.count && accuracy == o.accuracy && macro_f1 == o.macro_f1 && same_loss(mean_loss, o.mean_loss);
}

Metrics score_predictions(std::span<const data::Polarity> gold, std::span<const data::Polarity> predicted) {
  if (gold.empty()) throw ArgumentError("cannot score an empty prediction set");
  if (gold.size() != predicted.size()) throw ArgumentError("gold and predicted lengths differ");
  Metrics m;
  m.count = gold.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = data::class_index(gold[i]);
    const auto p = data::class_index(predicted[i]);
    if (g == p) {
      ++correct;
      ++m.per_class[g].tp;
    } else {
      ++m.per_class[p].fp;
      ++m.per_class[g].fn;
    }
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
  double f1_sum = 0.0;
  for (auto& c : m.per_class) {
    const double tp = static_cast<double>(c.tp);
    c.precision = c.tp + c.fp > 0 ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
    c.recall = c.tp + c.fn > 0 ? tp / static_cast<double>(c.tp + c.fn) : 0.0;
    c.f1 = c.precision + c.recall > 0.0 ? 2.0 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
    f1_sum += c.f1;
  }
  m.macro_f1 = f1_sum / static_cast<double>(data::kNumClasses);
  return m;
}

Metrics evaluate(const model::ModelState& model, const std::vector<model::PreparedExample>& data,
                 const model::HyperParams& hp) {
  if (data.empty()) throw ArgumentError("cannot evaluate on an empty data set");
  model::ModelState local = model;
  std::vector<data::Polarity> gold, predicted;
  model::LossTerms sum;
  for (const auto& ex : data) {
    core::Tape tape;
    const model::ForwardGraph g = model::forward(tape, ex, local, hp);
    gold.push_back(ex.example.label);
    predicted.push_back(model::argmax_class(g.prediction.probs.value()));
    sum.div += g.loss_div.value().item();
    sum.cons += g.loss_const.value().item();
    sum.pred += g.loss_pred.value().item();
    sum.total += g.total.value().item();
  }
  Metrics m = score_predictions(gold, predicted);
  const auto n = static_cast<double>(data.size());
  m.mean_loss = {sum.div / n, sum.cons / n, sum.pred / n, sum.total / n};
  return m;
}

Metrics evaluate(const model::ModelState& model, const std::vector<data::Example>& data, const model::HyperParams& hp) {
  if (data.empty()) throw ArgumentError("cannot evaluate on an empty data set");
  return evaluate(model, model::prepare_all(data, model.vocab, hp.include_self_loop), hp);
}

}  // namespace absa::train
