#include "absa/train/ablation.hpp"

#include <cstdio>
#include <json.hpp>

namespace absa::train {

std::vector<AblationVariant> standard_variants(const model::HyperParams& base) {
  auto with = [&](bool gate, bool div, bool con, bool gatediv) {
    model::HyperParams hp = base;
    hp.gate_on = gate;
    hp.div_on = div;
    hp.con_on = con;
    hp.gatediv_baseline = gatediv;
    return hp;
  };
  return {
      {"full", with(true, true, true, false)},     {"-Div", with(true, false, true, false)},
      {"-Con", with(true, true, false, false)},    {"-Div-Con", with(true, false, false, false)},
      {"-Gate", with(false, false, true, false)},  {"-Gate-Con", with(false, false, false, false)},
      {"GateDiv", with(true, true, true, true)},
  };
}

std::vector<AblationRow> run_ablations(const model::ModelState& initial, const std::vector<data::Example>& train_set,
                                       const std::vector<data::Example>& dev_set, const TrainConfig& config,
                                       const std::vector<AblationVariant>& variants) {
  std::vector<AblationRow> rows;
  for (const auto& v : variants) {
    TrainConfig cfg = config;
    cfg.hp = v.hp;
    model::ModelState start = initial;
    start.hp = v.hp;
    TrainResult r = train(start, train_set, &dev_set, cfg);
    AblationRow row;
    row.variant = v.name;
    row.hp = v.hp;
    row.best_epoch = r.best_epoch;
    for (const auto& e : r.log) {
      if (e.split == "dev" && e.epoch == r.best_epoch) row.dev = e.metrics;
    }
    row.log = std::move(r.log);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<AblationRow> run_ablations(const model::ModelState& initial, const std::vector<data::Example>& train_set,
                                       const std::vector<data::Example>& dev_set, const TrainConfig& config) {
  return run_ablations(initial, train_set, dev_set, config, standard_variants(config.hp));
}

std::string ablation_jsonl(const std::vector<AblationRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j{{"variant", r.variant},
                             {"best_epoch", r.best_epoch},
                             {"accuracy", r.dev.accuracy},
                             {"macro_f1", r.dev.macro_f1},
                             {"loss_div", r.dev.mean_loss.div},
                             {"loss_const", r.dev.mean_loss.cons},
                             {"loss_pred", r.dev.mean_loss.pred},
                             {"loss_total", r.dev.mean_loss.total}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string ablation_table(const std::vector<AblationRow>& rows) {
  std::string out = "variant      epoch  dev_acc  macro_f1\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %5zu  %7.4f  %8.4f\n", r.variant.c_str(), r.best_epoch, r.dev.accuracy,
                  r.dev.macro_f1);
    out += buf;
  }
  return out;
}

}  // namespace absa::train
