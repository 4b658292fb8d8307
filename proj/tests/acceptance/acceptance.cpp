// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "absa/core/error.hpp"
#include "absa/core/ops.hpp"
#include "absa/data/conllu.hpp"
#include "absa/data/corpus.hpp"
#include "absa/data/tree.hpp"
#include "absa/model/forward.hpp"
#include "absa/model/gradcheck.hpp"
#include "absa/train/ablation.hpp"
#include "absa/train/trainer.hpp"
#include "cli.hpp"
#include "oracles.hpp"
#include "scratch.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace absa;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[2048];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

std::vector<nlohmann::json> read_jsonl(const fs::path& p) {
  std::vector<nlohmann::json> rows;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  return rows;
}

Outcome gradient_integrity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string out;
  const int code = run_cli({"gradcheck"}, &out);
  const double elapsed = seconds_since(t0);
  const auto report = model::run_gradcheck({});
  const bool ok = code == 0 && report.passed && report.max_rel_error < 1e-4 && elapsed < 10.0;
  return {ok, fmt("gradcheck exit %d, max relative error %.3e (%s) < 1e-4, %.2f s < 10 s", code, report.max_rel_error,
                  report.worst_parameter.c_str(), elapsed)};
}

Outcome oracle_equivalence() {
  core::Rng rng(2024);
  double worst = 0.0;
  std::size_t bfs_mismatch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(12), in = 1 + rng.index(8), out = 1 + rng.index(8);
    const auto heads = testing::prufer_tree(n, rng);
    const auto ex = testing::example_from_heads(heads, rng);
    const bool loop = rng.index(2) == 0;
    const auto h = testing::random_tensor({n, in}, rng), w = testing::random_tensor({out, in}, rng),
               b = testing::random_tensor({out}, rng);
    const auto tree = data::build_tree(ex, loop);
    core::Tape tape;
    const auto got = model::gcn_layer(tape.constant(h), tree, tape.constant(w), tape.constant(b)).value();
    worst = std::max(worst, core::max_abs_diff(got, testing::dense_gcn(h, heads, loop, w, b)));
    const auto dist = testing::floyd_warshall(heads);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t want = n;
      for (std::size_t a = ex.aspect_from; a < ex.aspect_to; ++a) want = std::min(want, dist[i][a]);
      if (tree.path_len_to_aspect[i] != want) ++bfs_mismatch;
    }
  }
  return {worst <= 1e-12 && bfs_mismatch == 0,
          fmt("100 random trees (n <= 12): GCN max abs diff %.2e <= 1e-12, BFS vs Floyd-Warshall mismatches %zu", worst,
              bfs_mismatch)};
}

Outcome loss_term_laws() {
  core::Rng rng(99);
  auto random_prob = [&](std::size_t n) {
    auto t = testing::random_tensor({n}, rng, -3.0, 3.0);
    return core::softmax_values(t.data());
  };
  std::size_t kl_negative = 0, kl_equal_bad = 0, kl_distinct_bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + rng.index(20);
    const auto p = random_prob(n), q = random_prob(n);
    core::Tape tape;
    const double pq = model::consistency_loss(p, tape.constant(q)).value().item();
    const double pp = model::consistency_loss(p, tape.constant(p)).value().item();
    if (pq < 0.0 || pp < 0.0) ++kl_negative;
    if (!(pp < 1e-9)) ++kl_equal_bad;
    if (!(pq >= 1e-9)) ++kl_distinct_bad;
  }

  std::size_t sum_bad = 0;
  for (std::size_t k = 0; k < 500; ++k) {
    const auto ex = model::random_example(1 + k % 30, 5000 + k);
    const std::size_t layers = 1 + k % 3;
    auto state = model::make_model(data::random_embeddings(data::corpus_vocabulary({ex}), 6, k), {.hidden = 5, .layers = layers},
                                   k + 1, 0.5);
    const auto t = model::total_loss(ex, state, state.hp).second;
    for (const auto* v : {&t.syn, &t.mod, &t.class_probs}) {
      double s = 0.0;
      for (double x : v->data()) s += x;
      if (std::abs(s - 1.0) > 1e-6) ++sum_bad;
    }
  }

  const auto ex = model::random_example(7, 3);
  auto one_layer = model::make_model(data::random_embeddings(data::corpus_vocabulary({ex}), 6, 1), {.hidden = 5, .layers = 1}, 2, 0.5);
  const double div_single = model::total_loss(ex, one_layer, one_layer.hp).second.loss.div;
  auto saturated = model::make_model(data::random_embeddings(data::corpus_vocabulary({ex}), 6, 1), {.hidden = 5, .layers = 3}, 2, 0.5);
  for (auto& b : saturated.gate_bias) b.value.fill(-1e3);
  const auto sat = model::total_loss(ex, saturated, saturated.hp).second;
  double max_gate = 0.0;
  for (const auto& g : sat.gates)
    for (double v : g.data()) max_gate = std::max(max_gate, v);

  const bool ok = kl_negative == 0 && kl_equal_bad == 0 && kl_distinct_bad == 0 && sum_bad == 0 && div_single == 0.0 &&
                  sat.loss.div == 0.0;
  return {ok, fmt("KL over 1000 pairs: negative %zu, p==q not < 1e-9 %zu, p!=q below 1e-9 %zu; sum-to-1 violations in 500 "
                  "forward passes %zu; L_div(L=1) = %g, L_div(gates <= %.1e) = %g",
                  kl_negative, kl_equal_bad, kl_distinct_bad, sum_bad, div_single, max_gate, sat.loss.div)};
}

Outcome synthetic_overfit() {
  const auto corpus = testing::adjacent_opinion_corpus(20, 1);
  const bool separable = testing::nearest_neighbor_separable(corpus);
  train::TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.01;
  cfg.seed = 1;
  cfg.embed_dim = 16;
  cfg.hp = {.hidden = 16, .layers = 2};
  cfg.target_train_accuracy = 1.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = train::train(train::init_model(corpus, std::nullopt, cfg), corpus, nullptr, cfg);
  const double elapsed = seconds_since(t0);
  const double acc = train::evaluate(r.best, corpus, cfg.hp).accuracy;
  return {separable && acc == 1.0 && elapsed < 60.0,
          fmt("20 examples, 1-NN separable: %s; train accuracy %.3f after %zu epochs (<= 200), %.2f s < 60 s",
              separable ? "yes" : "no", acc, r.best_epoch, elapsed)};
}

Outcome ablation_direction() {
  const auto all = testing::two_aspect_distractor_corpus(375, 77);
  const std::vector<data::Example> train_set(all.begin(), all.begin() + 600), dev_set(all.begin() + 600, all.end());
  train::TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 8;
  cfg.learning_rate = 0.005;
  cfg.embed_dim = 32;
  cfg.hp = {.hidden = 32, .layers = 2, .beta = 20.0};
  const auto variants = train::standard_variants(cfg.hp);
  const std::vector<train::AblationVariant> picked{variants[0], variants[4], variants[5]};
  double full = 0.0, no_gate = 0.0, no_gate_con = 0.0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto rows = train::run_ablations(train::init_model(train_set, std::nullopt, cfg), train_set, dev_set, cfg, picked);
    full += rows[0].dev.accuracy / 5.0;
    no_gate += rows[1].dev.accuracy / 5.0;
    no_gate_con += rows[2].dev.accuracy / 5.0;
    per_seed += fmt(" %.3f/%.3f/%.3f", rows[0].dev.accuracy, rows[1].dev.accuracy, rows[2].dev.accuracy);
  }
  return {full >= no_gate && full >= no_gate_con,
          fmt("600/150 two-aspect corpus, mean dev accuracy over 5 seeds: full %.3f, -Gate %.3f, -Gate-Con %.3f "
              "(per seed full/-Gate/-Gate-Con:%s)",
              full, no_gate, no_gate_con, per_seed.c_str())};
}

Outcome gatediv_harness() {
  testing::ScratchDir dir("ac6");
  const auto all = testing::two_aspect_distractor_corpus(80, 5);
  data::write_corpus(dir / "train.jsonl", {all.begin(), all.begin() + 120});
  data::write_corpus(dir / "dev.jsonl", {all.begin() + 120, all.end()});
  const int code = run_cli({"ablate", "--train", (dir / "train.jsonl").string(), "--dev", (dir / "dev.jsonl").string(),
                            "--out", (dir / "out").string(), "--epochs", "4", "--hidden", "12", "--embed-dim", "12",
                            "--batch-size", "8", "--lr", "0.005", "--seed", "3"});
  if (code != 0) return {false, fmt("ablate exited with %d", code)};
  const auto rows = read_jsonl(dir / "out" / "ablation.jsonl");
  bool has_full = false, has_gatediv = false;
  for (const auto& r : rows) {
    has_full |= r.at("variant") == "full";
    has_gatediv |= r.at("variant") == "GateDiv";
  }
  auto trajectory = [&](const std::string& variant, bool& finite) {
    std::vector<double> div;
    for (const auto& r : read_jsonl(dir / "out" / ("metrics_" + variant + ".jsonl"))) {
      for (const char* key : {"loss_div", "loss_const", "loss_pred", "loss_total"})
        finite &= std::isfinite(r.at(key).get<double>());
      if (r.at("split") == "train") div.push_back(r.at("loss_div").get<double>());
    }
    return div;
  };
  bool finite = true;
  const auto a = trajectory("full", finite), b = trajectory("GateDiv", finite);
  const bool distinct = a.size() == b.size() && !a.empty() && a != b;
  return {has_full && has_gatediv && finite && distinct,
          fmt("%zu ablation rows (full %s, GateDiv %s), losses finite: %s, L_div trajectories distinct: %s "
              "(final train L_div %.4g vs %.4g)",
              rows.size(), has_full ? "present" : "missing", has_gatediv ? "present" : "missing", finite ? "yes" : "no",
              distinct ? "yes" : "no", a.empty() ? 0.0 : a.back(), b.empty() ? 0.0 : b.back())};
}

Outcome determinism() {
  testing::ScratchDir dir("ac7");
  const auto all = testing::two_aspect_distractor_corpus(40, 9);
  data::write_corpus(dir / "train.jsonl", {all.begin(), all.begin() + 60});
  data::write_corpus(dir / "dev.jsonl", {all.begin() + 60, all.end()});
  auto train_into = [&](const std::string& name, const std::string& seed) {
    return run_cli({"train", "--train", (dir / "train.jsonl").string(), "--dev", (dir / "dev.jsonl").string(), "--out",
                    (dir / name).string(), "--epochs", "3", "--hidden", "10", "--embed-dim", "10", "--seed", seed});
  };
  const int c1 = train_into("a", "11"), c2 = train_into("b", "11"), c3 = train_into("c", "12");
  const auto read = [&](const std::string& name, const char* file) { return testing::read_file(dir / name / file); };
  const bool same_ckpt = read("a", "model.json") == read("b", "model.json") && !read("a", "model.json").empty();
  const bool same_log = read("a", "metrics.jsonl") == read("b", "metrics.jsonl") && !read("a", "metrics.jsonl").empty();
  const bool other_differs = read("a", "model.json") != read("c", "model.json");
  return {c1 == 0 && c2 == 0 && c3 == 0 && same_ckpt && same_log && other_differs,
          fmt("two train runs with seed 11: checkpoints byte-identical %s, metrics logs byte-identical %s; seed 12 "
              "checkpoint differs %s",
              same_ckpt ? "yes" : "no", same_log ? "yes" : "no", other_differs ? "yes" : "no")};
}

const std::vector<std::pair<std::string, std::array<std::size_t, 3>>> kPublishedCounts{
    {"rest_train", {2164, 637, 807}},   {"rest_test", {728, 196, 196}},     {"laptop_train", {994, 464, 870}},
    {"laptop_test", {341, 169, 128}},   {"mams_train", {3380, 5042, 2764}}, {"mams_dev", {403, 604, 325}},
    {"mams_test", {400, 607, 329}},
};

Outcome data_contract() {
  const fs::path fixtures = fs::path(ABSA_SOURCE_DIR) / "data" / "fixtures";
  testing::ScratchDir dir("ac8");
  std::string detail;
  bool ok = true;

  const int code = run_cli({"convert", "--conllu", (fixtures / "restaurant.conllu").string(), "--aspects",
                            (fixtures / "restaurant_aspects.json").string(), "--out", (dir / "conv").string()});
  const std::string expected = testing::read_file(fixtures / "restaurant.jsonl");
  const std::string converted = testing::read_file(dir / "conv" / "converted.jsonl");
  const auto loaded = data::parse_corpus(dir / "conv" / "converted.jsonl");
  data::write_corpus(dir / "rewritten.jsonl", loaded);
  const bool round_trip = code == 0 && converted == expected && !expected.empty() &&
                          testing::read_file(dir / "rewritten.jsonl") == expected;
  ok &= round_trip;
  detail += fmt("fixture convert -> load -> write round trip %s (%zu examples)", round_trip ? "identical" : "DIFFERS",
                loaded.size());

  std::vector<std::string> lines;
  {
    std::istringstream in(expected);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
  }
  std::size_t line_ok = 0;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    std::string text;
    for (std::size_t j = 0; j < lines.size(); ++j) text += (j == k ? lines[j].substr(0, lines[j].size() / 2) : lines[j]) + "\n";
    const auto bad = dir.write("bad.jsonl", text);
    std::string err;
    const int c = run_cli({"train", "--train", bad.string(), "--out", (dir / "unused").string()}, nullptr, &err);
    try {
      data::parse_corpus(bad);
    } catch (const LoadError& e) {
      if (e.line() == k + 1 && c == 3 && err.find("line " + std::to_string(k + 1)) != std::string::npos) ++line_ok;
    }
  }
  ok &= line_ok == lines.size();
  detail += fmt("; malformed line reported with its number %zu/%zu", line_ok, lines.size());

  const char* data_dir = std::getenv("ABSA_DATA_DIR");
  if (!data_dir) {
    detail += "; published class counts skipped (ABSA_DATA_DIR not set)";
  } else {
    std::size_t checked = 0, matched = 0;
    for (const auto& [name, want] : kPublishedCounts) {
      const fs::path p = fs::path(data_dir) / (name + ".jsonl");
      if (!fs::exists(p)) continue;
      ++checked;
      const auto counts = data::class_counts(data::parse_corpus(p));
      if (counts == want) {
        ++matched;
      } else {
        detail += fmt("; %s has %zu/%zu/%zu, expected %zu/%zu/%zu", name.c_str(), counts[0], counts[1], counts[2], want[0],
                      want[1], want[2]);
      }
    }
    ok &= checked > 0 && matched == checked;
    detail += fmt("; published class counts matched %zu/%zu files in %s", matched, checked, data_dir);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Gradient integrity", gradient_integrity}, {"Oracle equivalence", oracle_equivalence},
      {"Loss-term laws", loss_term_laws},         {"Synthetic overfit", synthetic_overfit},
      {"Ablation direction", ablation_direction}, {"GateDiv comparison harness", gatediv_harness},
      {"Determinism", determinism},               {"Data contract", data_contract},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("AC%zu %s  %s: %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
