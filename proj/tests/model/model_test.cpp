#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "absa/core/error.hpp"
#include "absa/core/ops.hpp"
#include "absa/model/forward.hpp"
#include "absa/model/gradcheck.hpp"
#include "oracles.hpp"

using namespace absa;
using namespace absa::model;
using core::Rng;

namespace {

ModelState small_model(const std::vector<data::Example>& corpus, const HyperParams& hp, std::uint64_t seed,
                       double range = 0.5) {
  return make_model(data::random_embeddings(data::corpus_vocabulary(corpus), 6, seed), hp, seed + 1, range);
}

constexpr double kFrozenTotal = 1.3234005616311268;

double sum_of(const Tensor& t) { return std::accumulate(t.data().begin(), t.data().end(), 0.0); }

}  // namespace

TEST(Gcn, MatchesDenseAdjacencyOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(30), in = 1 + rng.index(6), out = 1 + rng.index(6);
    const auto heads = absa::testing::prufer_tree(n, rng);
    const auto ex = absa::testing::example_from_heads(heads, rng);
    const bool loop = trial % 2 == 0;
    const Tensor h = absa::testing::random_tensor({n, in}, rng), w = absa::testing::random_tensor({out, in}, rng),
                 b = absa::testing::random_tensor({out}, rng);
    Tape tape;
    const Tensor got = gcn_layer(tape.constant(h), data::build_tree(ex, loop), tape.constant(w), tape.constant(b)).value();
    EXPECT_LT(core::max_abs_diff(got, absa::testing::dense_gcn(h, heads, loop, w, b)), 1e-12) << "trial " << trial;
  }
}

TEST(Gcn, IsolatedTokenWithoutSelfLoopAggregatesToZero) {
  data::Example ex{{"a"}, {-1}, 0, 1, data::Polarity::neutral};
  Tape tape;
  const Tensor out = gcn_layer(tape.constant(Tensor::matrix({{5, -3}})), data::build_tree(ex, false),
                               tape.constant(Tensor::matrix({{1, 1}})), tape.constant(Tensor::vector({0.25})))
                         .value();
  EXPECT_EQ(out[0], 0.25);
}

TEST(Gate, RangeAndRegulation) {
  Tape tape;
  Var g = compute_gate(tape.constant(Tensor::vector({0, 0})), tape.constant(Tensor::matrix({{1, 2}, {3, 4}})),
                       tape.constant(Tensor::vector({0, 0})));
  EXPECT_EQ(g.value(), Tensor::vector({0.5, 0.5}));
  const Tensor r = regulate(tape.constant(Tensor::matrix({{2, 4}, {6, 8}})), g).value();
  EXPECT_EQ(r, Tensor::matrix({{1, 2}, {3, 4}}));
  EXPECT_EQ(regulate(tape.constant(Tensor::matrix({{2, 4}})), tape.constant(Tensor::vector({0, 0}))).value(),
            Tensor::matrix({{0, 0}}));
}

TEST(Diversity, Examples) {
  Tape tape;
  const std::vector<Var> hidden{tape.constant(Tensor::matrix({{1, 0}, {0, 1}})),
                                tape.constant(Tensor::matrix({{2, 1}, {0, 0}}))};
  const std::vector<Var> disjoint{tape.constant(Tensor::vector({1, 0})), tape.constant(Tensor::vector({0, 1}))};
  EXPECT_DOUBLE_EQ(diversity_loss(tape, hidden, disjoint).loss.value().item(), 0.0);

  const std::vector<Var> same{tape.constant(Tensor::vector({1, 1})), tape.constant(Tensor::vector({1, 1}))};
  const auto terms = diversity_loss(tape, hidden, same);
  EXPECT_EQ(terms.pooled[1].value(), Tensor::vector({2, 1}));
  EXPECT_DOUBLE_EQ(terms.loss.value().item(), 3.5);

  EXPECT_DOUBLE_EQ(diversity_loss(tape, {hidden[0]}, {same[0]}).loss.value().item(), 0.0);
}

TEST(Diversity, NormalizedIsCosine) {
  Tape tape;
  const std::vector<Var> hidden{tape.constant(Tensor::matrix({{3, 4}})), tape.constant(Tensor::matrix({{1, 1}}))};
  const std::vector<Var> gates{tape.constant(Tensor::vector({1, 1})), tape.constant(Tensor::vector({1, 1}))};
  EXPECT_NEAR(diversity_loss(tape, hidden, gates, true).loss.value().item(), 1.0, 1e-12);
}

TEST(GateDiv, Examples) {
  Tape tape;
  const std::vector<Var> gates{tape.constant(Tensor::vector({1, 0})), tape.constant(Tensor::vector({0.5, 0.5}))};
  EXPECT_DOUBLE_EQ(gatediv_baseline_loss(tape, gates).value().item(), 0.5);
  EXPECT_DOUBLE_EQ(gatediv_baseline_loss(tape, {gates[0]}).value().item(), 0.0);
  const std::vector<Var> three{gates[0], gates[1], tape.constant(Tensor::vector({0, 1}))};
  // pairs: (1,0).(.5,.5)=.5, (1,0).(0,1)=0, (.5,.5).(0,1)=.5, each twice
  EXPECT_NEAR(gatediv_baseline_loss(tape, three).value().item(), 1.0 / 3.0, 1e-15);
}

TEST(Consistency, KlAgainstSyntaxTarget) {
  Tape tape;
  const Tensor syn = Tensor::vector({0.7, 0.3});
  EXPECT_NEAR(consistency_loss(syn, tape.constant(syn)).value().item(), 0.0, 1e-15);
  EXPECT_NEAR(consistency_loss(syn, tape.constant(Tensor::vector({0.3, 0.7}))).value().item(), 0.3389191441548814,
              1e-12);
  const double clamped = consistency_loss(Tensor::vector({0.5, 0.5}), tape.constant(Tensor::vector({1, 0}))).value().item();
  EXPECT_TRUE(std::isfinite(clamped));
  EXPECT_GT(clamped, 10.0);
}

TEST(Predict, ZeroClassifierIsUniform) {
  const auto corpus = std::vector<data::Example>{random_example(4, 1)};
  ModelState state = small_model(corpus, {.hidden = 4, .layers = 2}, 5);
  state.classifier_out_weight.value.fill(0.0);
  const auto [total, t] = total_loss(corpus[0], state, state.hp);
  for (double p : t.class_probs.data()) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(t.loss.pred, std::log(3.0), 1e-12);
  EXPECT_NEAR(sum_of(t.mod), 1.0, 1e-12);
}

TEST(Ablation, DisabledTermsAreExactlyZero) {
  const auto ex = random_example(7, 9);
  const HyperParams full{.hidden = 5, .layers = 3};
  ModelState state = small_model({ex}, full, 2);
  const auto [total, f] = total_loss(ex, state, full);
  EXPECT_DOUBLE_EQ(total, f.loss.div + f.loss.cons + f.loss.pred);
  EXPECT_GT(f.loss.div, 0.0);
  EXPECT_GT(f.loss.cons, 0.0);

  HyperParams no_div = full;
  no_div.div_on = false;
  const auto d = total_loss(ex, state, no_div).second;
  EXPECT_EQ(d.loss.div, 0.0);
  EXPECT_EQ(d.loss.pred, f.loss.pred);
  EXPECT_EQ(d.loss.cons, f.loss.cons);

  HyperParams no_con = full;
  no_con.con_on = false;
  const auto c = total_loss(ex, state, no_con).second;
  EXPECT_EQ(c.loss.cons, 0.0);
  EXPECT_EQ(c.loss.total, f.loss.div + f.loss.pred);

  HyperParams no_gate = full;
  no_gate.gate_on = false;
  const auto g = total_loss(ex, state, no_gate).second;
  EXPECT_EQ(g.loss.div, 0.0);
  for (const auto& gate : g.gates)
    for (double v : gate.data()) EXPECT_EQ(v, 1.0);
  for (std::size_t l = 0; l < 3; ++l) EXPECT_EQ(g.regulated[l], g.hidden[l]);

  HyperParams weighted = full;
  weighted.alpha = 0.25;
  weighted.beta = 2.0;
  EXPECT_NEAR(total_loss(ex, state, weighted).first, f.loss.div + 0.25 * f.loss.cons + 2.0 * f.loss.pred, 1e-12);
}

TEST(Ablation, GateOffLeavesGateParametersWithoutGradient) {
  const auto ex = random_example(6, 4);
  HyperParams hp{.hidden = 4, .layers = 2, .gate_on = false};
  ModelState state = small_model({ex}, hp, 8);
  state.zero_grad();
  Tape tape;
  auto g = forward(tape, prepare(ex, state.vocab), state, hp);
  tape.backward(g.total);
  for (const auto& p : state.gate_weight)
    for (double v : p.grad.data()) EXPECT_EQ(v, 0.0);
  double other = 0.0;
  for (double v : state.classifier_out_weight.grad.data()) other += std::abs(v);
  EXPECT_GT(other, 0.0);
}

// The aspect only reaches the prediction through the gate.
TEST(AspectSensitivity, PredictionDependsOnAspectOnlyWithGate) {
  data::Example a{{"the", "fish", "was", "good", "but", "wine", "awful"}, {1, 3, 3, -1, 3, 6, 3}, 1, 2,
                  data::Polarity::positive};
  data::Example b = a;
  b.aspect_from = 5;
  b.aspect_to = 6;
  const HyperParams gated{.hidden = 6, .layers = 2};
  ModelState state = small_model({a}, gated, 12);
  const auto pa = total_loss(a, state, gated).second.class_probs;
  const auto pb = total_loss(b, state, gated).second.class_probs;
  EXPECT_GT(core::max_abs_diff(pa, pb), 1e-6);

  HyperParams ungated = gated;
  ungated.gate_on = false;
  EXPECT_EQ(total_loss(a, state, ungated).second.class_probs, total_loss(b, state, ungated).second.class_probs);
  EXPECT_NE(total_loss(a, state, ungated).second.syn, total_loss(b, state, ungated).second.syn);
}

TEST(Forward, ShapesAndFinitenessAcrossLengthsAndDepths) {
  for (std::size_t L : {1u, 2u, 3u}) {
    std::vector<data::Example> corpus;
    for (std::size_t n = 1; n <= 50; ++n) corpus.push_back(random_example(n, 1000 + n));
    const HyperParams hp{.hidden = 7, .layers = L};
    ModelState state = small_model(corpus, hp, 30 + L, 0.1);
    for (const auto& ex : corpus) {
      const auto [total, t] = total_loss(ex, state, hp);
      ASSERT_TRUE(std::isfinite(total)) << "n=" << ex.size() << " L=" << L;
      ASSERT_EQ(t.hidden.size(), L);
      for (const auto& h : t.hidden) ASSERT_EQ(h.shape(), (core::Shape{ex.size(), 7}));
      ASSERT_EQ(t.overall.shape(), (core::Shape{14}));
      ASSERT_EQ(t.mod.size(), ex.size());
      ASSERT_EQ(t.syn.size(), ex.size());
      ASSERT_EQ(t.class_probs.size(), 3u);
      EXPECT_NEAR(sum_of(t.mod), 1.0, 1e-12);
      EXPECT_NEAR(sum_of(t.class_probs), 1.0, 1e-12);
      EXPECT_TRUE(core::all_finite(t.mod) && core::all_finite(t.class_probs));
    }
  }
}

TEST(Forward, HyperParamsMustMatchModel) {
  const auto ex = random_example(4, 2);
  ModelState state = small_model({ex}, {.hidden = 4, .layers = 2}, 1);
  EXPECT_THROW(total_loss(ex, state, {.hidden = 5, .layers = 2}), ArgumentError);
  EXPECT_THROW(total_loss(ex, state, {.hidden = 4, .layers = 3}), ArgumentError);
}

TEST(Forward, ReplayIsBitwiseDeterministic) {
  const auto ex = random_example(9, 77);
  const HyperParams hp{.hidden = 6, .layers = 2};
  ModelState a = small_model({ex}, hp, 4), b = small_model({ex}, hp, 4);
  const auto ta = total_loss(ex, a, hp), tb = total_loss(ex, b, hp);
  EXPECT_EQ(ta.first, tb.first);
  EXPECT_EQ(ta.second.mod, tb.second.mod);
}

TEST(Model, InitRangeAndZeroBiases) {
  const auto ex = random_example(4, 2);
  data::EmbeddingTable table = data::random_embeddings(data::corpus_vocabulary({ex}), 6, 1);
  table.trainable = false;
  ModelState state = make_model(table, {.hidden = 4, .layers = 2}, 3);
  for (const auto* p : state.parameters()) {
    for (double v : p->value.data()) {
      if (p->value.rank() == 1) EXPECT_EQ(v, 0.0) << p->name;
      else EXPECT_LE(std::abs(v), 0.1) << p->name;
    }
  }
  EXPECT_EQ(state.parameters().size(), state.trainable_parameters().size() + 1);
  EXPECT_EQ(state.parameters().front()->name, "embedding");
}

TEST(Model, FrozenTotalLoss) {
  // Value from tests/oracles/forward_oracle.py on the checkpoint this test builds.
  const data::Example ex{{"The", "pasta", "was", "bland"}, {1, 3, 3, -1}, 1, 2, data::Polarity::negative};
  const HyperParams hp{.hidden = 4, .layers = 2};
  ModelState state = make_model(data::random_embeddings({"the", "pasta", "was", "bland"}, 5, 2024), hp, 7, 0.5);
  EXPECT_NEAR(total_loss(ex, state, hp).first, kFrozenTotal, 1e-10);
}

TEST(GradCheck, PassesAcrossConfigurations) {
  for (const HyperParams hp : {HyperParams{.hidden = 6, .layers = 2}, HyperParams{.hidden = 4, .layers = 3},
                               HyperParams{.hidden = 5, .layers = 1},
                               HyperParams{.hidden = 5, .layers = 2, .include_self_loop = false, .gatediv_baseline = true},
                               HyperParams{.hidden = 5, .layers = 2, .normalize_div = true},
                               HyperParams{.hidden = 5, .layers = 2, .gate_on = false}}) {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      GradCheckConfig cfg;
      cfg.seed = seed;
      cfg.tokens = 4 + seed;
      cfg.hp = hp;
      const auto report = run_gradcheck(cfg);
      EXPECT_TRUE(report.passed) << format_report(report);
      EXPECT_LT(report.max_rel_error, 1e-4);
    }
  }
}

TEST(GradCheck, DetectsCorruptedGradient) {
  for (const char* name : {"gcn2.weight", "gate1.bias", "score_h.weight", "embedding"}) {
    GradCheckConfig cfg;
    cfg.corrupt_parameter = name;
    const auto report = run_gradcheck(cfg);
    EXPECT_FALSE(report.passed) << name;
    EXPECT_EQ(report.worst_parameter, name);
    EXPECT_NE(format_report(report).find("FAIL"), std::string::npos);
  }
}
