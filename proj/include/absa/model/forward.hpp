#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "absa/core/ops.hpp"
#include "absa/core/tape.hpp"
#include "absa/data/example.hpp"
#include "absa/data/tree.hpp"
#include "absa/model/hyperparams.hpp"
#include "absa/model/model_state.hpp"

namespace absa::model {

using core::Tape;
using core::Tensor;
using core::Var;

/// Per-example inputs that do not depend on parameters.
struct PreparedExample {
  data::Example example;
  data::DependencyTree tree;
  std::vector<std::size_t> token_ids;
  Tensor syn;
};

PreparedExample prepare(const data::Example& ex, const data::Vocabulary& vocab, bool include_self_loop = true);
std::vector<PreparedExample> prepare_all(const std::vector<data::Example>& examples, const data::Vocabulary& vocab,
                                         bool include_self_loop = true);

struct Encoding {
  Var words;     // E, n x d
  Var aspect;    // e_t, mean of the aspect rows
  Var sentence;  // s = tanh(W_s maxpool(E) + b_s)
};

/// The only place where word representations enter the model: a static
/// embedding lookup plus a pooled sentence vector.
Encoding encode(Tape& tape, const PreparedExample& ex, ModelState& state);

/// ReLU(W mean_{j in N(i)} h_j + b) for every token i.
Var gcn_layer(const Var& prev, const data::DependencyTree& tree, const Var& weight, const Var& bias);
Var compute_gate(const Var& aspect, const Var& weight, const Var& bias);
/// Multiplies every row of `hidden` by `gate`.
Var regulate(const Var& hidden, const Var& gate);

struct DiversityTerms {
  Var loss;
  std::vector<Var> pooled;                    // maxpool of g_l o h^l
  std::vector<std::vector<Var>> cross_pooled; // [l][m]: maxpool of g_m o h^l, empty Var on the diagonal
};

/// Mean over ordered layer pairs (l != m) of pooled[l] . cross_pooled[l][m].
/// A single layer has no pairs and yields 0.
Var diversity_from_pooled(Tape& tape, const std::vector<Var>& pooled, const std::vector<std::vector<Var>>& cross_pooled,
                          bool normalize = false);
DiversityTerms diversity_loss(Tape& tape, const std::vector<Var>& hidden, const std::vector<Var>& gates,
                              bool normalize = false);
/// Mean over ordered layer pairs of g_l . g_m.
Var gatediv_baseline_loss(Tape& tape, const std::vector<Var>& gates, bool normalize = false);

/// softmax_i( sigmoid(W_V V + b_V) . sigmoid(W_H hbar_i + b_H) )
Var model_scores(const Var& overall, const Var& last_regulated, ModelState& state);
/// KL(syn || mod); syn is a constant target.
Var consistency_loss(const Tensor& syn, const Var& mod);

struct Prediction {
  Var logits;
  Var probs;
};
Prediction predict(const Var& overall, ModelState& state);
/// -log probs[gold]
Var prediction_loss(const Var& probs, data::Polarity gold);

/// Every intermediate of one forward pass, left on the tape.
struct ForwardGraph {
  Encoding enc;
  std::vector<Var> hidden;     // h^l, l = 1..L
  std::vector<Var> gates;      // g_l (all-ones constants with the gate off)
  std::vector<Var> regulated;  // g_l o h^l
  DiversityTerms diversity;
  Var overall;                 // V = [s, maxpool(hbar^L)]
  Tensor syn;
  Var mod;
  Prediction prediction;
  Var loss_div;
  Var loss_const;
  Var loss_pred;
  Var total;
};

ForwardGraph forward(Tape& tape, const PreparedExample& ex, ModelState& state, const HyperParams& hp);

struct LossTerms {
  double div = 0.0;
  double cons = 0.0;
  double pred = 0.0;
  double total = 0.0;
};

/// Value snapshot of a ForwardGraph.
struct ForwardTrace {
  Tensor words;
  Tensor aspect;
  Tensor sentence;
  std::vector<Tensor> hidden;
  std::vector<Tensor> gates;
  std::vector<Tensor> regulated;
  std::vector<Tensor> pooled;
  std::vector<std::vector<Tensor>> cross_pooled;
  Tensor overall;
  Tensor syn;
  Tensor mod;
  Tensor class_probs;
  LossTerms loss;
  data::Polarity predicted = data::Polarity::neutral;
};

ForwardTrace snapshot(const ForwardGraph& graph);
data::Polarity argmax_class(const Tensor& probs);

/// Runs one forward pass on a private tape.
std::pair<double, ForwardTrace> total_loss(const data::Example& ex, ModelState& state, const HyperParams& hp);

}  // namespace absa::model
