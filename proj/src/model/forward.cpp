#include "absa/model/forward.hpp"

#include "absa/core/error.hpp"
#include "absa/data/embeddings.hpp"

namespace absa::model {

namespace ops = absa::core;

PreparedExample prepare(const data::Example& ex, const data::Vocabulary& vocab, bool include_self_loop) {
  if (auto err = data::validate(ex)) throw ArgumentError("invalid example: " + *err);
  PreparedExample p;
  p.example = ex;
  p.tree = data::build_tree(ex, include_self_loop);
  p.token_ids = data::token_ids(ex, vocab);
  p.syn = data::syntax_scores(p.tree);
  return p;
}

std::vector<PreparedExample> prepare_all(const std::vector<data::Example>& examples, const data::Vocabulary& vocab,
                                         bool include_self_loop) {
  std::vector<PreparedExample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(prepare(ex, vocab, include_self_loop));
  return out;
}

Encoding encode(Tape& tape, const PreparedExample& ex, ModelState& state) {
  Encoding enc;
  enc.words = ops::gather_rows(tape.parameter(state.embedding), ex.token_ids);
  enc.aspect = ops::mean_rows(ops::slice_rows(enc.words, ex.example.aspect_from, ex.example.aspect_to));
  enc.sentence = ops::tanh(ops::linear(ops::maxpool_rows(enc.words), tape.parameter(state.sentence_weight),
                                       tape.parameter(state.sentence_bias)));
  return enc;
}

Var gcn_layer(const Var& prev, const data::DependencyTree& tree, const Var& weight, const Var& bias) {
  if (prev.value().rows() != tree.n) {
    throw DimensionError("gcn_layer: " + std::to_string(prev.value().rows()) + " rows for a tree of " +
                         std::to_string(tree.n) + " tokens");
  }
  return ops::relu(ops::linear(ops::aggregate_neighbors(prev, tree.neighbor_sets), weight, bias));
}

Var compute_gate(const Var& aspect, const Var& weight, const Var& bias) {
  return ops::sigmoid(ops::linear(aspect, weight, bias));
}

Var regulate(const Var& hidden, const Var& gate) { return ops::mul(hidden, gate); }

namespace {

Var pair_score(const Var& a, const Var& b, bool normalize) {
  return normalize ? ops::cosine_similarity(a, b) : ops::dot(a, b);
}

Var mean_of(Tape& tape, const std::vector<Var>& terms) {
  if (terms.empty()) return tape.constant(Tensor::scalar(0.0));
  Var acc = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) acc = ops::add(acc, terms[k]);
  return ops::scale(acc, 1.0 / static_cast<double>(terms.size()));
}

}  // namespace

Var diversity_from_pooled(Tape& tape, const std::vector<Var>& pooled, const std::vector<std::vector<Var>>& cross_pooled,
                          bool normalize) {
  const std::size_t L = pooled.size();
  if (cross_pooled.size() != L) throw DimensionError("diversity_from_pooled: layer counts differ");
  std::vector<Var> terms;
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t m = 0; m < L; ++m) {
      if (m != l) terms.push_back(pair_score(pooled[l], cross_pooled[l].at(m), normalize));
    }
  }
  return mean_of(tape, terms);
}

DiversityTerms diversity_loss(Tape& tape, const std::vector<Var>& hidden, const std::vector<Var>& gates,
                              bool normalize) {
  if (hidden.size() != gates.size()) throw DimensionError("diversity_loss: layer and gate counts differ");
  const std::size_t L = hidden.size();
  DiversityTerms out;
  out.cross_pooled.assign(L, std::vector<Var>(L));
  for (std::size_t l = 0; l < L; ++l) {
    out.pooled.push_back(ops::maxpool_rows(regulate(hidden[l], gates[l])));
    for (std::size_t m = 0; m < L; ++m) {
      if (m != l) out.cross_pooled[l][m] = ops::maxpool_rows(regulate(hidden[l], gates[m]));
    }
  }
  out.loss = diversity_from_pooled(tape, out.pooled, out.cross_pooled, normalize);
  return out;
}

Var gatediv_baseline_loss(Tape& tape, const std::vector<Var>& gates, bool normalize) {
  std::vector<Var> terms;
  for (std::size_t l = 0; l < gates.size(); ++l) {
    for (std::size_t m = 0; m < gates.size(); ++m) {
      if (m != l) terms.push_back(pair_score(gates[l], gates[m], normalize));
    }
  }
  return mean_of(tape, terms);
}

Var model_scores(const Var& overall, const Var& last_regulated, ModelState& state) {
  Tape& tape = *overall.tape();
  Var v = ops::sigmoid(
      ops::linear(overall, tape.parameter(state.score_v_weight), tape.parameter(state.score_v_bias)));
  Var h = ops::sigmoid(
      ops::linear(last_regulated, tape.parameter(state.score_h_weight), tape.parameter(state.score_h_bias)));
  return ops::softmax(ops::matmul(h, v));
}

Var consistency_loss(const Tensor& syn, const Var& mod) { return ops::kl_divergence(syn, mod, 1e-12); }

Prediction predict(const Var& overall, ModelState& state) {
  Tape& tape = *overall.tape();
  Var hid = ops::relu(ops::linear(overall, tape.parameter(state.classifier_hidden_weight),
                                  tape.parameter(state.classifier_hidden_bias)));
  Var logits =
      ops::linear(hid, tape.parameter(state.classifier_out_weight), tape.parameter(state.classifier_out_bias));
  return {logits, ops::softmax(logits)};
}

Var prediction_loss(const Var& probs, data::Polarity gold) {
  return ops::scale(ops::log(ops::pick(probs, data::class_index(gold))), -1.0);
}

ForwardGraph forward(Tape& tape, const PreparedExample& ex, ModelState& state, const HyperParams& hp) {
  hp.validate();
  if (hp.hidden != state.hidden() || hp.layers != state.layers()) {
    throw ArgumentError("hyperparameters (hidden=" + std::to_string(hp.hidden) + ", layers=" +
                        std::to_string(hp.layers) + ") do not match the model (hidden=" +
                        std::to_string(state.hidden()) + ", layers=" + std::to_string(state.layers()) + ")");
  }
  ForwardGraph g;
  g.enc = encode(tape, ex, state);

  Var prev = g.enc.words;
  for (std::size_t l = 0; l < hp.layers; ++l) {
    Var h = gcn_layer(prev, ex.tree, tape.parameter(state.gcn_weight[l]), tape.parameter(state.gcn_bias[l]));
    Var gate = hp.gate_on
                   ? compute_gate(g.enc.aspect, tape.parameter(state.gate_weight[l]), tape.parameter(state.gate_bias[l]))
                   : tape.constant(Tensor::filled({hp.hidden}, 1.0));
    g.hidden.push_back(h);
    g.gates.push_back(gate);
    g.regulated.push_back(regulate(h, gate));
    prev = h;
  }

  g.diversity = diversity_loss(tape, g.hidden, g.gates, hp.normalize_div);
  if (!hp.diversity_active()) {
    g.loss_div = tape.constant(Tensor::scalar(0.0));
  } else if (hp.gatediv_baseline) {
    g.loss_div = gatediv_baseline_loss(tape, g.gates, hp.normalize_div);
  } else {
    g.loss_div = g.diversity.loss;
  }

  const Var& last = g.regulated.back();
  g.overall = ops::concat(g.enc.sentence, ops::maxpool_rows(last));
  g.syn = ex.syn;
  g.mod = model_scores(g.overall, last, state);
  g.loss_const = hp.con_on ? consistency_loss(g.syn, g.mod) : tape.constant(Tensor::scalar(0.0));

  g.prediction = predict(g.overall, state);
  g.loss_pred = prediction_loss(g.prediction.probs, ex.example.label);

  g.total = ops::add(ops::add(g.loss_div, ops::scale(g.loss_const, hp.alpha)), ops::scale(g.loss_pred, hp.beta));
  return g;
}

data::Polarity argmax_class(const Tensor& probs) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] > probs[best]) best = k;
  }
  return data::kAllPolarities.at(best);
}

ForwardTrace snapshot(const ForwardGraph& g) {
  ForwardTrace t;
  t.words = g.enc.words.value();
  t.aspect = g.enc.aspect.value();
  t.sentence = g.enc.sentence.value();
  const std::size_t L = g.hidden.size();
  for (std::size_t l = 0; l < L; ++l) {
    t.hidden.push_back(g.hidden[l].value());
    t.gates.push_back(g.gates[l].value());
    t.regulated.push_back(g.regulated[l].value());
    t.pooled.push_back(g.diversity.pooled[l].value());
    std::vector<Tensor> row(L);
    for (std::size_t m = 0; m < L; ++m) {
      if (m != l) row[m] = g.diversity.cross_pooled[l][m].value();
    }
    t.cross_pooled.push_back(std::move(row));
  }
  t.overall = g.overall.value();
  t.syn = g.syn;
  t.mod = g.mod.value();
  t.class_probs = g.prediction.probs.value();
  t.loss = {g.loss_div.value().item(), g.loss_const.value().item(), g.loss_pred.value().item(), g.total.value().item()};
  t.predicted = argmax_class(t.class_probs);
  return t;
}

std::pair<double, ForwardTrace> total_loss(const data::Example& ex, ModelState& state, const HyperParams& hp) {
  Tape tape;
  const PreparedExample p = prepare(ex, state.vocab, hp.include_self_loop);
  ForwardGraph g = forward(tape, p, state, hp);
  ForwardTrace t = snapshot(g);
  return {t.loss.total, std::move(t)};
}

}  // namespace absa::model
