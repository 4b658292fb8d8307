#include "absa/model/model_state.hpp"

#include <string>

#include "absa/core/error.hpp"
#include "absa/core/random.hpp"

namespace absa::model {

void HyperParams::validate() const {
  if (hidden == 0) throw ArgumentError("hidden must be positive");
  if (layers == 0) throw ArgumentError("layers must be at least 1");
  if (!(alpha >= 0.0)) throw ArgumentError("alpha must be non-negative");
  if (!(beta >= 0.0)) throw ArgumentError("beta must be non-negative");
}

std::vector<Parameter*> ModelState::parameters() {
  std::vector<Parameter*> out{&embedding};
  for (std::size_t l = 0; l < gcn_weight.size(); ++l) {
    out.push_back(&gcn_weight[l]);
    out.push_back(&gcn_bias[l]);
    out.push_back(&gate_weight[l]);
    out.push_back(&gate_bias[l]);
  }
  for (Parameter* p : {&sentence_weight, &sentence_bias, &score_v_weight, &score_v_bias, &score_h_weight,
                       &score_h_bias, &classifier_hidden_weight, &classifier_hidden_bias, &classifier_out_weight,
                       &classifier_out_bias}) {
    out.push_back(p);
  }
  return out;
}

std::vector<const Parameter*> ModelState::parameters() const {
  auto mut = const_cast<ModelState*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

std::vector<Parameter*> ModelState::trainable_parameters() {
  auto all = parameters();
  if (!train_embeddings) all.erase(all.begin());
  return all;
}

void ModelState::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
}

void ModelState::check_shapes() const {
  const std::size_t h = hp.hidden, d = embed_dim();
  auto expect = [](const Parameter& p, core::Shape shape) {
    if (p.value.shape() != shape) {
      throw CheckpointError("parameter '" + p.name + "' has shape " + core::shape_string(p.value.shape()) +
                            ", expected " + core::shape_string(shape));
    }
  };
  if (embedding.value.rank() != 2 || embedding.value.rows() != vocab.size()) {
    throw CheckpointError("embedding table has " + std::to_string(embedding.value.rows()) + " rows for a vocabulary of " +
                          std::to_string(vocab.size()));
  }
  if (gcn_weight.size() != hp.layers || gcn_bias.size() != hp.layers || gate_weight.size() != hp.layers ||
      gate_bias.size() != hp.layers) {
    throw CheckpointError("layer count does not match hyperparameters");
  }
  for (std::size_t l = 0; l < hp.layers; ++l) {
    expect(gcn_weight[l], {h, l == 0 ? d : h});
    expect(gcn_bias[l], {h});
    expect(gate_weight[l], {h, d});
    expect(gate_bias[l], {h});
  }
  expect(sentence_weight, {h, d});
  expect(sentence_bias, {h});
  expect(score_v_weight, {h, 2 * h});
  expect(score_v_bias, {h});
  expect(score_h_weight, {h, h});
  expect(score_h_bias, {h});
  expect(classifier_hidden_weight, {h, 2 * h});
  expect(classifier_hidden_bias, {h});
  expect(classifier_out_weight, {data::kNumClasses, h});
  expect(classifier_out_bias, {data::kNumClasses});
}

ModelState make_model(data::EmbeddingTable table, const HyperParams& hp, std::uint64_t seed, double init_range) {
  hp.validate();
  ModelState s;
  s.hp = hp;
  s.vocab = std::move(table.vocab);
  s.train_embeddings = table.trainable;
  s.embedding = Parameter("embedding", std::move(table.vectors));

  const std::size_t h = hp.hidden, d = s.embed_dim();
  auto mat = [](std::string name, std::size_t r, std::size_t c) { return Parameter(std::move(name), core::Tensor({r, c})); };
  auto vec = [](std::string name, std::size_t n) { return Parameter(std::move(name), core::Tensor({n})); };
  for (std::size_t l = 0; l < hp.layers; ++l) {
    const std::string tag = std::to_string(l + 1);
    s.gcn_weight.push_back(mat("gcn" + tag + ".weight", h, l == 0 ? d : h));
    s.gcn_bias.push_back(vec("gcn" + tag + ".bias", h));
    s.gate_weight.push_back(mat("gate" + tag + ".weight", h, d));
    s.gate_bias.push_back(vec("gate" + tag + ".bias", h));
  }
  s.sentence_weight = mat("sentence.weight", h, d);
  s.sentence_bias = vec("sentence.bias", h);
  s.score_v_weight = mat("score_v.weight", h, 2 * h);
  s.score_v_bias = vec("score_v.bias", h);
  s.score_h_weight = mat("score_h.weight", h, h);
  s.score_h_bias = vec("score_h.bias", h);
  s.classifier_hidden_weight = mat("classifier_hidden.weight", h, 2 * h);
  s.classifier_hidden_bias = vec("classifier_hidden.bias", h);
  s.classifier_out_weight = mat("classifier_out.weight", data::kNumClasses, h);
  s.classifier_out_bias = vec("classifier_out.bias", data::kNumClasses);

  core::Rng rng(seed);
  auto params = s.parameters();
  for (std::size_t k = 1; k < params.size(); ++k) {
    Parameter& p = *params[k];
    if (p.value.rank() != 2) continue;
    for (auto& v : p.value.data()) v = rng.uniform(-init_range, init_range);
  }
  return s;
}

}  // namespace absa::model
