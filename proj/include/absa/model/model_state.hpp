#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absa/core/tensor.hpp"
#include "absa/data/embeddings.hpp"
#include "absa/model/hyperparams.hpp"

namespace absa::model {

using core::Parameter;

/// Every learnable tensor of the model. Affine maps store weights as
/// [out x in] with a separate [out] bias.
struct ModelState {
  HyperParams hp;
  data::Vocabulary vocab;
  bool train_embeddings = true;

  Parameter embedding;                  // |V| x d
  std::vector<Parameter> gcn_weight;    // layer 0: hidden x d, later: hidden x hidden
  std::vector<Parameter> gcn_bias;      // hidden
  std::vector<Parameter> gate_weight;   // hidden x d
  std::vector<Parameter> gate_bias;     // hidden
  Parameter sentence_weight;            // hidden x d
  Parameter sentence_bias;              // hidden
  Parameter score_v_weight;             // hidden x 2*hidden
  Parameter score_v_bias;
  Parameter score_h_weight;             // hidden x hidden
  Parameter score_h_bias;
  Parameter classifier_hidden_weight;   // hidden x 2*hidden
  Parameter classifier_hidden_bias;
  Parameter classifier_out_weight;      // 3 x hidden
  Parameter classifier_out_bias;

  std::size_t embed_dim() const noexcept { return embedding.value.cols(); }
  std::size_t hidden() const noexcept { return hp.hidden; }
  std::size_t layers() const noexcept { return gcn_weight.size(); }

  /// Fixed canonical order, embedding first.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  /// parameters() minus the embedding table when it is frozen.
  std::vector<Parameter*> trainable_parameters();

  void zero_grad();
  /// Throws CheckpointError if any tensor disagrees with the declared architecture.
  void check_shapes() const;
};

/// Allocates a model around `table`. Weight matrices are drawn uniform in
/// [-init_range, init_range] in parameters() order; biases start at zero.
ModelState make_model(data::EmbeddingTable table, const HyperParams& hp, std::uint64_t seed, double init_range = 0.1);

}  // namespace absa::model
