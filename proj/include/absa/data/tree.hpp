#pragma once

#include <cstddef>
#include <vector>

#include "absa/core/tensor.hpp"
#include "absa/data/example.hpp"

namespace absa::data {

/// Undirected view of a dependency parse plus per-token tree distance to the aspect span.
struct DependencyTree {
  std::size_t n = 0;
  /// Sorted adjacent tokens of each token, including the token itself when self-loops are on.
  std::vector<std::vector<std::size_t>> neighbor_sets;
  std::vector<std::size_t> path_len_to_aspect;
};

/// `ex` must already be validated.
DependencyTree build_tree(const Example& ex, bool include_self_loop = true);

/// softmax(-path_len_to_aspect)
core::Tensor syntax_scores(const DependencyTree& tree);

}  // namespace absa::data
