#include "absa/data/tree.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "absa/core/ops.hpp"

namespace absa::data {

DependencyTree build_tree(const Example& ex, bool include_self_loop) {
  const std::size_t n = ex.tokens.size();
  DependencyTree tree;
  tree.n = n;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ex.heads[i] < 0) continue;
    const auto h = static_cast<std::size_t>(ex.heads[i]);
    adj[i].push_back(h);
    adj[h].push_back(i);
  }

  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  tree.path_len_to_aspect.assign(n, kUnseen);
  std::deque<std::size_t> frontier;
  for (std::size_t a = ex.aspect_from; a < ex.aspect_to; ++a) {
    tree.path_len_to_aspect[a] = 0;
    frontier.push_back(a);
  }
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    for (std::size_t v : adj[u]) {
      if (tree.path_len_to_aspect[v] == kUnseen) {
        tree.path_len_to_aspect[v] = tree.path_len_to_aspect[u] + 1;
        frontier.push_back(v);
      }
    }
  }

  tree.neighbor_sets = std::move(adj);
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = tree.neighbor_sets[i];
    if (include_self_loop) s.push_back(i);
    std::sort(s.begin(), s.end());
  }
  return tree;
}

core::Tensor syntax_scores(const DependencyTree& tree) {
  std::vector<double> neg(tree.n);
  for (std::size_t i = 0; i < tree.n; ++i) neg[i] = -static_cast<double>(tree.path_len_to_aspect[i]);
  return core::softmax_values(neg);
}

}  // namespace absa::data
