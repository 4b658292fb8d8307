#include "absa/data/example.hpp"

namespace absa::data {

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::positive:
      return "positive";
    case Polarity::neutral:
      return "neutral";
    case Polarity::negative:
      return "negative";
  }
  return "neutral";
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::positive;
  if (s == "neutral") return Polarity::neutral;
  if (s == "negative") return Polarity::negative;
  return std::nullopt;
}

std::optional<std::string> validate(const Example& ex) {
  const std::size_t n = ex.tokens.size();
  if (n == 0) return "empty token list";
  if (ex.heads.size() != n) {
    return "heads has " + std::to_string(ex.heads.size()) + " entries for " + std::to_string(n) + " tokens";
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int h = ex.heads[i];
    if (h == -1) {
      ++roots;
    } else if (h < -1 || h >= static_cast<int>(n)) {
      return "head " + std::to_string(h) + " of token " + std::to_string(i) + " out of range";
    } else if (h == static_cast<int>(i)) {
      return "token " + std::to_string(i) + " is its own head (cycle)";
    }
  }
  if (roots == 0) return "no root (heads form a cycle)";
  if (roots > 1) return "multiple roots (" + std::to_string(roots) + ")";
  // Every token must reach the root within n steps.
  for (std::size_t i = 0; i < n; ++i) {
    int cur = static_cast<int>(i);
    std::size_t steps = 0;
    while (cur != -1 && steps <= n) {
      cur = ex.heads[static_cast<std::size_t>(cur)];
      ++steps;
    }
    if (cur != -1) return "cycle through token " + std::to_string(i) + " (not connected to the root)";
  }
  if (ex.aspect_from >= ex.aspect_to) return "empty aspect span";
  if (ex.aspect_to > n) return "aspect span exceeds sentence length";
  return std::nullopt;
}

}  // namespace absa::data
