#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace absa::data {

enum class Polarity : std::size_t { positive = 0, neutral = 1, negative = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Polarity, kNumClasses> kAllPolarities{Polarity::positive, Polarity::neutral,
                                                                   Polarity::negative};

std::string_view to_string(Polarity p);
std::optional<Polarity> parse_polarity(std::string_view s);
constexpr std::size_t class_index(Polarity p) { return static_cast<std::size_t>(p); }

/// One sentence with a single queried aspect span [aspect_from, aspect_to).
/// heads[i] is the 0-based parent of token i, -1 for the root.
struct Example {
  std::vector<std::string> tokens;
  std::vector<int> heads;
  std::size_t aspect_from = 0;
  std::size_t aspect_to = 0;
  Polarity label = Polarity::neutral;

  std::size_t size() const noexcept { return tokens.size(); }
  bool operator==(const Example&) const = default;
};

/// Empty when `ex` is a well-formed tree with a valid aspect span, else the reason.
std::optional<std::string> validate(const Example& ex);

}  // namespace absa::data
