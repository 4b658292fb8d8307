#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "absa/data/example.hpp"

namespace absa::data {

/// Reads a JSON Lines corpus. Any malformed record aborts the whole load with
/// a LoadError carrying its 1-based line number. Blank lines are ignored.
std::vector<Example> parse_corpus(const std::filesystem::path& path);
std::vector<Example> parse_corpus(std::istream& in, const std::string& source = "<stream>");

/// Single-line JSON encoding of an example, the inverse of the loader.
std::string to_json_line(const Example& ex);
void write_corpus(const std::filesystem::path& path, const std::vector<Example>& examples);

/// Counts indexed by class_index().
std::array<std::size_t, kNumClasses> class_counts(const std::vector<Example>& examples);

}  // namespace absa::data
