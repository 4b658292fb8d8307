#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "absa/data/example.hpp"

namespace absa::data {

/// Tokens and 0-based heads of one CoNLL-U sentence (multiword ranges and
/// empty nodes are dropped).
struct ParsedSentence {
  std::vector<std::string> forms;
  std::vector<int> heads;
};

std::vector<ParsedSentence> read_conllu(std::istream& in, const std::string& source = "<stream>");
std::vector<ParsedSentence> read_conllu(const std::filesystem::path& path);

/// One sidecar record: {"sentence_index", "from", "to", "label"}.
struct AspectAnnotation {
  std::size_t sentence_index = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  Polarity label = Polarity::neutral;
};

/// The sidecar is a JSON array of annotation objects.
std::vector<AspectAnnotation> read_aspect_sidecar(const std::filesystem::path& path);

/// One validated Example per annotation, in sidecar order.
std::vector<Example> convert_conllu(const std::vector<ParsedSentence>& sentences,
                                    const std::vector<AspectAnnotation>& aspects);

}  // namespace absa::data
