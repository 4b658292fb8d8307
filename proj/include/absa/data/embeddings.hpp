#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "absa/core/tensor.hpp"
#include "absa/data/example.hpp"

namespace absa::data {

/// Word list in row order. The UNK entry is always the last row.
class Vocabulary {
 public:
  static constexpr const char* kUnkToken = "<unk>";

  Vocabulary() = default;
  /// `words` must be unique and must not contain the UNK token.
  explicit Vocabulary(std::vector<std::string> words);

  /// Exact match first, then lowercase match, else unk_index().
  std::size_t lookup(const std::string& token) const;
  /// True when lookup() resolves to a real word.
  bool contains(const std::string& token) const;

  std::size_t size() const noexcept { return words_.size() + 1; }
  std::size_t unk_index() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }

  bool operator==(const Vocabulary& o) const { return words_ == o.words_; }

 private:
  std::optional<std::size_t> find(const std::string& token) const;

  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct EmbeddingTable {
  Vocabulary vocab;
  core::Tensor vectors;  // vocab.size() x dim
  bool trainable = true;

  std::size_t dim() const noexcept { return vectors.cols(); }
  std::size_t unk_index() const noexcept { return vocab.unk_index(); }
};

/// "word v1 ... vd" per line. Row order follows the file; the UNK row is the
/// component-wise mean of all loaded rows.
EmbeddingTable load_embeddings(const std::filesystem::path& path, bool trainable = true);

/// Distinct tokens in first-appearance order.
std::vector<std::string> corpus_vocabulary(const std::vector<Example>& examples);

/// Uniform [-0.1, 0.1] rows for `words`; UNK is the mean row as for loaded tables.
EmbeddingTable random_embeddings(std::vector<std::string> words, std::size_t dim, std::uint64_t seed);

std::vector<std::size_t> token_ids(const Example& ex, const Vocabulary& vocab);
/// Row i is the table vector of tokens[i] (UNK for unknown tokens).
core::Tensor embed_example(const Example& ex, const EmbeddingTable& table);

}  // namespace absa::data
