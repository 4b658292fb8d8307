#include "absa/data/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "absa/core/error.hpp"
#include "absa/core/random.hpp"

namespace absa::data {
namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void fill_unk_with_mean(core::Tensor& vectors) {
  const std::size_t words = vectors.rows() - 1, dim = vectors.cols();
  if (words == 0) return;
  auto unk = vectors.row(words);
  std::fill(unk.begin(), unk.end(), 0.0);
  for (std::size_t r = 0; r < words; ++r) {
    for (std::size_t c = 0; c < dim; ++c) unk[c] += vectors(r, c);
  }
  for (auto& v : unk) v /= static_cast<double>(words);
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] == kUnkToken) throw ArgumentError("vocabulary may not contain the UNK token");
    if (!index_.emplace(words_[i], i).second) throw ArgumentError("duplicate vocabulary word '" + words_[i] + "'");
  }
}

std::optional<std::size_t> Vocabulary::find(const std::string& token) const {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  if (auto it = index_.find(lowercase(token)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t Vocabulary::lookup(const std::string& token) const { return find(token).value_or(unk_index()); }

bool Vocabulary::contains(const std::string& token) const { return find(token).has_value(); }

EmbeddingTable load_embeddings(const std::filesystem::path& path, bool trainable) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open embeddings file");
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) continue;
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) {
      double v = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw LoadError(path.string(), lineno, "bad number '" + tok + "'");
      }
      row.push_back(v);
    }
    if (row.empty()) throw LoadError(path.string(), lineno, "word '" + word + "' has no vector");
    if (dim == 0) dim = row.size();
    if (row.size() != dim) {
      throw LoadError(path.string(), lineno,
                      "inconsistent dimension " + std::to_string(row.size()) + " (expected " + std::to_string(dim) + ")");
    }
    if (word == Vocabulary::kUnkToken) throw LoadError(path.string(), lineno, "reserved word '<unk>'");
    if (!seen.insert(word).second) throw LoadError(path.string(), lineno, "duplicate word '" + word + "'");
    words.push_back(word);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (words.empty()) throw LoadError(path.string(), 0, "no vectors");
  const std::size_t rows = words.size() + 1;
  values.resize(rows * dim, 0.0);
  EmbeddingTable table{Vocabulary(std::move(words)), core::Tensor::matrix(rows, dim, std::move(values)), trainable};
  fill_unk_with_mean(table.vectors);
  return table;
}

std::vector<std::string> corpus_vocabulary(const std::vector<Example>& examples) {
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  for (const auto& ex : examples) {
    for (const auto& t : ex.tokens) {
      if (t != Vocabulary::kUnkToken && seen.insert(t).second) words.push_back(t);
    }
  }
  return words;
}

EmbeddingTable random_embeddings(std::vector<std::string> words, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ArgumentError("embedding dimension must be positive");
  core::Rng rng(seed);
  const std::size_t rows = words.size() + 1;
  core::Tensor vectors({rows, dim});
  for (std::size_t i = 0; i < (rows - 1) * dim; ++i) vectors[i] = rng.uniform(-0.1, 0.1);
  EmbeddingTable table{Vocabulary(std::move(words)), std::move(vectors), true};
  fill_unk_with_mean(table.vectors);
  return table;
}

std::vector<std::size_t> token_ids(const Example& ex, const Vocabulary& vocab) {
  std::vector<std::size_t> ids;
  ids.reserve(ex.tokens.size());
  for (const auto& t : ex.tokens) ids.push_back(vocab.lookup(t));
  return ids;
}

core::Tensor embed_example(const Example& ex, const EmbeddingTable& table) {
  const auto ids = token_ids(ex, table.vocab);
  core::Tensor out({ids.size(), table.dim()});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    std::copy_n(table.vectors.row(ids[r]).begin(), table.dim(), out.row(r).begin());
  }
  return out;
}

}  // namespace absa::data
