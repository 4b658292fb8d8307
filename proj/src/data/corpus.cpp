#include "absa/data/corpus.hpp"

#include <fstream>
#include <json.hpp>

#include "absa/core/error.hpp"

namespace absa::data {
namespace {

using nlohmann::json;

std::size_t read_index(const json& obj, const char* key) {
  if (!obj.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("field '") + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < 0) throw std::invalid_argument(std::string("field '") + key + "' must be non-negative");
  return static_cast<std::size_t>(x);
}

Example parse_record(const std::string& line) {
  const json obj = json::parse(line);
  if (!obj.is_object()) throw std::invalid_argument("record is not a JSON object");
  Example ex;
  for (const char* key : {"tokens", "heads", "label"}) {
    if (!obj.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  const json& tokens = obj.at("tokens");
  if (!tokens.is_array()) throw std::invalid_argument("field 'tokens' must be an array");
  for (const auto& t : tokens) {
    if (!t.is_string()) throw std::invalid_argument("tokens must be strings");
    ex.tokens.push_back(t.get<std::string>());
  }
  const json& heads = obj.at("heads");
  if (!heads.is_array()) throw std::invalid_argument("field 'heads' must be an array");
  for (const auto& h : heads) {
    if (!h.is_number_integer()) throw std::invalid_argument("heads must be integers");
    ex.heads.push_back(h.get<int>());
  }
  ex.aspect_from = read_index(obj, "aspect_from");
  ex.aspect_to = read_index(obj, "aspect_to");
  const json& label = obj.at("label");
  if (!label.is_string()) throw std::invalid_argument("field 'label' must be a string");
  const auto pol = parse_polarity(label.get<std::string>());
  if (!pol) throw std::invalid_argument("bad label '" + label.get<std::string>() + "'");
  ex.label = *pol;
  if (auto err = validate(ex)) throw std::invalid_argument(*err);
  return ex;
}

bool is_blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

}  // namespace

std::vector<Example> parse_corpus(std::istream& in, const std::string& source) {
  std::vector<Example> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    try {
      out.push_back(parse_record(line));
    } catch (const json::exception& e) {
      throw LoadError(source, lineno, std::string("malformed JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw LoadError(source, lineno, e.what());
    }
  }
  return out;
}

std::vector<Example> parse_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open corpus file");
  return parse_corpus(in, path.string());
}

std::string to_json_line(const Example& ex) {
  json obj;
  obj["tokens"] = ex.tokens;
  obj["heads"] = ex.heads;
  obj["aspect_from"] = ex.aspect_from;
  obj["aspect_to"] = ex.aspect_to;
  obj["label"] = std::string(to_string(ex.label));
  return obj.dump();
}

void write_corpus(const std::filesystem::path& path, const std::vector<Example>& examples) {
  std::ofstream out(path);
  if (!out) throw LoadError(path.string(), 0, "cannot open for writing");
  for (const auto& ex : examples) out << to_json_line(ex) << '\n';
}

std::array<std::size_t, kNumClasses> class_counts(const std::vector<Example>& examples) {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& ex : examples) ++counts[class_index(ex.label)];
  return counts;
}

}  // namespace absa::data
