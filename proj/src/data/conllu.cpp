#include "absa/data/conllu.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "absa/core/error.hpp"

namespace absa::data {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    cols.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cols;
}

bool parse_int(const std::string& s, long& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::vector<ParsedSentence> read_conllu(std::istream& in, const std::string& source) {
  std::vector<ParsedSentence> out;
  ParsedSentence cur;
  std::string line;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (!cur.forms.empty()) out.push_back(std::move(cur));
    cur = {};
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 10) {
      throw LoadError(source, lineno, "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string::npos) continue;
    long id = 0, head = 0;
    if (!parse_int(cols[0], id) || id < 1) throw LoadError(source, lineno, "bad ID '" + cols[0] + "'");
    if (static_cast<std::size_t>(id) != cur.forms.size() + 1) {
      throw LoadError(source, lineno, "token IDs must be consecutive from 1");
    }
    if (!parse_int(cols[6], head) || head < 0) throw LoadError(source, lineno, "bad HEAD '" + cols[6] + "'");
    cur.forms.push_back(cols[1]);
    cur.heads.push_back(static_cast<int>(head) - 1);
  }
  flush();
  return out;
}

std::vector<ParsedSentence> read_conllu(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open CoNLL-U file");
  return read_conllu(in, path.string());
}

std::vector<AspectAnnotation> read_aspect_sidecar(const std::filesystem::path& path) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open aspect sidecar");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw LoadError(path.string(), 0, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) throw LoadError(path.string(), 0, "sidecar must be a JSON array");
  std::vector<AspectAnnotation> out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const json& a = doc[k];
    const std::string where = "entry " + std::to_string(k);
    try {
      AspectAnnotation ann;
      ann.sentence_index = a.at("sentence_index").get<std::size_t>();
      ann.from = a.at("from").get<std::size_t>();
      ann.to = a.at("to").get<std::size_t>();
      const auto pol = parse_polarity(a.at("label").get<std::string>());
      if (!pol) throw LoadError(path.string(), 0, where + ": bad label");
      ann.label = *pol;
      out.push_back(ann);
    } catch (const json::exception& e) {
      throw LoadError(path.string(), 0, where + ": " + e.what());
    }
  }
  return out;
}

std::vector<Example> convert_conllu(const std::vector<ParsedSentence>& sentences,
                                    const std::vector<AspectAnnotation>& aspects) {
  std::vector<Example> out;
  for (std::size_t k = 0; k < aspects.size(); ++k) {
    const auto& a = aspects[k];
    if (a.sentence_index >= sentences.size()) {
      throw LoadError("<aspects>", 0, "entry " + std::to_string(k) + ": sentence_index out of range");
    }
    const auto& s = sentences[a.sentence_index];
    Example ex{s.forms, s.heads, a.from, a.to, a.label};
    if (auto err = validate(ex)) throw LoadError("<aspects>", 0, "entry " + std::to_string(k) + ": " + *err);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace absa::data
