#include "absa/model/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "absa/core/error.hpp"

namespace absa::model {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "absa-gcn-checkpoint";
constexpr int kVersion = 1;

json hp_to_json(const HyperParams& hp) {
  return json{{"hidden", hp.hidden},
              {"layers", hp.layers},
              {"alpha", hp.alpha},
              {"beta", hp.beta},
              {"include_self_loop", hp.include_self_loop},
              {"gate_on", hp.gate_on},
              {"div_on", hp.div_on},
              {"con_on", hp.con_on},
              {"gatediv_baseline", hp.gatediv_baseline},
              {"normalize_div", hp.normalize_div}};
}

HyperParams hp_from_json(const json& j) {
  HyperParams hp;
  hp.hidden = j.at("hidden").get<std::size_t>();
  hp.layers = j.at("layers").get<std::size_t>();
  hp.alpha = j.at("alpha").get<double>();
  hp.beta = j.at("beta").get<double>();
  hp.include_self_loop = j.at("include_self_loop").get<bool>();
  hp.gate_on = j.at("gate_on").get<bool>();
  hp.div_on = j.at("div_on").get<bool>();
  hp.con_on = j.at("con_on").get<bool>();
  hp.gatediv_baseline = j.at("gatediv_baseline").get<bool>();
  hp.normalize_div = j.at("normalize_div").get<bool>();
  return hp;
}

}  // namespace

std::string checkpoint_json(const ModelState& state) {
  json params = json::array();
  for (const Parameter* p : state.parameters()) {
    params.push_back({{"name", p->name}, {"shape", p->value.shape()}, {"values", p->value.values()}});
  }
  json doc{{"format", kFormat},
           {"version", kVersion},
           {"hyperparams", hp_to_json(state.hp)},
           {"train_embeddings", state.train_embeddings},
           {"vocabulary", state.vocab.words()},
           {"parameters", std::move(params)}};
  return doc.dump() + "\n";
}

ModelState checkpoint_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != kFormat) throw CheckpointError("not an absa-gcn checkpoint");
    if (doc.at("version").get<int>() != kVersion) throw CheckpointError("unsupported checkpoint version");
    ModelState s;
    s.hp = hp_from_json(doc.at("hyperparams"));
    s.hp.validate();
    s.train_embeddings = doc.at("train_embeddings").get<bool>();
    s.vocab = data::Vocabulary(doc.at("vocabulary").get<std::vector<std::string>>());
    s.gcn_weight.resize(s.hp.layers);
    s.gcn_bias.resize(s.hp.layers);
    s.gate_weight.resize(s.hp.layers);
    s.gate_bias.resize(s.hp.layers);

    const json& params = doc.at("parameters");
    auto slots = s.parameters();
    if (params.size() != slots.size()) {
      throw CheckpointError("checkpoint has " + std::to_string(params.size()) + " tensors, expected " +
                            std::to_string(slots.size()));
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const json& pj = params[k];
      core::Tensor value(pj.at("shape").get<core::Shape>(), pj.at("values").get<std::vector<double>>());
      *slots[k] = Parameter(pj.at("name").get<std::string>(), std::move(value));
    }
    s.check_shapes();
    return s;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("inconsistent checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const ModelState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
  out << checkpoint_json(state);
  if (!out) throw CheckpointError("failed writing checkpoint " + path.string());
}

ModelState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

}  // namespace absa::model
