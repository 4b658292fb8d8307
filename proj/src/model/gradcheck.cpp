#include "absa/model/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "absa/core/random.hpp"
#include "absa/model/forward.hpp"

namespace absa::model {

data::Example random_example(std::size_t tokens, std::uint64_t seed) {
  core::Rng rng(seed);
  data::Example ex;
  // Random recursive tree over a shuffled labelling.
  std::vector<std::size_t> order(tokens);
  for (std::size_t i = 0; i < tokens; ++i) order[i] = i;
  rng.shuffle(order);
  ex.heads.assign(tokens, -1);
  for (std::size_t k = 1; k < tokens; ++k) ex.heads[order[k]] = static_cast<int>(order[rng.index(k)]);
  for (std::size_t i = 0; i < tokens; ++i) ex.tokens.push_back("w" + std::to_string(i));
  const std::size_t span = tokens > 2 ? 1 + rng.index(2) : 1;
  ex.aspect_from = rng.index(tokens - span + 1);
  ex.aspect_to = ex.aspect_from + span;
  ex.label = data::kAllPolarities[rng.index(data::kNumClasses)];
  return ex;
}

namespace {

double loss_only(const PreparedExample& p, ModelState& state, const HyperParams& hp) {
  core::Tape tape;
  return forward(tape, p, state, hp).total.value().item();
}

}  // namespace

GradCheckReport check_gradients(const data::Example& ex, ModelState& state, const HyperParams& hp, double step,
                                double tolerance, const std::optional<std::string>& corrupt_parameter) {
  const PreparedExample p = prepare(ex, state.vocab, hp.include_self_loop);
  state.zero_grad();
  GradCheckReport report;
  {
    core::Tape tape;
    ForwardGraph g = forward(tape, p, state, hp);
    report.loss = g.total.value().item();
    tape.backward(g.total);
  }

  for (Parameter* param : state.parameters()) {
    core::Tensor analytic = param->grad;
    if (corrupt_parameter && *corrupt_parameter == param->name) {
      for (auto& v : analytic.data()) v *= 1.5;
    }
    ParameterCheck pc;
    pc.name = param->name;
    pc.size = param->value.size();
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < param->value.size(); ++i) {
      const double orig = param->value[i];
      param->value[i] = orig + step;
      const double up = loss_only(p, state, hp);
      param->value[i] = orig - step;
      const double down = loss_only(p, state, hp);
      param->value[i] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double err = std::abs(analytic[i] - numeric);
      if (err > pc.max_abs_error) {
        pc.max_abs_error = err;
        pc.worst_index = i;
      }
      diff2 += err * err;
      a2 += analytic[i] * analytic[i];
      n2 += numeric * numeric;
    }
    const double denom = std::max({std::sqrt(a2), std::sqrt(n2), 1e-12});
    pc.rel_error = std::sqrt(diff2) / denom;
    if (pc.rel_error >= report.max_rel_error) {
      report.max_rel_error = pc.rel_error;
      report.worst_parameter = pc.name;
    }
    report.parameters.push_back(std::move(pc));
  }
  report.passed = report.max_rel_error < tolerance;
  state.zero_grad();
  return report;
}

GradCheckReport run_gradcheck(const GradCheckConfig& cfg) {
  const data::Example ex = random_example(cfg.tokens, cfg.seed);
  data::EmbeddingTable table = data::random_embeddings(ex.tokens, cfg.embed_dim, cfg.seed + 1);
  ModelState state = make_model(std::move(table), cfg.hp, cfg.seed + 2, cfg.init_range);
  core::Rng rng(cfg.seed + 3);
  for (Parameter* p : state.parameters()) {
    for (auto& v : p->value.data()) v = rng.uniform(-cfg.init_range, cfg.init_range);
  }
  return check_gradients(ex, state, cfg.hp, cfg.step, cfg.tolerance, cfg.corrupt_parameter);
}

std::string format_report(const GradCheckReport& report) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific;
  out << "gradcheck loss=" << report.loss << "\n";
  for (const auto& pc : report.parameters) {
    out << "  " << pc.name << " (" << pc.size << "): rel_err=" << pc.rel_error << " max_abs_err=" << pc.max_abs_error
        << "\n";
  }
  out << "worst: " << report.worst_parameter << " rel_err=" << report.max_rel_error << "\n";
  out << (report.passed ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace absa::model
