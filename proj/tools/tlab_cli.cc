// tlab: runs the sentiment pipeline stage by stage.
#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tlab/common/io.h"
#include "tlab/pipeline/run_config.h"
#include "tlab/pipeline/stages.h"

namespace {

using tlab::pipeline::Stage;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> flags;
};

void print_error(const std::string& stage, const std::string& code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"stage", stage}, {"code", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

tlab::pipeline::RunConfig build_config(const Overrides& o) {
  nlohmann::json user = nlohmann::json::object();
  if (!o.config.empty()) {
    try {
      user = nlohmann::json::parse(tlab::io::read_file(o.config));
    } catch (const nlohmann::json::parse_error& e) {
      throw tlab::Error(tlab::ErrorCode::kInvalidConfig, o.config + ": " + e.what());
    }
  }
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw tlab::Error(tlab::ErrorCode::kInvalidConfig, "--set expects key=value, got '" + s + "'");
    tlab::pipeline::apply_override(user, s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [k, v] : o.flags) tlab::pipeline::apply_override(user, k, v);
  if (o.seed) tlab::pipeline::apply_override(user, "seed", std::to_string(*o.seed));
  if (!o.out.empty()) user["paths"]["out"] = o.out;
  return tlab::pipeline::parse_run_config(user);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tlab: tweet sentiment pipeline (prep, label, featurize, train, tune, eval, benchmark, explain, report)"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config, "JSON run config; missing keys take their defaults");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--out", o.out, "artifact root directory");
  app.add_option("--set", o.sets, "override any config key, e.g. --set train.max_epochs=5")->take_all();
  app.fallthrough();

  std::vector<std::pair<Stage, CLI::App*>> stage_cmds;
  auto add_stage = [&](Stage s, const std::string& help) {
    auto* cmd = app.add_subcommand(std::string(tlab::pipeline::stage_name(s)), help);
    stage_cmds.emplace_back(s, cmd);
    return cmd;
  };
  // flag values are bound here and turned into dotted overrides after parsing
  std::optional<std::size_t> trials, max_tokens, docs, epochs, k;
  std::string method, doc, mask_policy, model, embedding, ablation;

  add_stage(Stage::kPrep, "clean and tokenize the corpus");
  add_stage(Stage::kLabel, "score documents against the polarity lexicon");
  add_stage(Stage::kFeaturize, "split, build the vocabulary, word2vec, BoW and TF-IDF");
  auto* train = add_stage(Stage::kTrain, "train the configured model");
  train->add_option("--model", model, "architecture");
  train->add_option("--embedding", embedding, "embedding kind");
  train->add_option("--ablation", ablation, "block to remove");
  train->add_option("--epochs", epochs, "max epochs");
  auto* tune = add_stage(Stage::kTune, "random search over the model space");
  tune->add_option("--trials", trials, "number of trials");
  add_stage(Stage::kEval, "test-split metrics for the trained model");
  auto* bench = add_stage(Stage::kBenchmark, "k-fold cross-validation over the model grid");
  bench->add_option("--k", k, "folds");
  auto* expl = add_stage(Stage::kExplain, "token attributions for test documents");
  expl->add_option("--method", method, "shapley or lime");
  expl->add_option("--max-tokens", max_tokens, "exact Shapley token limit");
  expl->add_option("--doc", doc, "document id to explain");
  expl->add_option("--docs", docs, "number of test documents when no --doc is given");
  expl->add_option("--mask-policy", mask_policy, "removal or zero_embedding");
  add_stage(Stage::kReport, "HTML report from train, eval, benchmark and explain artifacts");

  auto* run = app.add_subcommand("run", "run prep through report in order");
  bool with_tune = false, no_benchmark = false;
  run->add_flag("--with-tune", with_tune, "also run tune");
  run->add_flag("--no-benchmark", no_benchmark, "skip benchmark");
  auto* show = app.add_subcommand("config", "print the resolved config");

  CLI11_PARSE(app, argc, argv);

  auto flag = [&](const char* key, const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::string>) {
      if (!v.empty()) o.flags.emplace_back(key, nlohmann::json(v).dump());
    } else {
      if (v) o.flags.emplace_back(key, std::to_string(*v));
    }
  };
  flag("model.arch", model);
  flag("model.embedding", embedding);
  flag("model.ablation", ablation);
  flag("train.max_epochs", epochs);
  flag("tune.trials", trials);
  flag("eval.k", k);
  flag("explain.method", method);
  flag("explain.max_tokens", max_tokens);
  flag("explain.doc_id", doc);
  flag("explain.docs", docs);
  flag("explain.mask_policy", mask_policy);

  std::vector<Stage> todo;
  for (const auto& [s, cmd] : stage_cmds)
    if (cmd->parsed()) todo.push_back(s);
  if (run->parsed()) {
    todo = {Stage::kPrep, Stage::kLabel, Stage::kFeaturize, Stage::kTrain};
    if (with_tune) todo.push_back(Stage::kTune);
    todo.push_back(Stage::kEval);
    if (!no_benchmark) todo.push_back(Stage::kBenchmark);
    todo.push_back(Stage::kExplain);
    todo.push_back(Stage::kReport);
  }

  tlab::pipeline::RunConfig cfg;
  try {
    cfg = build_config(o);
  } catch (const tlab::Error& e) {
    print_error("config", std::string(e.code_name()), e.message());
    return 1;
  }
  if (show->parsed()) {
    std::cout << cfg.to_json().dump(2) << "\n";
    return 0;
  }
  for (Stage s : todo) {
    try {
      tlab::pipeline::run_stage(cfg, s, std::cout);
    } catch (const tlab::pipeline::StageError& e) {
      print_error(e.stage(), std::string(e.code_name()), e.message());
      return 1;
    } catch (const std::exception& e) {
      print_error(std::string(tlab::pipeline::stage_name(s)), "Internal", e.what());
      return 1;
    }
  }
  return 0;
}
