#include "tlab/pipeline/run_config.h"

#include <algorithm>
#include <array>
#include <utility>

#include "tlab/common/error.h"
#include "tlab/common/io.h"
#include "tlab/explain/classifier.h"
#include "tlab/pipeline/split.h"
#include "tlab/textprep/pipeline.h"

namespace tlab::pipeline {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<Embedding, std::string_view>, 7> kEmbeddingNames{{
    {Embedding::kTrainable, "trainable"},
    {Embedding::kWord2Vec, "word2vec"},
    {Embedding::kWord2VecSum, "word2vec_sum"},
    {Embedding::kWord2VecAvg, "word2vec_avg"},
    {Embedding::kExternal, "external"},
    {Embedding::kBow, "bow"},
    {Embedding::kTfidf, "tfidf"},
}};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidConfig, "config: " + what); }

// Same JSON category, with integers accepted where floats are expected.
bool same_kind(const nlohmann::json& def, const nlohmann::json& v) {
  if (def.is_number_float()) return v.is_number();
  if (def.is_number_unsigned()) return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
  if (def.is_number_integer()) return v.is_number_integer();
  return def.type() == v.type();
}

void merge_strict(ojson& target, const nlohmann::json& user, const std::string& path) {
  if (!user.is_object()) bad(path + " must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!target.contains(it.key())) bad("unknown key '" + key + "'");
    auto& slot = target[it.key()];
    if (slot.is_object() && !slot.empty()) {
      merge_strict(slot, *it, key);
    } else if (key == "eval.grid") {
      if (!it->is_array()) bad(key + " must be an array");
      for (const auto& entry : *it) {
        if (!entry.is_object()) bad(key + " entries must be objects");
        for (auto e = entry.begin(); e != entry.end(); ++e)
          if (e.key() != "model" && e.key() != "embedding" && e.key() != "ablation")
            bad("unknown key '" + key + "[]." + e.key() + "'");
      }
      slot = *it;
    } else {
      if (!same_kind(slot, *it)) bad("key '" + key + "' has the wrong type");
      slot = *it;
    }
  }
}

ojson model_section_from(const models::ModelConfig& c) {
  ojson j = models::to_json(c);
  j.erase("embedding_source");
  j.erase("vocab_size");
  j.erase("seed");
  return j;
}

std::array<std::size_t, 2> pair_of(const ojson& j) { return j.get<std::array<std::size_t, 2>>(); }

}  // namespace

std::string_view embedding_name(Embedding e) {
  for (const auto& [k, v] : kEmbeddingNames)
    if (k == e) return v;
  return "?";
}

Embedding parse_embedding(std::string_view name) {
  for (const auto& [k, v] : kEmbeddingNames)
    if (v == name) return k;
  bad("unknown embedding '" + std::string(name) + "'");
}

std::string GridEntry::label() const {
  std::string s(models::arch_name(arch));
  if (ablation != models::Ablation::kNone) s += ":" + std::string(models::ablation_name(ablation));
  return s;
}

ojson default_run_config_json() {
  const lexlabel::ScoreConfig score;
  const featurize::Word2VecConfig w2v;
  const models::TrainConfig train;
  const models::SearchSpace space;
  const explain::LimeConfig lime;
  ojson j;
  j["seed"] = 1;
  j["paths"] = {{"corpus", "data/sample_corpus.csv"},
                {"assets", "data/assets"},
                {"lexicon", ""},
                {"external_embeddings", ""},
                {"out", "out"}};
  j["prep"] = {{"min_token_len", 2},
               {"steps", std::vector<std::string>(std::begin(textprep::kStepNames), std::end(textprep::kStepNames))}};
  j["label"] = {{"source", "lexicon"},
                {"scheme", "pattern"},
                {"neutral_band", score.neutral_band},
                {"negation_window", score.negation_window},
                {"normalization_alpha", score.normalization_alpha},
                {"negation_scalar", score.negation_scalar},
                {"valence_scale", score.valence_scale}};
  j["feature"] = {{"min_count", 1},
                  {"ratios", {0.8, 0.1, 0.1}},
                  {"stratified", true},
                  {"word2vec",
                   {{"dim", w2v.dim},
                    {"window", w2v.window},
                    {"negatives", w2v.negatives},
                    {"epochs", w2v.epochs},
                    {"lr0", w2v.lr0},
                    {"min_count", w2v.min_count}}}};
  ojson model = model_section_from(models::desk_config());
  model["embedding"] = "trainable";
  model["ablation"] = "none";
  j["model"] = model;
  j["train"] = {{"batch_size", train.batch_size},
                {"max_epochs", train.max_epochs},
                {"lr0", train.lr0},
                {"lr_decay_k", train.lr_decay_k},
                {"early_stop_patience", train.early_stop_patience}};
  j["eval"] = {{"k", 10},
               {"stratified", true},
               {"alpha", 0.05},
               {"max_epochs", 10},
               {"parallel", true},
               {"grid", ojson::array({{{"model", "trabsa"}, {"embedding", "trainable"}},
                                      {{"model", "bilstm_dense"}, {"embedding", "trainable"}},
                                      {{"model", "three_dense"}, {"embedding", "word2vec_avg"}},
                                      {{"model", "naive_bayes"}, {"embedding", "bow"}}})}};
  j["explain"] = {{"method", "shapley"},
                  {"max_tokens", 10},
                  {"docs", 5},
                  {"doc_id", ""},
                  {"mask_policy", "zero_embedding"},
                  {"lime", {{"n_samples", lime.n_samples}, {"kernel_width", lime.kernel_width}, {"ridge_lambda", lime.ridge_lambda}}},
                  {"top_k", 20}};
  j["tune"] = {{"trials", space.trials},
               {"max_epochs", 5},
               {"space",
                {{"bilstm_units", {space.bilstm_units.lo, space.bilstm_units.hi}},
                 {"dense1", {space.dense1.lo, space.dense1.hi}},
                 {"dense2", {space.dense2.lo, space.dense2.hi}},
                 {"dense3", {space.dense3.lo, space.dense3.hi}},
                 {"dropout", {space.dropout_lo, space.dropout_hi}},
                 {"lr", {space.lr_lo, space.lr_hi}}}}};
  return j;
}

RunConfig parse_run_config(const nlohmann::json& user) {
  ojson j = default_run_config_json();
  // a different arch brings its own desk defaults before user keys apply
  if (user.is_object() && user.contains("model") && user["model"].is_object() && user["model"].contains("arch") &&
      user["model"]["arch"].is_string()) {
    const auto arch = models::parse_arch(user["model"]["arch"].get<std::string>());
    ojson model = model_section_from(models::desk_config(arch));
    model["embedding"] = arch == models::Arch::kNaiveBayes ? "bow" : "trainable";
    model["ablation"] = "none";
    j["model"] = model;
  }
  merge_strict(j, user, "");

  RunConfig c;
  try {
    c.seed = j["seed"].get<std::uint64_t>();
    const auto& p = j["paths"];
    c.paths.corpus = p["corpus"];
    c.paths.assets = p["assets"];
    c.paths.lexicon = p["lexicon"];
    if (c.paths.lexicon.empty()) c.paths.lexicon = (std::filesystem::path(c.paths.assets) / "lexicon.tsv").string();
    c.paths.external_embeddings = p["external_embeddings"];
    c.paths.out = p["out"];

    c.prep.min_token_len = j["prep"]["min_token_len"];
    c.prep.steps = j["prep"]["steps"].get<std::vector<std::string>>();

    const auto& l = j["label"];
    c.label.source = l["source"];
    if (c.label.source != "lexicon" && c.label.source != "gold") bad("label.source must be 'lexicon' or 'gold'");
    c.label.score.scheme = lexlabel::parse_scheme(l["scheme"].get<std::string>());
    c.label.score.neutral_band = l["neutral_band"];
    c.label.score.negation_window = l["negation_window"];
    c.label.score.normalization_alpha = l["normalization_alpha"];
    c.label.score.negation_scalar = l["negation_scalar"];
    c.label.score.valence_scale = l["valence_scale"];
    if (c.label.score.neutral_band < 0 || c.label.score.neutral_band >= 1) bad("label.neutral_band must be in [0, 1)");
    if (!(c.label.score.normalization_alpha > 0)) bad("label.normalization_alpha must be positive");

    const auto& f = j["feature"];
    c.feature.min_count = f["min_count"];
    c.feature.ratios = f["ratios"].get<std::array<double, 3>>();
    validate_ratios(c.feature.ratios);
    c.feature.stratified = f["stratified"];
    const auto& w = f["word2vec"];
    c.feature.word2vec.dim = w["dim"];
    c.feature.word2vec.window = w["window"];
    c.feature.word2vec.negatives = w["negatives"];
    c.feature.word2vec.epochs = w["epochs"];
    c.feature.word2vec.lr0 = w["lr0"];
    c.feature.word2vec.min_count = w["min_count"];
    c.feature.word2vec.seed = derive_seed(c.seed, kWord2VecStream);
    if (c.feature.min_count == 0) bad("feature.min_count must be at least 1");

    ojson model = j["model"];
    c.model.embedding = parse_embedding(model["embedding"].get<std::string>());
    c.model.ablation = models::parse_ablation(model["ablation"].get<std::string>());
    model.erase("embedding");
    model.erase("ablation");
    c.model.config = models::model_config_from_json(model, models::desk_config(models::parse_arch(model["arch"].get<std::string>())));
    c.model.config.seed = derive_seed(c.seed, kModelInitStream);

    const auto& t = j["train"];
    c.train.batch_size = t["batch_size"];
    c.train.max_epochs = t["max_epochs"];
    c.train.lr0 = t["lr0"];
    c.train.lr_decay_k = t["lr_decay_k"];
    c.train.early_stop_patience = t["early_stop_patience"];
    c.train.shuffle_seed = derive_seed(c.seed, kShuffleStream);
    models::validate(c.train);

    const auto& e = j["eval"];
    c.eval.k = e["k"];
    c.eval.stratified = e["stratified"];
    c.eval.alpha = e["alpha"];
    c.eval.max_epochs = e["max_epochs"];
    c.eval.parallel = e["parallel"];
    if (c.eval.k < 2) bad("eval.k must be at least 2");
    if (c.eval.max_epochs == 0) bad("eval.max_epochs must be positive");
    for (const auto& g : e["grid"]) {
      if (!g.contains("model") || !g.contains("embedding")) bad("eval.grid entries need model and embedding");
      GridEntry entry;
      entry.arch = models::parse_arch(g["model"].get<std::string>());
      entry.embedding = parse_embedding(g["embedding"].get<std::string>());
      if (g.contains("ablation")) entry.ablation = models::parse_ablation(g["ablation"].get<std::string>());
      c.eval.grid.push_back(entry);
    }

    const auto& x = j["explain"];
    c.explain.method = x["method"];
    if (c.explain.method != "shapley" && c.explain.method != "lime") bad("explain.method must be 'shapley' or 'lime'");
    c.explain.max_tokens = x["max_tokens"];
    if (c.explain.max_tokens < 1 || c.explain.max_tokens > 12) bad("explain.max_tokens must be in 1..12");
    c.explain.docs = x["docs"];
    c.explain.doc_id = x["doc_id"];
    c.explain.mask_policy = x["mask_policy"];
    explain::parse_mask_policy(c.explain.mask_policy);
    c.explain.lime.n_samples = x["lime"]["n_samples"];
    c.explain.lime.kernel_width = x["lime"]["kernel_width"];
    c.explain.lime.ridge_lambda = x["lime"]["ridge_lambda"];
    c.explain.lime.seed = derive_seed(c.seed, kLimeStream);
    c.explain.top_k = x["top_k"];

    const auto& u = j["tune"];
    const auto& s = u["space"];
    c.tune.space.trials = u["trials"];
    c.tune.max_epochs = u["max_epochs"];
    const auto b = pair_of(s["bilstm_units"]), d1 = pair_of(s["dense1"]), d2 = pair_of(s["dense2"]),
               d3 = pair_of(s["dense3"]);
    c.tune.space.bilstm_units = {b[0], b[1]};
    c.tune.space.dense1 = {d1[0], d1[1]};
    c.tune.space.dense2 = {d2[0], d2[1]};
    c.tune.space.dense3 = {d3[0], d3[1]};
    c.tune.space.dropout_lo = s["dropout"][0];
    c.tune.space.dropout_hi = s["dropout"][1];
    c.tune.space.lr_lo = s["lr"][0];
    c.tune.space.lr_hi = s["lr"][1];
    models::validate(c.tune.space);
  } catch (const nlohmann::json::exception& ex) {
    bad(ex.what());
  }

  textprep::PrepConfig probe;
  probe.min_token_len = c.prep.min_token_len;
  probe.steps = c.prep.steps;
  textprep::validate(probe);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, "config " + path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

void apply_override(nlohmann::json& user, std::string_view dotted_key, std::string_view value) {
  if (!user.is_object()) user = nlohmann::json::object();
  nlohmann::json* node = &user;
  const auto parts = io::split(dotted_key, '.');
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    auto& next = (*node)[std::string(parts[i])];
    if (!next.is_object()) next = nlohmann::json::object();
    node = &next;
  }
  nlohmann::json v = nlohmann::json::parse(value, nullptr, false);
  if (v.is_discarded()) v = std::string(value);
  (*node)[std::string(parts.back())] = v;
}

ojson RunConfig::section(std::string_view name) const {
  const ojson all = to_json();
  if (!all.contains(name)) throw Error(ErrorCode::kInvalidConfig, "no config section " + std::string(name));
  return all[std::string(name)];
}

ojson RunConfig::to_json() const {
  ojson j;
  j["seed"] = seed;
  j["paths"] = {{"corpus", paths.corpus},
                {"assets", paths.assets},
                {"lexicon", paths.lexicon},
                {"external_embeddings", paths.external_embeddings},
                {"out", paths.out}};
  j["prep"] = {{"min_token_len", prep.min_token_len}, {"steps", prep.steps}};
  j["label"] = {{"source", label.source},
                {"scheme", lexlabel::scheme_name(label.score.scheme)},
                {"neutral_band", label.score.neutral_band},
                {"negation_window", label.score.negation_window},
                {"normalization_alpha", label.score.normalization_alpha},
                {"negation_scalar", label.score.negation_scalar},
                {"valence_scale", label.score.valence_scale}};
  const auto& w = feature.word2vec;
  j["feature"] = {{"min_count", feature.min_count},
                  {"ratios", feature.ratios},
                  {"stratified", feature.stratified},
                  {"word2vec",
                   {{"dim", w.dim},
                    {"window", w.window},
                    {"negatives", w.negatives},
                    {"epochs", w.epochs},
                    {"lr0", w.lr0},
                    {"min_count", w.min_count}}}};
  ojson m = model_section_from(model.config);
  m["embedding"] = embedding_name(model.embedding);
  m["ablation"] = models::ablation_name(model.ablation);
  j["model"] = m;
  j["train"] = {{"batch_size", train.batch_size},
                {"max_epochs", train.max_epochs},
                {"lr0", train.lr0},
                {"lr_decay_k", train.lr_decay_k},
                {"early_stop_patience", train.early_stop_patience}};
  ojson grid = ojson::array();
  for (const auto& g : eval.grid)
    grid.push_back({{"model", models::arch_name(g.arch)},
                    {"embedding", embedding_name(g.embedding)},
                    {"ablation", models::ablation_name(g.ablation)}});
  j["eval"] = {{"k", eval.k},
               {"stratified", eval.stratified},
               {"alpha", eval.alpha},
               {"max_epochs", eval.max_epochs},
               {"parallel", eval.parallel},
               {"grid", grid}};
  j["explain"] = {{"method", explain.method},
                  {"max_tokens", explain.max_tokens},
                  {"docs", explain.docs},
                  {"doc_id", explain.doc_id},
                  {"mask_policy", explain.mask_policy},
                  {"lime",
                   {{"n_samples", explain.lime.n_samples},
                    {"kernel_width", explain.lime.kernel_width},
                    {"ridge_lambda", explain.lime.ridge_lambda}}},
                  {"top_k", explain.top_k}};
  const auto& s = tune.space;
  j["tune"] = {{"trials", s.trials},
               {"max_epochs", tune.max_epochs},
               {"space",
                {{"bilstm_units", {s.bilstm_units.lo, s.bilstm_units.hi}},
                 {"dense1", {s.dense1.lo, s.dense1.hi}},
                 {"dense2", {s.dense2.lo, s.dense2.hi}},
                 {"dense3", {s.dense3.lo, s.dense3.hi}},
                 {"dropout", {s.dropout_lo, s.dropout_hi}},
                 {"lr", {s.lr_lo, s.lr_hi}}}}};
  return j;
}

}  // namespace tlab::pipeline
