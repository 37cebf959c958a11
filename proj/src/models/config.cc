#include "tlab/models/config.h"

#include <array>
#include <utility>

#include "tlab/common/error.h"
#include "tlab/common/hash.h"

namespace tlab::models {

namespace {

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [e, name] : table)
    if (e == value) return name;
  return "?";
}

template <typename E, std::size_t N>
E parse_of(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view name, const char* what) {
  for (const auto& [e, n] : table)
    if (n == name) return e;
  throw Error(ErrorCode::kInvalidConfig, std::string("unknown ") + what + " '" + std::string(name) + "'");
}

constexpr std::array<std::pair<Arch, std::string_view>, 6> kArchNames{{
    {Arch::kTrabsa, "trabsa"},
    {Arch::kSingleDense, "single_dense"},
    {Arch::kThreeDense, "three_dense"},
    {Arch::kBilstmDense, "bilstm_dense"},
    {Arch::kBilstmCnn, "bilstm_cnn"},
    {Arch::kNaiveBayes, "naive_bayes"},
}};

constexpr std::array<std::pair<EmbeddingSource, std::string_view>, 3> kSourceNames{{
    {EmbeddingSource::kTrainable, "trainable"},
    {EmbeddingSource::kExternalPooled, "external_pooled"},
    {EmbeddingSource::kExternalSequence, "external_sequence"},
}};

constexpr std::array<std::pair<GapMode, std::string_view>, 2> kGapNames{{
    {GapMode::kSequence, "sequence"},
    {GapMode::kPooled, "pooled"},
}};

constexpr std::array<std::pair<Ablation, std::string_view>, 7> kAblationNames{{
    {Ablation::kNone, "none"},
    {Ablation::kNoBilstmAttentionDense, "no_bilstm_attention_dense"},
    {Ablation::kNoBilstmAttention, "no_bilstm_attention"},
    {Ablation::kNoAttention, "no_attention"},
    {Ablation::kNoDense, "no_dense"},
    {Ablation::kNoDropout, "no_dropout"},
    {Ablation::kUnidirectional, "unidirectional_lstm"},
}};

}  // namespace

std::string_view arch_name(Arch arch) { return name_of(kArchNames, arch); }
Arch parse_arch(std::string_view name) { return parse_of(kArchNames, name, "arch"); }
std::string_view embedding_source_name(EmbeddingSource s) { return name_of(kSourceNames, s); }
EmbeddingSource parse_embedding_source(std::string_view name) {
  return parse_of(kSourceNames, name, "embedding source");
}
std::string_view gap_mode_name(GapMode mode) { return name_of(kGapNames, mode); }
GapMode parse_gap_mode(std::string_view name) { return parse_of(kGapNames, name, "gap_reshape_mode"); }
std::string_view ablation_name(Ablation a) { return name_of(kAblationNames, a); }
Ablation parse_ablation(std::string_view name) { return parse_of(kAblationNames, name, "ablation"); }

ModelConfig desk_config(Arch arch) {
  ModelConfig c;
  c.arch = arch;
  switch (arch) {
    case Arch::kTrabsa: break;
    case Arch::kSingleDense:
      c.bilstm_units.clear();
      c.attention = false;
      c.dense_units = {32};
      c.dropout_rate = 0.0;
      break;
    case Arch::kThreeDense:
      c.bilstm_units.clear();
      c.attention = false;
      break;
    case Arch::kBilstmDense: c.attention = false; break;
    case Arch::kBilstmCnn:
      c.attention = false;
      c.dense_units = {16, 8};
      c.conv_filters = 16;
      c.dropout_rate = 0.0;
      break;
    case Arch::kNaiveBayes:
      c.bilstm_units.clear();
      c.dense_units.clear();
      c.attention = false;
      break;
  }
  return c;
}

ModelConfig full_scale_config(Arch arch) {
  ModelConfig c = desk_config(arch);
  c.embedding_source = EmbeddingSource::kExternalSequence;
  c.embedding_dim = 768;
  c.max_len = 256;
  switch (arch) {
    case Arch::kTrabsa:
    case Arch::kBilstmDense:
      c.bilstm_units = {512};
      c.dense_units = {512, 256, 128};
      break;
    case Arch::kSingleDense: c.dense_units = {512}; break;
    case Arch::kThreeDense: c.dense_units = {512, 256, 128}; break;
    case Arch::kBilstmCnn:
      c.bilstm_units = {512};
      c.conv_filters = 64;
      c.dense_units = {128, 64};
      break;
    case Arch::kNaiveBayes: break;
  }
  return c;
}

ModelConfig apply_ablation(ModelConfig c, Ablation ablation) {
  switch (ablation) {
    case Ablation::kNone: break;
    case Ablation::kNoBilstmAttentionDense:
      c.bilstm_units.clear();
      c.attention = false;
      c.dense_units.clear();
      break;
    case Ablation::kNoBilstmAttention:
      c.bilstm_units.clear();
      c.attention = false;
      break;
    case Ablation::kNoAttention: c.attention = false; break;
    case Ablation::kNoDense: c.dense_units.clear(); break;
    case Ablation::kNoDropout: c.dropout_rate = 0.0; break;
    case Ablation::kUnidirectional: c.bilstm_bidirectional = false; break;
  }
  return c;
}

void validate(const ModelConfig& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidConfig, m); };
  if (c.classes != 3) fail("classes must be 3");
  if (!(c.dropout_rate >= 0.0 && c.dropout_rate < 1.0)) fail("dropout_rate must lie in [0, 1)");
  if (c.embedding_dim == 0) fail("embedding_dim must be >= 1");
  if (c.max_len == 0) fail("max_len must be >= 1");
  if (c.arch == Arch::kNaiveBayes) {
    if (!(c.nb_alpha > 0.0)) fail("naive bayes alpha must be > 0");
    return;
  }
  if (c.embedding_source == EmbeddingSource::kTrainable && c.vocab_size < 2) {
    fail("trainable embeddings need vocab_size >= 2");
  }
  for (std::size_t u : c.bilstm_units)
    if (u == 0) fail("bilstm_units entries must be >= 1");
  for (std::size_t u : c.dense_units)
    if (u == 0) fail("dense_units entries must be >= 1");
  if (c.arch == Arch::kBilstmDense || c.arch == Arch::kBilstmCnn) {
    if (c.bilstm_units.empty()) fail(std::string(arch_name(c.arch)) + " needs a recurrent layer");
  }
  if (c.arch == Arch::kBilstmCnn && (c.conv_filters == 0 || c.conv_kernel == 0)) {
    fail("conv_filters and conv_kernel must be >= 1");
  }
}

nlohmann::ordered_json to_json(const ModelConfig& c) {
  return {
      {"arch", arch_name(c.arch)},
      {"embedding_source", embedding_source_name(c.embedding_source)},
      {"embedding_dim", c.embedding_dim},
      {"vocab_size", c.vocab_size},
      {"max_len", c.max_len},
      {"bilstm_units", c.bilstm_units},
      {"dense_units", c.dense_units},
      {"dropout_rate", c.dropout_rate},
      {"attention", c.attention},
      {"bilstm_bidirectional", c.bilstm_bidirectional},
      {"gap_reshape_mode", gap_mode_name(c.gap_reshape_mode)},
      {"classes", c.classes},
      {"seed", c.seed},
      {"conv_filters", c.conv_filters},
      {"conv_kernel", c.conv_kernel},
      {"zero_init_head", c.zero_init_head},
      {"nb_alpha", c.nb_alpha},
  };
}

ModelConfig model_config_from_json(const nlohmann::json& j, ModelConfig c) {
  try {
    if (j.contains("arch")) {
      // switching arch starts from that arch's desk defaults
      const Arch arch = parse_arch(j.at("arch").get<std::string>());
      if (arch != c.arch) {
        ModelConfig fresh = desk_config(arch);
        fresh.embedding_source = c.embedding_source;
        fresh.embedding_dim = c.embedding_dim;
        fresh.vocab_size = c.vocab_size;
        fresh.max_len = c.max_len;
        fresh.seed = c.seed;
        c = fresh;
      }
    }
    if (j.contains("embedding_source")) c.embedding_source = parse_embedding_source(j.at("embedding_source").get<std::string>());
    if (j.contains("embedding_dim")) c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    if (j.contains("vocab_size")) c.vocab_size = j.at("vocab_size").get<std::size_t>();
    if (j.contains("max_len")) c.max_len = j.at("max_len").get<std::size_t>();
    if (j.contains("bilstm_units")) c.bilstm_units = j.at("bilstm_units").get<std::vector<std::size_t>>();
    if (j.contains("dense_units")) c.dense_units = j.at("dense_units").get<std::vector<std::size_t>>();
    if (j.contains("dropout_rate")) c.dropout_rate = j.at("dropout_rate").get<double>();
    if (j.contains("attention")) c.attention = j.at("attention").get<bool>();
    if (j.contains("bilstm_bidirectional")) c.bilstm_bidirectional = j.at("bilstm_bidirectional").get<bool>();
    if (j.contains("gap_reshape_mode")) c.gap_reshape_mode = parse_gap_mode(j.at("gap_reshape_mode").get<std::string>());
    if (j.contains("classes")) c.classes = j.at("classes").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("conv_filters")) c.conv_filters = j.at("conv_filters").get<std::size_t>();
    if (j.contains("conv_kernel")) c.conv_kernel = j.at("conv_kernel").get<std::size_t>();
    if (j.contains("zero_init_head")) c.zero_init_head = j.at("zero_init_head").get<bool>();
    if (j.contains("nb_alpha")) c.nb_alpha = j.at("nb_alpha").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("model config: ") + e.what());
  }
  return c;
}

std::string config_hash(const ModelConfig& config) { return fingerprint(to_json(config).dump()); }

Blueprint blueprint(const ModelConfig& c) {
  Blueprint b;
  b.bidirectional = c.bilstm_bidirectional;
  b.dense = c.dense_units;
  switch (c.arch) {
    case Arch::kTrabsa:
      b.pool_before = c.gap_reshape_mode == GapMode::kPooled || c.embedding_source == EmbeddingSource::kExternalPooled;
      b.recurrent = c.bilstm_units;
      b.attention = c.attention;
      break;
    case Arch::kSingleDense:
    case Arch::kThreeDense:
      b.pool_before = true;
      break;
    case Arch::kBilstmDense:
      b.recurrent = c.bilstm_units;
      b.pool_after = true;
      break;
    case Arch::kBilstmCnn:
      b.recurrent = c.bilstm_units;
      b.conv = true;
      b.pool_after = true;
      break;
    case Arch::kNaiveBayes:
      b.dense.clear();
      break;
  }
  b.head_rows = (b.pool_before || b.pool_after) ? 1 : c.max_len;
  return b;
}

std::size_t label_to_class(int label) {
  switch (label) {
    case -1: return 0;
    case 0: return 1;
    case 1: return 2;
    default: throw Error(ErrorCode::kUnknownLabel, "label " + std::to_string(label) + " not in {-1, 0, 1}");
  }
}

int class_to_label(std::size_t index) {
  if (index > 2) throw Error(ErrorCode::kUnknownLabel, "class index " + std::to_string(index) + " out of range");
  return static_cast<int>(index) - 1;
}

std::vector<double> one_hot(int label, std::size_t classes) {
  std::vector<double> v(classes, 0.0);
  v.at(label_to_class(label)) = 1.0;
  return v;
}

}  // namespace tlab::models
