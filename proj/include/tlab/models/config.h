#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tlab::models {

enum class Arch { kTrabsa, kSingleDense, kThreeDense, kBilstmDense, kBilstmCnn, kNaiveBayes };
enum class EmbeddingSource { kTrainable, kExternalPooled, kExternalSequence };
// kPooled averages the token rows into one vector and feeds a length-1
// sequence onward; kSequence keeps every token row.
enum class GapMode { kSequence, kPooled };

enum class Ablation {
  kNone,
  kNoBilstmAttentionDense,
  kNoBilstmAttention,
  kNoAttention,
  kNoDense,
  kNoDropout,
  kUnidirectional,
};

std::string_view arch_name(Arch arch);
Arch parse_arch(std::string_view name);
std::string_view embedding_source_name(EmbeddingSource source);
EmbeddingSource parse_embedding_source(std::string_view name);
std::string_view gap_mode_name(GapMode mode);
GapMode parse_gap_mode(std::string_view name);
std::string_view ablation_name(Ablation ablation);
Ablation parse_ablation(std::string_view name);
inline constexpr Ablation kAllAblations[] = {
    Ablation::kNoBilstmAttentionDense, Ablation::kNoBilstmAttention, Ablation::kNoAttention,
    Ablation::kNoDense,                Ablation::kNoDropout,         Ablation::kUnidirectional,
};

struct ModelConfig {
  Arch arch = Arch::kTrabsa;
  EmbeddingSource embedding_source = EmbeddingSource::kTrainable;
  std::size_t embedding_dim = 32;
  // Rows of the trainable table; row 0 is reserved.
  std::size_t vocab_size = 0;
  std::size_t max_len = 256;
  // One entry per stacked recurrent layer; empty removes the recurrent block.
  std::vector<std::size_t> bilstm_units{16};
  std::vector<std::size_t> dense_units{32, 16, 8};
  double dropout_rate = 0.05;
  bool attention = true;
  bool bilstm_bidirectional = true;
  GapMode gap_reshape_mode = GapMode::kSequence;
  std::size_t classes = 3;
  std::uint64_t seed = 1;
  std::size_t conv_filters = 64;
  std::size_t conv_kernel = 3;
  bool zero_init_head = false;
  double nb_alpha = 1.0;
};

// Desk scale: embed 32, BiLSTM 16, dense 32/16/8.
ModelConfig desk_config(Arch arch = Arch::kTrabsa);
// Published dimensions over 768-wide external token embeddings.
ModelConfig full_scale_config(Arch arch = Arch::kTrabsa);

// Same config with the named component removed or replaced.
ModelConfig apply_ablation(ModelConfig config, Ablation ablation);

// Throws InvalidConfig.
void validate(const ModelConfig& config);

nlohmann::ordered_json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j, ModelConfig base = {});
// Fingerprint of the canonical JSON form.
std::string config_hash(const ModelConfig& config);

// Layer plan resolved from a config.
struct Blueprint {
  bool pool_before = false;  // average token rows before the recurrent block
  std::vector<std::size_t> recurrent;
  bool bidirectional = true;
  bool conv = false;
  bool attention = false;
  bool pool_after = false;  // average rows after the sequence blocks
  std::vector<std::size_t> dense;
  // Rows entering the flatten / head: max_len, or 1 when pooled.
  std::size_t head_rows = 1;
};

Blueprint blueprint(const ModelConfig& config);

// Class index order for labels -1, 0, +1. Throws UnknownLabel.
std::size_t label_to_class(int label);
int class_to_label(std::size_t index);
std::vector<double> one_hot(int label, std::size_t classes = 3);

}  // namespace tlab::models
