#include "tlab/textprep/pipeline.h"

#include <algorithm>
#include <iterator>
#include <unordered_set>

#include "tlab/common/error.h"
#include "tlab/textprep/steps.h"

namespace tlab::textprep {
namespace {

// Position of a step name in the canonical order, or -1.
int step_index(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kStepNames); ++i) {
    if (name == kStepNames[i]) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

void validate(const PrepConfig& config) {
  int previous = -1;
  for (const std::string& step : config.steps) {
    const int index = step_index(step);
    if (index < 0) throw Error(ErrorCode::kInvalidConfig, "unknown preprocessing step '" + step + "'");
    if (index <= previous) {
      throw Error(ErrorCode::kInvalidConfig,
                  "preprocessing step '" + step + "' is out of canonical order or repeated");
    }
    previous = index;
  }
  if (config.min_token_len < 1) throw Error(ErrorCode::kInvalidConfig, "min_token_len must be >= 1");
  for (const auto& [key, value] : config.contractions) {
    if (key.find('\'') == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "contraction key without apostrophe: '" + key + "'");
    }
  }
}

CleanDocument run_pipeline(const RawDocument& doc, const PrepConfig& config) {
  validate(config);
  bool enabled[std::size(kStepNames)] = {};
  for (const std::string& step : config.steps) enabled[step_index(step)] = true;

  std::string text = doc.text;
  if (enabled[0]) text = normalize_case(text);
  if (enabled[1]) text = demojize(text, config.emoji);
  if (enabled[2]) text = strip_noise(text);
  if (enabled[3]) text = expand_contractions(text, config.contractions);
  if (enabled[4]) text = strip_non_alpha(text);
  // Tokenization always happens; the step exists so configs can name it.
  std::vector<std::string> tokens = tokenize(text);
  if (enabled[6]) {
    for (std::string& token : tokens) token = normalize_repeats(token, config.dictionary);
  }
  if (enabled[7]) tokens = remove_stopwords(tokens, config);

  CleanDocument out;
  out.id = doc.id;
  out.joined = join_tokens(tokens);
  out.tokens = std::move(tokens);
  out.label = doc.label;
  return out;
}

std::vector<CleanDocument> dedupe_and_drop_empty(std::span<const CleanDocument> corpus) {
  std::vector<CleanDocument> out;
  std::unordered_set<std::string> seen;
  for (const CleanDocument& doc : corpus) {
    if (doc.tokens.empty()) continue;
    if (!seen.insert(doc.joined).second) continue;
    out.push_back(doc);
  }
  return out;
}

}  // namespace tlab::textprep
