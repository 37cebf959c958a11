#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace tlab::textprep {

struct RawDocument {
  std::string id;
  std::string text;
  std::map<std::string, std::string> meta;
  // Gold sentiment in {-1, 0, +1} when the corpus carries a label column.
  std::optional<int> label;
};

struct CleanDocument {
  std::string id;
  std::vector<std::string> tokens;
  std::string joined;
  std::optional<int> label;
};

enum class Pos { kNoun, kVerb, kAdjective, kAdverb, kOther };

struct TaggedToken {
  std::string surface;
  std::string stem;
  Pos pos = Pos::kNoun;
};

// Emoji codepoint sequences (UTF-8 encoded) mapped to alias tokens.
struct EmojiTable {
  std::unordered_map<std::string, std::string> aliases;
  std::size_t max_key_bytes = 0;

  void add(std::string sequence, std::string alias);
};

// Pipeline step names, in the canonical execution order.
inline constexpr const char* kStepNames[] = {
    "normalize_case", "demojize",         "strip_noise",    "expand_contractions",
    "strip_non_alpha", "tokenize",        "normalize_repeats", "remove_stopwords"};

struct PrepConfig {
  std::unordered_set<std::string> stopwords;
  std::unordered_set<std::string> negation_whitelist;
  std::unordered_map<std::string, std::string> contractions;
  EmojiTable emoji;
  std::unordered_set<std::string> dictionary;
  std::size_t min_token_len = 2;
  std::vector<std::string> steps{std::begin(kStepNames), std::end(kStepNames)};
};

}  // namespace tlab::textprep
