#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tlab/textprep/types.h"

namespace tlab::textprep {

std::string_view pos_name(Pos pos);
// Accepts the full names and the one-letter forms n, v, a, r, o.
Pos parse_pos(std::string_view name);

// Lexicon lookup with suffix-rule fallback; unknown words default to noun.
class Tagger {
 public:
  Tagger() = default;
  explicit Tagger(std::unordered_map<std::string, Pos> lexicon) : lexicon_(std::move(lexicon)) {}

  static Tagger from_file(const std::filesystem::path& path);

  Pos tag(std::string_view token) const;

 private:
  std::unordered_map<std::string, Pos> lexicon_;
};

std::vector<TaggedToken> stem_and_tag(std::span<const std::string> tokens, const Tagger& tagger);

}  // namespace tlab::textprep
