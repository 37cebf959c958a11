#include "tlab/textprep/tagger.h"

#include "tlab/common/error.h"
#include "tlab/common/io.h"
#include "tlab/textprep/stemmer.h"

namespace tlab::textprep {
namespace {

struct SuffixRule {
  std::string_view suffix;
  std::size_t min_length;
  Pos pos;
};

// Checked in order; the first rule whose suffix matches a long enough
// token wins.
constexpr SuffixRule kSuffixRules[] = {
    {"ly", 4, Pos::kAdverb},       {"ward", 5, Pos::kAdverb},
    {"wise", 5, Pos::kAdverb},     {"ing", 5, Pos::kVerb},
    {"ed", 4, Pos::kVerb},         {"ize", 5, Pos::kVerb},
    {"ise", 5, Pos::kVerb},        {"ify", 5, Pos::kVerb},
    {"ate", 5, Pos::kVerb},        {"ous", 5, Pos::kAdjective},
    {"ful", 5, Pos::kAdjective},   {"less", 6, Pos::kAdjective},
    {"able", 6, Pos::kAdjective},  {"ible", 6, Pos::kAdjective},
    {"ive", 5, Pos::kAdjective},   {"ish", 5, Pos::kAdjective},
    {"ic", 5, Pos::kAdjective},    {"al", 5, Pos::kAdjective},
    {"est", 6, Pos::kAdjective},   {"tion", 6, Pos::kNoun},
    {"sion", 6, Pos::kNoun},       {"ness", 6, Pos::kNoun},
    {"ment", 6, Pos::kNoun},       {"ity", 5, Pos::kNoun},
    {"ism", 5, Pos::kNoun},        {"ist", 5, Pos::kNoun},
};

}  // namespace

std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "noun";
    case Pos::kVerb: return "verb";
    case Pos::kAdjective: return "adjective";
    case Pos::kAdverb: return "adverb";
    case Pos::kOther: return "other";
  }
  return "other";
}

Pos parse_pos(std::string_view name) {
  if (name == "noun" || name == "n") return Pos::kNoun;
  if (name == "verb" || name == "v") return Pos::kVerb;
  if (name == "adjective" || name == "a" || name == "s") return Pos::kAdjective;
  if (name == "adverb" || name == "r") return Pos::kAdverb;
  if (name == "other" || name == "o") return Pos::kOther;
  throw Error(ErrorCode::kMalformedFile, "unknown POS tag '" + std::string(name) + "'");
}

Tagger Tagger::from_file(const std::filesystem::path& path) {
  std::unordered_map<std::string, Pos> lexicon;
  for (const std::string& line : io::read_lines(path)) {
    const auto parts = io::split(line, '\t');
    if (parts.size() != 2) {
      throw Error(ErrorCode::kMalformedFile, path.string() + ": expected token<TAB>tag");
    }
    lexicon.emplace(std::string(parts[0]), parse_pos(parts[1]));
  }
  return Tagger(std::move(lexicon));
}

Pos Tagger::tag(std::string_view token) const {
  if (auto it = lexicon_.find(std::string(token)); it != lexicon_.end()) return it->second;
  if (token.find('_') != std::string_view::npos) return Pos::kOther;
  for (const SuffixRule& rule : kSuffixRules) {
    if (token.size() >= rule.min_length && token.ends_with(rule.suffix)) return rule.pos;
  }
  return Pos::kNoun;
}

std::vector<TaggedToken> stem_and_tag(std::span<const std::string> tokens, const Tagger& tagger) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const std::string& token : tokens) {
    std::string stem = porter_stem(token);
    if (stem.empty()) stem = token;
    out.push_back({token, std::move(stem), tagger.tag(token)});
  }
  return out;
}

}  // namespace tlab::textprep
