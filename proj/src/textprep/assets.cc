#include "tlab/common/error.h"
#include "tlab/common/io.h"
#include "tlab/textprep/pipeline.h"

namespace tlab::textprep {
namespace {

std::unordered_set<std::string> load_token_set(const std::filesystem::path& path) {
  std::unordered_set<std::string> tokens;
  for (const std::string& line : io::read_lines(path)) tokens.emplace(io::trim(line));
  return tokens;
}

std::vector<std::pair<std::string, std::string>> load_pairs(const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const std::string& line : io::read_lines(path)) {
    const auto parts = io::split(line, '\t');
    if (parts.size() != 2 || parts[0].empty()) {
      throw Error(ErrorCode::kMalformedFile, path.string() + ": expected key<TAB>value in '" + line + "'");
    }
    pairs.emplace_back(std::string(parts[0]), std::string(parts[1]));
  }
  return pairs;
}

}  // namespace

void EmojiTable::add(std::string sequence, std::string alias) {
  max_key_bytes = std::max(max_key_bytes, sequence.size());
  aliases.emplace(std::move(sequence), std::move(alias));
}

PrepConfig load_prep_config(const std::filesystem::path& assets_dir) {
  PrepConfig config;
  config.stopwords = load_token_set(assets_dir / "stopwords.txt");
  config.negation_whitelist = load_token_set(assets_dir / "negations.txt");
  config.dictionary = load_token_set(assets_dir / "dictionary.txt");
  for (auto& [key, value] : load_pairs(assets_dir / "contractions.tsv")) {
    config.contractions.emplace(std::move(key), std::move(value));
  }
  for (auto& [key, value] : load_pairs(assets_dir / "emoji.tsv")) {
    config.emoji.add(std::move(key), std::move(value));
  }
  validate(config);
  return config;
}

}  // namespace tlab::textprep
