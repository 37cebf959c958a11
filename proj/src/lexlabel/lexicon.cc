#include "tlab/lexlabel/lexicon.h"

#include <charconv>
#include <map>

#include "tlab/common/error.h"
#include "tlab/common/io.h"
#include "tlab/textprep/stemmer.h"

namespace tlab::lexlabel {
namespace {

double parse_real(std::string_view text, const std::string& context) {
  double value = 0.0;
  const auto trimmed = io::trim(text);
  auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  if (ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
    throw Error(ErrorCode::kMalformedFile, context + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string synset_key(const std::string& stem, textprep::Pos pos) {
  return stem + '#' + std::string(textprep::pos_name(pos).substr(0, 1));
}

void PolarityLexicon::add_entry(const std::string& token, LexiconEntry entry) {
  if (std::abs(entry.polarity) > 1.0 || entry.pos_score < 0.0 || entry.neg_score < 0.0 ||
      entry.pos_score + entry.neg_score > 1.0 + 1e-12) {
    throw Error(ErrorCode::kMalformedFile, "lexicon entry out of range for '" + token + "'");
  }
  entries.insert_or_assign(token, entry);
}

void PolarityLexicon::index_synsets(const textprep::Tagger& tagger) {
  std::map<std::string, std::pair<LexiconEntry, int>> sums;
  for (const auto& [token, entry] : entries) {
    std::string word = token;
    textprep::Pos pos;
    if (const auto hash = token.find('#'); hash != std::string::npos) {
      word = token.substr(0, hash);
      pos = textprep::parse_pos(token.substr(hash + 1));
    } else {
      pos = tagger.tag(token);
    }
    auto& [acc, count] = sums[synset_key(textprep::porter_stem(word), pos)];
    acc.polarity += entry.polarity;
    acc.pos_score += entry.pos_score;
    acc.neg_score += entry.neg_score;
    ++count;
  }
  synsets.clear();
  for (const auto& [key, value] : sums) {
    const auto& [acc, count] = value;
    synsets.emplace(key, LexiconEntry{acc.polarity / count, acc.pos_score / count,
                                      acc.neg_score / count});
  }
}

const LexiconEntry* PolarityLexicon::find(const std::string& token) const {
  auto it = entries.find(token);
  return it == entries.end() ? nullptr : &it->second;
}

const LexiconEntry* PolarityLexicon::find_synset(const std::string& stem, textprep::Pos pos) const {
  auto it = synsets.find(synset_key(stem, pos));
  return it == synsets.end() ? nullptr : &it->second;
}

PolarityLexicon PolarityLexicon::from_file(const std::filesystem::path& path,
                                           const textprep::Tagger& tagger) {
  enum class Section { kEntries, kBoosters, kNegations };
  PolarityLexicon lex;
  Section section = Section::kEntries;
  for (const std::string& raw : io::read_lines(path)) {
    const auto line = io::trim(raw);
    if (line == "[entries]") { section = Section::kEntries; continue; }
    if (line == "[boosters]") { section = Section::kBoosters; continue; }
    if (line == "[negations]") { section = Section::kNegations; continue; }
    const auto parts = io::split(raw, '\t');
    const std::string context = path.filename().string() + " '" + raw + "'";
    switch (section) {
      case Section::kEntries:
        if (parts.size() != 4) throw Error(ErrorCode::kMalformedFile, context + ": expected 4 columns");
        lex.add_entry(std::string(parts[0]),
                      {parse_real(parts[1], context), parse_real(parts[2], context),
                       parse_real(parts[3], context)});
        break;
      case Section::kBoosters:
        if (parts.size() != 2) throw Error(ErrorCode::kMalformedFile, context + ": expected 2 columns");
        lex.boosters.insert_or_assign(std::string(parts[0]), parse_real(parts[1], context));
        break;
      case Section::kNegations:
        lex.negations.emplace(line);
        break;
    }
  }
  lex.index_synsets(tagger);
  return lex;
}

}  // namespace tlab::lexlabel
