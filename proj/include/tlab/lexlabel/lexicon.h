#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "tlab/textprep/tagger.h"
#include "tlab/textprep/types.h"

namespace tlab::lexlabel {

struct LexiconEntry {
  double polarity = 0.0;   // [-1, 1]
  double pos_score = 0.0;  // [0, 1]
  double neg_score = 0.0;  // [0, 1], pos_score + neg_score <= 1
};

// Word polarities plus the rule tables used by the valence scheme.
//
// File format (UTF-8, '#' comments):
//   [entries]     token<TAB>polarity<TAB>pos<TAB>neg
//                 token may carry an explicit POS as "word#n|v|a|r"
//   [boosters]    token<TAB>increment
//   [negations]   token
// Lines before the first section header belong to [entries].
struct PolarityLexicon {
  std::unordered_map<std::string, LexiconEntry> entries;
  std::unordered_map<std::string, double> boosters;
  std::unordered_set<std::string> negations;
  // (stem, POS) -> scores, averaged over entries sharing a key.
  std::unordered_map<std::string, LexiconEntry> synsets;

  static PolarityLexicon from_file(const std::filesystem::path& path,
                                   const textprep::Tagger& tagger);

  void add_entry(const std::string& token, LexiconEntry entry);
  // Rebuilds the synset index from the entries using the stemmer and tagger.
  void index_synsets(const textprep::Tagger& tagger);

  const LexiconEntry* find(const std::string& token) const;
  const LexiconEntry* find_synset(const std::string& stem, textprep::Pos pos) const;
};

std::string synset_key(const std::string& stem, textprep::Pos pos);

}  // namespace tlab::lexlabel
