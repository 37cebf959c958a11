#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/lexlabel/lexicon.h"
#include "tlab/textprep/tagger.h"
#include "tlab/textprep/types.h"

namespace tlab::lexlabel {

enum class Scheme { kPattern, kValence, kSynset };

std::string_view scheme_name(Scheme scheme);
// Throws UnknownScheme.
Scheme parse_scheme(std::string_view name);

struct ScoreConfig {
  Scheme scheme = Scheme::kPattern;
  double neutral_band = 0.05;
  std::size_t negation_window = 3;
  double normalization_alpha = 15.0;
  // Multiplier applied to a valence preceded by a negation.
  double negation_scalar = -0.74;
  // Lexicon polarities live in [-1, 1]; the valence scheme works on the
  // conventional [-4, 4] scale.
  double valence_scale = 4.0;
};

// Sentiment class; value in {-1, 0, +1}.
struct SentimentLabel {
  int value = 0;
  friend bool operator==(SentimentLabel, SentimentLabel) = default;
};

// Mean polarity of matched tokens; a match preceded by a negation within
// the window counts with flipped sign. Negation words never score.
double score_pattern(const textprep::CleanDocument& doc, const PolarityLexicon& lex,
                     const ScoreConfig& cfg = {});

// Sum of boosted and negation-damped valences squashed by s / sqrt(s^2 + alpha).
double score_valence(const textprep::CleanDocument& doc, const PolarityLexicon& lex,
                     const ScoreConfig& cfg = {});

// Mean of (pos_score - neg_score) over tokens whose (stem, POS) is indexed.
double score_synset(std::span<const textprep::TaggedToken> tagged, const PolarityLexicon& lex);

// Closed neutral band: |score| <= band maps to 0.
SentimentLabel to_label(double score, const ScoreConfig& cfg);

struct LabeledExample {
  std::string id;
  double score = 0.0;
  SentimentLabel label;
};

struct ClassCounts {
  std::size_t negative = 0;
  std::size_t neutral = 0;
  std::size_t positive = 0;
  std::size_t total() const { return negative + neutral + positive; }
};

struct LabeledCorpus {
  std::vector<LabeledExample> examples;
  ClassCounts counts;
};

LabeledCorpus label_corpus(std::span<const textprep::CleanDocument> corpus, Scheme scheme,
                           const PolarityLexicon& lex, const ScoreConfig& cfg,
                           const textprep::Tagger& tagger);

// Name-based overload for the CLI; throws UnknownScheme.
LabeledCorpus label_corpus(std::span<const textprep::CleanDocument> corpus, std::string_view scheme,
                           const PolarityLexicon& lex, const ScoreConfig& cfg,
                           const textprep::Tagger& tagger);

}  // namespace tlab::lexlabel
