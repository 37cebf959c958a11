#include "tlab/lexlabel/scoring.h"

#include <cmath>

#include "tlab/common/error.h"

namespace tlab::lexlabel {
namespace {

bool negated_at(const std::vector<std::string>& tokens, std::size_t i, const PolarityLexicon& lex,
                std::size_t window) {
  const std::size_t start = i >= window ? i - window : 0;
  for (std::size_t j = start; j < i; ++j) {
    if (lex.negations.contains(tokens[j])) return true;
  }
  return false;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kPattern: return "pattern";
    case Scheme::kValence: return "valence";
    case Scheme::kSynset: return "synset";
  }
  return "pattern";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "pattern") return Scheme::kPattern;
  if (name == "valence") return Scheme::kValence;
  if (name == "synset") return Scheme::kSynset;
  throw Error(ErrorCode::kUnknownScheme, "unknown labeling scheme '" + std::string(name) + "'");
}

double score_pattern(const textprep::CleanDocument& doc, const PolarityLexicon& lex,
                     const ScoreConfig& cfg) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const std::string& token = doc.tokens[i];
    if (lex.negations.contains(token)) continue;
    const LexiconEntry* entry = lex.find(token);
    if (entry == nullptr) continue;
    const double sign = negated_at(doc.tokens, i, lex, cfg.negation_window) ? -1.0 : 1.0;
    sum += sign * entry->polarity;
    ++hits;
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double score_valence(const textprep::CleanDocument& doc, const PolarityLexicon& lex,
                     const ScoreConfig& cfg) {
  double s = 0.0;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const std::string& token = doc.tokens[i];
    if (lex.negations.contains(token) || lex.boosters.contains(token)) continue;
    const LexiconEntry* entry = lex.find(token);
    if (entry == nullptr) continue;
    double valence = entry->polarity * cfg.valence_scale;
    const std::size_t start = i >= cfg.negation_window ? i - cfg.negation_window : 0;
    for (std::size_t j = start; j < i; ++j) {
      auto it = lex.boosters.find(doc.tokens[j]);
      if (it != lex.boosters.end() && valence != 0.0) {
        valence += valence > 0.0 ? it->second : -it->second;
      }
    }
    if (negated_at(doc.tokens, i, lex, cfg.negation_window)) valence *= cfg.negation_scalar;
    s += valence;
  }
  if (s == 0.0) return 0.0;
  return s / std::sqrt(s * s + cfg.normalization_alpha);
}

double score_synset(std::span<const textprep::TaggedToken> tagged, const PolarityLexicon& lex) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (const auto& token : tagged) {
    const LexiconEntry* entry = lex.find_synset(token.stem, token.pos);
    if (entry == nullptr) continue;
    sum += entry->pos_score - entry->neg_score;
    ++hits;
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

SentimentLabel to_label(double score, const ScoreConfig& cfg) {
  if (score > cfg.neutral_band) return {1};
  if (score < -cfg.neutral_band) return {-1};
  return {0};
}

LabeledCorpus label_corpus(std::span<const textprep::CleanDocument> corpus, Scheme scheme,
                           const PolarityLexicon& lex, const ScoreConfig& cfg,
                           const textprep::Tagger& tagger) {
  LabeledCorpus out;
  out.examples.reserve(corpus.size());
  for (const auto& doc : corpus) {
    double score = 0.0;
    switch (scheme) {
      case Scheme::kPattern: score = score_pattern(doc, lex, cfg); break;
      case Scheme::kValence: score = score_valence(doc, lex, cfg); break;
      case Scheme::kSynset: score = score_synset(textprep::stem_and_tag(doc.tokens, tagger), lex); break;
    }
    const SentimentLabel label = to_label(score, cfg);
    switch (label.value) {
      case -1: ++out.counts.negative; break;
      case 0: ++out.counts.neutral; break;
      default: ++out.counts.positive; break;
    }
    out.examples.push_back({doc.id, score, label});
  }
  return out;
}

LabeledCorpus label_corpus(std::span<const textprep::CleanDocument> corpus, std::string_view scheme,
                           const PolarityLexicon& lex, const ScoreConfig& cfg,
                           const textprep::Tagger& tagger) {
  return label_corpus(corpus, parse_scheme(scheme), lex, cfg, tagger);
}

}  // namespace tlab::lexlabel
