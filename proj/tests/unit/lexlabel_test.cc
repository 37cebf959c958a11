#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tlab/common/error.h"
#include "tlab/common/rng.h"
#include "tlab/lexlabel/scoring.h"

namespace tlab::lexlabel {
namespace {

using textprep::CleanDocument;
using textprep::Pos;
using textprep::TaggedToken;

CleanDocument doc(std::vector<std::string> tokens) {
  CleanDocument d;
  d.id = "d";
  d.tokens = std::move(tokens);
  return d;
}

PolarityLexicon toy_lexicon(double good) {
  PolarityLexicon lex;
  lex.add_entry("good", {good, std::max(good, 0.0), std::max(-good, 0.0)});
  lex.add_entry("bad", {-0.6, 0.0, 0.6});
  lex.negations = {"not", "never"};
  lex.boosters = {{"very", 0.293}};
  return lex;
}

TEST(ScorePatternTest, Examples) {
  const auto lex = toy_lexicon(0.7);
  EXPECT_EQ(score_pattern(doc({}), lex), 0.0);
  EXPECT_DOUBLE_EQ(score_pattern(doc({"good"}), lex), 0.7);
  EXPECT_DOUBLE_EQ(score_pattern(doc({"not", "good"}), lex), -0.7);
  // Outside the window the negation no longer applies.
  ScoreConfig narrow;
  narrow.negation_window = 1;
  EXPECT_DOUBLE_EQ(score_pattern(doc({"not", "x", "good"}), lex, narrow), 0.7);
  EXPECT_DOUBLE_EQ(score_pattern(doc({"good", "bad"}), lex), (0.7 - 0.6) / 2);
}

TEST(ScoreValenceTest, Examples) {
  // 0.475 on the lexicon scale is 1.9 on the valence scale.
  const auto lex = toy_lexicon(0.475);
  ScoreConfig cfg;
  EXPECT_EQ(score_valence(doc({}), lex, cfg), 0.0);
  EXPECT_NEAR(score_valence(doc({"good"}), lex, cfg), 0.4404, 1e-4);
  EXPECT_NEAR(score_valence(doc({"not", "good"}), lex, cfg), -0.3412, 1e-4);
  // Booster adds in the direction of the valence.
  const double boosted = score_valence(doc({"very", "good"}), lex, cfg);
  const double s = 1.9 + 0.293;
  EXPECT_NEAR(boosted, s / std::sqrt(s * s + 15.0), 1e-12);
}

TEST(ScoreSynsetTest, Examples) {
  PolarityLexicon lex;
  EXPECT_EQ(score_synset(std::vector<TaggedToken>{{"x", "x", Pos::kNoun}}, lex), 0.0);
  lex.synsets.emplace(synset_key("happi", Pos::kAdjective), LexiconEntry{0.7, 0.8, 0.1});
  EXPECT_NEAR(score_synset(std::vector<TaggedToken>{{"happy", "happi", Pos::kAdjective}}, lex), 0.7,
              1e-12);
  lex.synsets.clear();
  lex.synsets.emplace(synset_key("a", Pos::kNoun), LexiconEntry{0, 0.6, 0.1});
  lex.synsets.emplace(synset_key("b", Pos::kNoun), LexiconEntry{0, 0.1, 0.5});
  EXPECT_NEAR(score_synset(std::vector<TaggedToken>{{"a", "a", Pos::kNoun}, {"b", "b", Pos::kNoun}},
                           lex),
              0.05, 1e-12);
  // POS must match as well.
  EXPECT_EQ(score_synset(std::vector<TaggedToken>{{"a", "a", Pos::kVerb}}, lex), 0.0);
}

TEST(ToLabelTest, ClosedNeutralBand) {
  ScoreConfig cfg;
  EXPECT_EQ(to_label(0.6, cfg).value, 1);
  EXPECT_EQ(to_label(0.0, cfg).value, 0);
  EXPECT_EQ(to_label(-0.05, cfg).value, 0);
  EXPECT_EQ(to_label(0.05, cfg).value, 0);
  EXPECT_EQ(to_label(-0.0500001, cfg).value, -1);
}

TEST(ToLabelTest, Monotone) {
  ScoreConfig cfg;
  int previous = -1;
  for (double s = -1.0; s <= 1.0; s += 0.001) {
    const int v = to_label(s, cfg).value;
    EXPECT_GE(v, previous);
    previous = v;
  }
}

TEST(LabelCorpusTest, CompositionAndConservation) {
  PolarityLexicon lex;
  lex.add_entry("up", {0.6, 0.6, 0.0});
  lex.add_entry("down", {-0.3, 0.0, 0.3});
  const std::vector<CleanDocument> corpus{doc({"up"}), doc({"meh"}), doc({"down"})};
  const textprep::Tagger tagger;
  const auto out = label_corpus(corpus, Scheme::kPattern, lex, ScoreConfig{}, tagger);
  ASSERT_EQ(out.examples.size(), 3u);
  EXPECT_EQ(out.examples[0].label.value, 1);
  EXPECT_EQ(out.examples[1].label.value, 0);
  EXPECT_EQ(out.examples[2].label.value, -1);
  EXPECT_EQ(out.counts.total(), corpus.size());
  EXPECT_TRUE(label_corpus({}, Scheme::kValence, lex, ScoreConfig{}, tagger).examples.empty());
}

TEST(LabelCorpusTest, UnknownScheme) {
  try {
    label_corpus({}, "sentistrength", PolarityLexicon{}, ScoreConfig{}, textprep::Tagger{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownScheme);
  }
}

class ShippedLexiconTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    tagger_ = new textprep::Tagger(textprep::Tagger::from_file(TLAB_DATA_DIR "/assets/pos_lexicon.tsv"));
    lex_ = new PolarityLexicon(PolarityLexicon::from_file(TLAB_DATA_DIR "/assets/lexicon.tsv", *tagger_));
  }
  static void TearDownTestSuite() {
    delete lex_;
    delete tagger_;
  }
  static textprep::Tagger* tagger_;
  static PolarityLexicon* lex_;
};
textprep::Tagger* ShippedLexiconTest::tagger_ = nullptr;
PolarityLexicon* ShippedLexiconTest::lex_ = nullptr;

TEST_F(ShippedLexiconTest, LoadsAllSections) {
  EXPECT_GE(lex_->entries.size(), 2500u);
  EXPECT_TRUE(lex_->negations.contains("not"));
  EXPECT_TRUE(lex_->boosters.contains("very"));
  EXPECT_GT(lex_->synsets.size(), 1000u);
  for (const auto& [token, e] : lex_->entries) {
    EXPECT_LE(std::abs(e.polarity), 1.0);
    EXPECT_LE(e.pos_score + e.neg_score, 1.0 + 1e-12);
  }
}

TEST_F(ShippedLexiconTest, SchemeProperties) {
  Rng rng(5);
  std::vector<std::string> vocab;
  for (const auto& [token, e] : lex_->entries) vocab.push_back(token);
  std::sort(vocab.begin(), vocab.end());
  vocab.insert(vocab.end(), {"not", "never", "very", "blorp", "quux"});
  ScoreConfig cfg;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> tokens;
    const auto n = rng.between(0, 12);
    for (std::int64_t i = 0; i < n; ++i) tokens.push_back(vocab[rng.below(vocab.size())]);
    const auto d = doc(tokens);
    const double compound = score_valence(d, *lex_, cfg);
    EXPECT_GT(compound, -1.0);
    EXPECT_LT(compound, 1.0);
    const double pattern = score_pattern(d, *lex_, cfg);
    EXPECT_LE(std::abs(pattern), 1.0);
    const double synset = score_synset(textprep::stem_and_tag(tokens, *tagger_), *lex_);
    EXPECT_LE(std::abs(synset), 1.0);
  }
  // No lexicon hits: every scheme yields exactly 0.
  const auto miss = doc({"blorp", "quux"});
  EXPECT_EQ(score_pattern(miss, *lex_), 0.0);
  EXPECT_EQ(score_valence(miss, *lex_), 0.0);
  EXPECT_EQ(score_synset(textprep::stem_and_tag(miss.tokens, *tagger_), *lex_), 0.0);
}

TEST_F(ShippedLexiconTest, NegationFlipsPatternContributionExactly) {
  for (const std::string token : {"good", "bad", "love", "hate"}) {
    const LexiconEntry* e = lex_->find(token);
    ASSERT_NE(e, nullptr) << token;
    EXPECT_EQ(score_pattern(doc({"not", token}), *lex_), -score_pattern(doc({token}), *lex_));
  }
}

TEST_F(ShippedLexiconTest, ValenceSignMatchesSum) {
  ScoreConfig cfg;
  EXPECT_GT(score_valence(doc({"good", "great"}), *lex_, cfg), 0.0);
  EXPECT_LT(score_valence(doc({"not", "good"}), *lex_, cfg), 0.0);
  EXPECT_LT(score_valence(doc({"bad", "terrible"}), *lex_, cfg), 0.0);
}

}  // namespace
}  // namespace tlab::lexlabel
