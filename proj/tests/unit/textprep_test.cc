#include <regex>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tlab/common/error.h"
#include "tlab/common/rng.h"
#include "tlab/textprep/pipeline.h"
#include "tlab/textprep/stemmer.h"
#include "tlab/textprep/steps.h"
#include "tlab/textprep/tagger.h"

namespace tlab::textprep {
namespace {

const PrepConfig& shipped() {
  static const PrepConfig config = load_prep_config(TLAB_DATA_DIR "/assets");
  return config;
}

const Tagger& shipped_tagger() {
  static const Tagger tagger = Tagger::from_file(TLAB_DATA_DIR "/assets/pos_lexicon.tsv");
  return tagger;
}

std::vector<std::string> clean(const std::string& text) {
  return run_pipeline({"d", text, {}, std::nullopt}, shipped()).tokens;
}

using Tokens = std::vector<std::string>;

TEST(NormalizeCaseTest, Examples) {
  EXPECT_EQ(normalize_case("COVID Vaccine"), "covid vaccine");
  EXPECT_EQ(normalize_case(""), "");
  EXPECT_EQ(normalize_case("SoOoOo"), "sooooo");
  EXPECT_EQ(normalize_case(normalize_case("MiXeD \xC3\x89")), normalize_case("MiXeD \xC3\x89"));
}

TEST(StripNoiseTest, Examples) {
  EXPECT_EQ(strip_noise("@user check https://t.co/x #covid"), "check");
  EXPECT_EQ(strip_noise("no links here"), "no links here");
  EXPECT_EQ(strip_noise("visit www.site.org now"), "visit now");
  EXPECT_EQ(strip_noise("  a   http://x  b "), "a b");
}

TEST(ExpandContractionsTest, Examples) {
  const auto& table = shipped().contractions;
  EXPECT_EQ(expand_contractions("isn't", table), "is not");
  EXPECT_EQ(expand_contractions("don't stop", table), "do not stop");
  EXPECT_EQ(expand_contractions("rock'n'roll", table), "rock'n'roll");
  // Typographic apostrophe and trailing punctuation.
  EXPECT_EQ(expand_contractions("isn\xE2\x80\x99t!", table), "is not!");
}

TEST(NormalizeRepeatsTest, Examples) {
  const auto& dict = shipped().dictionary;
  EXPECT_EQ(normalize_repeats("sooooo", dict), "so");
  EXPECT_EQ(normalize_repeats("goooood", dict), "good");
  EXPECT_EQ(normalize_repeats("good", dict), "good");
  EXPECT_EQ(normalize_repeats("zzzzxq", dict), "zxq");
  // Double letters that were never elongated are left alone.
  EXPECT_EQ(normalize_repeats("coffeex", dict), "coffeex");
  EXPECT_EQ(normalize_repeats("cooool", dict), "cool");
}

TEST(DemojizeTest, Examples) {
  const auto& table = shipped().emoji;
  EXPECT_EQ(demojize("great \xF0\x9F\x98\x82", table), "great face_with_tears_of_joy");
  EXPECT_EQ(demojize("plain text", table), "plain text");
  EXPECT_EQ(demojize("\xF0\x9F\x98\x82\xF0\x9F\x98\x82", table),
            "face_with_tears_of_joy face_with_tears_of_joy");
}

TEST(StripNonAlphaTest, Examples) {
  EXPECT_EQ(strip_non_alpha("covid-19 cases: 5,000!"), "covid cases");
  EXPECT_EQ(strip_non_alpha("abc"), "abc");
  EXPECT_EQ(strip_non_alpha("2021"), "");
}

TEST(RemoveStopwordsTest, Examples) {
  EXPECT_EQ(remove_stopwords(Tokens{"this", "is", "not", "good"}, shipped()), (Tokens{"not", "good"}));
  PrepConfig config;
  config.min_token_len = 2;
  EXPECT_EQ(remove_stopwords(Tokens{"a", "i"}, config), Tokens{});
  EXPECT_EQ(remove_stopwords(Tokens{"never", "again"}, shipped()), (Tokens{"never", "again"}));
}

TEST(DedupeTest, Examples) {
  std::vector<CleanDocument> corpus{{"d1", {"good", "day"}, "good day", {}},
                                    {"d2", {"good", "day"}, "good day", {}},
                                    {"d3", {}, "", {}}};
  const auto out = dedupe_and_drop_empty(corpus);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].id, "d1");
  EXPECT_TRUE(dedupe_and_drop_empty({}).empty());
  std::vector<CleanDocument> disjoint{{"a", {"x"}, "x", {}}, {"b", {"y"}, "y", {}}};
  EXPECT_EQ(dedupe_and_drop_empty(disjoint).size(), 2u);
}

TEST(StemmerTest, ReferenceOutputs) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"running", "run"},       {"quickly", "quickli"},     {"cat", "cat"},
      {"caresses", "caress"},   {"ponies", "poni"},         {"ties", "ti"},
      {"agreed", "agre"},       {"plastered", "plaster"},   {"motoring", "motor"},
      {"sing", "sing"},         {"conflated", "conflat"},   {"hopping", "hop"},
      {"falling", "fall"},      {"filing", "file"},         {"happy", "happi"},
      {"relational", "relat"},  {"conditional", "condit"},  {"rational", "ration"},
      {"digitizer", "digit"},   {"vietnamization", "vietnam"}, {"hopefulness", "hope"},
      {"sensibiliti", "sensibl"}, {"formative", "form"},    {"electrical", "electr"},
      {"goodness", "good"},     {"allowance", "allow"},     {"adjustment", "adjust"},
      {"adoption", "adopt"},    {"effective", "effect"},    {"probate", "probat"},
      {"cease", "ceas"},        {"controll", "control"},    {"generalizations", "gener"},
      {"oscillators", "oscil"}, {"sky", "sky"},             {"feed", "feed"},
  };
  for (const auto& [word, stem] : cases) EXPECT_EQ(porter_stem(word), stem) << word;
}

TEST(TaggerTest, Examples) {
  const auto tagged = stem_and_tag(Tokens{"running", "cat", "quickly", "face_with_tears_of_joy"},
                                   shipped_tagger());
  EXPECT_EQ(tagged[0].stem, "run");
  EXPECT_EQ(tagged[0].pos, Pos::kVerb);
  EXPECT_EQ(tagged[1].stem, "cat");
  EXPECT_EQ(tagged[1].pos, Pos::kNoun);
  EXPECT_EQ(tagged[2].stem, "quickli");
  EXPECT_EQ(tagged[2].pos, Pos::kAdverb);
  EXPECT_EQ(tagged[3].pos, Pos::kOther);
  // Unknown word, no rule.
  EXPECT_EQ(Tagger().tag("blorp"), Pos::kNoun);
}

TEST(PipelineTest, Examples) {
  EXPECT_EQ(clean("Sooooo GOOOOD!!! \xF0\x9F\x98\x82 @bob #fun https://x.co"),
            (Tokens{"good", "face_with_tears_of_joy"}));
  EXPECT_EQ(clean(""), Tokens{});
  EXPECT_EQ(clean("I don't like it"), (Tokens{"not", "like"}));
  EXPECT_EQ(clean("sooooo goooood"), Tokens{"good"});
}

TEST(PipelineTest, PaperExamplesWithoutStopwordStep) {
  PrepConfig config = shipped();
  config.steps = {"normalize_case", "demojize", "strip_noise", "expand_contractions",
                  "strip_non_alpha", "tokenize", "normalize_repeats"};
  auto run = [&](const std::string& text) {
    return run_pipeline({"d", text, {}, std::nullopt}, config).joined;
  };
  EXPECT_EQ(run("sooooo goooood"), "so good");
  EXPECT_EQ(run("isn't"), "is not");
}

TEST(PipelineTest, RejectsUnknownOrReorderedSteps) {
  PrepConfig config = shipped();
  config.steps = {"normalize_case", "spellcheck"};
  EXPECT_THROW(run_pipeline({"d", "x", {}, std::nullopt}, config), Error);
  config.steps = {"strip_noise", "normalize_case"};
  try {
    run_pipeline({"d", "x", {}, std::nullopt}, config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
}

// Random tweets assembled from fragments that exercise every rule.
std::string random_tweet(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "GOOD", "sooooo", "goooood", "isn't", "don't", "I'm", "@someone", "#Covid19", "https://t.co/ab",
      "www.x.org", "covid-19", "5,000", "!!!", "\xF0\x9F\x98\x82", "\xE2\x9D\xA4\xEF\xB8\x8F", "not",
      "never", "the", "a", "vaccine", "lockdown", "hmmmm", "yesss", "cooool", "rock'n'roll", "\t", "it's",
      "won't", "I", "love", "hate", "sad", "news", "....", "a_b", "coffee", "zzzzxq"};
  std::string text;
  const auto n = rng.between(0, 14);
  for (std::int64_t i = 0; i < n; ++i) {
    text += pieces[rng.below(pieces.size())];
    text += rng.bernoulli(0.8) ? " " : "";
  }
  return text;
}

TEST(PipelinePropertyTest, IdempotentAndWellFormed) {
  Rng rng(2024);
  const std::regex token_re("^[a-z_]+$");
  for (int trial = 0; trial < 500; ++trial) {
    const std::string text = random_tweet(rng);
    const CleanDocument once = run_pipeline({"d", text, {}, std::nullopt}, shipped());
    const CleanDocument twice = run_pipeline({"d", once.joined, {}, std::nullopt}, shipped());
    EXPECT_EQ(once.tokens, twice.tokens) << text;
    EXPECT_EQ(once.joined, join_tokens(once.tokens));
    for (const std::string& token : once.tokens) {
      EXPECT_TRUE(std::regex_match(token, token_re)) << token;
      if (!shipped().negation_whitelist.contains(token)) {
        EXPECT_GE(token.size(), shipped().min_token_len);
        EXPECT_FALSE(shipped().stopwords.contains(token));
      }
    }
    EXPECT_EQ(once.tokens, run_pipeline({"d", text, {}, std::nullopt}, shipped()).tokens);
  }
}

TEST(PipelinePropertyTest, PreservesRelativeOrder) {
  // Words that survive untouched must appear in input order.
  EXPECT_EQ(clean("vaccine lockdown the news hospital"),
            (Tokens{"vaccine", "lockdown", "news", "hospital"}));
}

}  // namespace
}  // namespace tlab::textprep
