#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "tlab/common/base64.h"
#include "tlab/common/error.h"
#include "tlab/common/rng.h"
#include "tlab/featurize/external.h"
#include "tlab/featurize/vectorize.h"
#include "tlab/featurize/vocabulary.h"
#include "tlab/featurize/word2vec.h"

using namespace tlab;
using namespace tlab::featurize;
using textprep::CleanDocument;

namespace {

CleanDocument doc(std::string id, std::vector<std::string> tokens) {
  CleanDocument d;
  d.id = std::move(id);
  d.tokens = std::move(tokens);
  return d;
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;  // sentinel: nothing thrown
}

std::string pack_line(const std::string& id, const std::vector<float>& values) {
  return id + "\t" + base64::encode(base64::pack_f32_le(values)) + "\n";
}

}  // namespace

TEST(Vocabulary, CountsAndOrder) {
  std::vector<CleanDocument> corpus{doc("1", words("good good bad"))};
  auto v = Vocabulary::build(corpus, 1);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(*v.index("good"), 0u);
  EXPECT_EQ(v.count(0), 2u);
  EXPECT_EQ(*v.index("bad"), 1u);

  EXPECT_EQ(code_of([&] { Vocabulary::build(corpus, 3); }), ErrorCode::kEmptyCorpus);
  EXPECT_EQ(Vocabulary::build(corpus, 3, true).size(), 0u);
  EXPECT_EQ(code_of([] { Vocabulary::build(std::vector<CleanDocument>{}, 1); }), ErrorCode::kEmptyCorpus);
}

TEST(Vocabulary, DocumentFrequencyAndTies) {
  std::vector<CleanDocument> corpus{doc("1", words("covid zeta beta")), doc("2", words("covid covid alpha"))};
  auto v = Vocabulary::build(corpus, 1);
  EXPECT_EQ(v.document_frequency("covid"), 2u);
  EXPECT_EQ(v.count(*v.index("covid")), 3u);
  // ties broken lexicographically
  EXPECT_EQ(v.token(1), "alpha");
  EXPECT_EQ(v.token(2), "beta");
  EXPECT_EQ(v.token(3), "zeta");
}

TEST(Vocabulary, SerializeRoundTrip) {
  std::vector<CleanDocument> corpus{doc("1", words("a b c a")), doc("2", words("c d"))};
  auto v = Vocabulary::build(corpus, 1);
  auto w = Vocabulary::parse(v.serialize());
  ASSERT_EQ(w.size(), v.size());
  EXPECT_EQ(w.total_docs(), 2u);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(w.token(i), v.token(i));
    EXPECT_EQ(w.count(i), v.count(i));
    EXPECT_EQ(w.document_frequency(i), v.document_frequency(i));
    EXPECT_EQ(*w.index(w.token(i)), i);
  }
  EXPECT_EQ(code_of([] { Vocabulary::parse("a\t1\t1\n"); }), ErrorCode::kMalformedFile);
}

TEST(Vocabulary, Coverage) {
  std::vector<CleanDocument> corpus{doc("1", words("good bad"))};
  auto v = Vocabulary::build(corpus, 1);
  EXPECT_DOUBLE_EQ(v.coverage(words("good zzz zzz bad")), 0.5);
}

TEST(Bow, Examples) {
  std::vector<CleanDocument> corpus{doc("1", words("good good bad"))};
  auto v = Vocabulary::build(corpus, 1);
  auto b = bow_vectorize(words("good good bad"), v);
  ASSERT_EQ(b.entries.size(), 2u);
  EXPECT_EQ(b.entries[0], (std::pair<std::size_t, double>{0, 2.0}));
  EXPECT_EQ(b.entries[1], (std::pair<std::size_t, double>{1, 1.0}));
  EXPECT_TRUE(bow_vectorize(words("meh nope"), v).empty());
  EXPECT_TRUE(bow_vectorize({}, v).empty());
}

TEST(Tfidf, TwoDocOracle) {
  std::vector<CleanDocument> corpus{doc("d1", words("a b")), doc("d2", words("a"))};
  auto v = Vocabulary::build(corpus, 1);
  auto t = tfidf_transform(corpus[0].tokens, v);
  // closed form: idf(a) = 1, idf(b) = ln(1.5) + 1
  const double ib = std::log(1.5) + 1.0;
  const double n = std::sqrt(1.0 + ib * ib);
  auto dense = t.to_dense();
  EXPECT_NEAR(dense[*v.index("a")], 1.0 / n, 1e-12);
  EXPECT_NEAR(dense[*v.index("b")], ib / n, 1e-12);
  EXPECT_NEAR(dense[*v.index("a")], 0.5797, 1e-4);
  EXPECT_NEAR(dense[*v.index("b")], 0.8148, 1e-4);
}

TEST(Tfidf, SingleDocProportionalToCounts) {
  std::vector<CleanDocument> corpus{doc("1", words("x x y"))};
  auto v = Vocabulary::build(corpus, 1);
  auto t = tfidf_transform(corpus[0].tokens, v).to_dense();
  EXPECT_NEAR(t[*v.index("x")], 2.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(t[*v.index("y")], 1.0 / std::sqrt(5.0), 1e-12);
  EXPECT_TRUE(tfidf_transform({}, v).empty());
}

TEST(Featurize, PropertySupportAndNorm) {
  Rng rng(7);
  const std::vector<std::string> pool{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  std::vector<CleanDocument> corpus;
  for (int d = 0; d < 200; ++d) {
    std::vector<std::string> toks;
    const auto len = rng.below(8);
    for (std::uint64_t k = 0; k < len; ++k) toks.push_back(pool[rng.below(pool.size())]);
    corpus.push_back(doc(std::to_string(d), toks));
  }
  auto v = Vocabulary::build(corpus, 2);
  for (const auto& d : corpus) {
    auto b = bow_vectorize(d.tokens, v);
    auto t = tfidf_transform(d.tokens, v);
    ASSERT_EQ(b.entries.size(), t.entries.size());
    double norm = 0.0;
    for (std::size_t k = 0; k < b.entries.size(); ++k) {
      EXPECT_EQ(b.entries[k].first, t.entries[k].first);
      EXPECT_NE(t.entries[k].second, 0.0);
      if (k > 0) {
        EXPECT_LT(b.entries[k - 1].first, b.entries[k].first);
      }
      norm += t.entries[k].second * t.entries[k].second;
    }
    if (!t.empty()) {
      EXPECT_NEAR(norm, 1.0, 1e-12);
    }
  }
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(*v.index(v.token(i)), i);
}

TEST(Word2Vec, DeterministicAndShaped) {
  std::vector<CleanDocument> corpus{doc("1", words("the cat sat on the mat")),
                                    doc("2", words("the dog sat on the rug"))};
  Word2VecConfig cfg;
  cfg.dim = 8;
  cfg.seed = 42;
  auto a = train_word2vec(corpus, cfg);
  auto b = train_word2vec(corpus, cfg);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_TRUE(a.deterministic);
  for (const auto& [tok, vec] : a.vectors) {
    ASSERT_EQ(vec.size(), 8u);
    for (double x : vec) EXPECT_TRUE(std::isfinite(x));
  }
  cfg.seed = 43;
  EXPECT_NE(train_word2vec(corpus, cfg).vectors, a.vectors);
  EXPECT_EQ(code_of([] { train_word2vec(std::vector<CleanDocument>{}, Word2VecConfig{}); }),
            ErrorCode::kEmptyCorpus);
}

TEST(Word2Vec, SynonymsShareContexts) {
  // "happy" and "glad" appear in the same contexts; "engine" in unrelated ones
  Rng rng(3);
  const std::vector<std::string> warm{"sunny", "smile", "friends", "party", "love"};
  const std::vector<std::string> cold{"piston", "oil", "valve", "gear", "torque"};
  std::vector<CleanDocument> corpus;
  for (int i = 0; i < 400; ++i) {
    std::vector<std::string> t;
    const bool mech = i % 3 == 2;
    const auto& ctx = mech ? cold : warm;
    t.push_back(ctx[rng.below(5)]);
    t.push_back(mech ? "engine" : (i % 3 == 0 ? "happy" : "glad"));
    t.push_back(ctx[rng.below(5)]);
    t.push_back(ctx[rng.below(5)]);
    corpus.push_back(doc(std::to_string(i), t));
  }
  Word2VecConfig cfg;
  cfg.dim = 16;
  cfg.window = 3;
  cfg.epochs = 10;
  cfg.seed = 11;
  auto table = train_word2vec(corpus, cfg);
  const double syn = cosine(*table.find("happy"), *table.find("glad"));
  const double other = cosine(*table.find("happy"), *table.find("engine"));
  EXPECT_GT(syn, other);
}

TEST(DocVector, SumAverage) {
  EmbeddingTable t;
  t.dim = 2;
  t.vectors["a"] = {1.0, 2.0};
  t.vectors["b"] = {3.0, -1.0};
  EXPECT_EQ(doc_vector(words("a"), t, PoolMode::kSum), t.vectors["a"]);
  EXPECT_EQ(doc_vector(words("a zz"), t, PoolMode::kAverage), t.vectors["a"]);
  auto s = doc_vector(words("a b"), t, PoolMode::kSum);
  auto m = doc_vector(words("a b"), t, PoolMode::kAverage);
  for (int j = 0; j < 2; ++j) EXPECT_EQ(s[j], 2.0 * m[j]);
  EXPECT_EQ(doc_vector(words("zz"), t, PoolMode::kSum), (std::vector<double>{0.0, 0.0}));
}

TEST(External, PooledRoundTrip) {
  std::string text = R"({"dim":16,"count":3,"mode":"pooled","version":1})" "\n";
  for (int d = 0; d < 3; ++d) {
    std::vector<float> v(16);
    for (int j = 0; j < 16; ++j) v[j] = static_cast<float>(d * 100 + j) / 7.0f;
    text += pack_line("doc" + std::to_string(d), v);
  }
  auto set = parse_external_embeddings(text);
  EXPECT_EQ(set.dim, 16u);
  ASSERT_EQ(set.docs.size(), 3u);
  EXPECT_EQ(set.find("doc2")->values[5], static_cast<float>(205) / 7.0f);
  EXPECT_EQ(format_external_embeddings(set), text);
}

TEST(External, Errors) {
  const std::string hdr = R"({"dim":4,"count":2,"mode":"pooled","version":1})" "\n";
  EXPECT_EQ(code_of([&] {
              parse_external_embeddings(hdr + pack_line("a", {1, 2, 3, 4}) + pack_line("b", {1, 2, 3}));
            }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([&] { parse_external_embeddings(hdr + pack_line("a", {1, 2, 3, 4})); }),
            ErrorCode::kMalformedFile);
  EXPECT_EQ(code_of([&] {
              parse_external_embeddings(hdr + pack_line("a", {1, 2, 3, 4}) + pack_line("a", {1, 2, 3, 4}));
            }),
            ErrorCode::kMalformedFile);
  EXPECT_EQ(code_of([] { parse_external_embeddings("not json\n"); }), ErrorCode::kMalformedFile);
  EXPECT_EQ(code_of([&] { parse_external_embeddings(hdr + "a\t!!!\nb\tAAAA\n"); }), ErrorCode::kMalformedFile);
  const std::string seq = R"({"dim":4,"count":1,"mode":"sequence","version":1})" "\n";
  EXPECT_EQ(code_of([&] { parse_external_embeddings(seq + pack_line("a", {1, 2, 3, 4, 5, 6})); }),
            ErrorCode::kDimensionMismatch);
}

TEST(External, SequenceTruncateAndPad) {
  const std::size_t dim = 3;
  std::vector<float> longseq(300 * dim), shortseq(5 * dim);
  for (std::size_t i = 0; i < longseq.size(); ++i) longseq[i] = static_cast<float>(i);
  for (std::size_t i = 0; i < shortseq.size(); ++i) shortseq[i] = 1.0f + static_cast<float>(i);
  std::string text = R"({"dim":3,"count":2,"mode":"sequence","version":1})" "\n";
  text += pack_line("long", longseq) + pack_line("short", shortseq);
  auto set = parse_external_embeddings(text);
  const auto* l = set.find("long");
  EXPECT_EQ(l->rows, 256u);
  EXPECT_EQ(l->source_tokens, 300u);
  EXPECT_EQ(std::count(l->mask.begin(), l->mask.end(), 1), 256);
  EXPECT_EQ(l->values.size(), 256 * dim);
  EXPECT_EQ(l->values.back(), static_cast<float>(256 * dim - 1));
  const auto* s = set.find("short");
  EXPECT_EQ(s->rows, 256u);
  EXPECT_EQ(std::count(s->mask.begin(), s->mask.end(), 1), 5);
  EXPECT_EQ(s->mask[4], 1);
  EXPECT_EQ(s->mask[5], 0);
  for (std::size_t i = 5 * dim; i < s->values.size(); ++i) ASSERT_EQ(s->values[i], 0.0f);
}
