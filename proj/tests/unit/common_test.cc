#include <cmath>
#include <cstdint>
#include <vector>

#include "gtest/gtest.h"
#include "tlab/common/base64.h"
#include "tlab/common/csv.h"
#include "tlab/common/error.h"
#include "tlab/common/hash.h"
#include "tlab/common/rng.h"

namespace tlab {
namespace {

TEST(CsvTest, QuotedFieldsAndBom) {
  const auto rows = csv::parse("\xEF\xBB\xBFid,text\r\n1,\"a, \"\"b\"\"\nc\"\n2,plain\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "id");
  EXPECT_EQ(rows[1][1], "a, \"b\"\nc");
  EXPECT_EQ(rows[2][1], "plain");
}

TEST(CsvTest, UnterminatedQuoteIsMalformed) {
  try {
    csv::parse("id,text\n1,\"open\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedCsv);
  }
}

TEST(CsvTest, FormatEscapesWhenNeeded) {
  EXPECT_EQ(csv::format_row({"a", "b,c", "say \"hi\""}), "a,\"b,c\",\"say \"\"hi\"\"\"\n");
  const auto back = csv::parse(csv::format_row({"x,y", "q\"r"}));
  EXPECT_EQ(back[0], (csv::Row{"x,y", "q\"r"}));
}

TEST(Base64Test, KnownVectors) {
  const std::string s = "foobar";
  for (std::size_t n = 0; n <= s.size(); ++n) {
    std::vector<std::uint8_t> bytes(s.begin(), s.begin() + n);
    EXPECT_EQ(base64::decode(base64::encode(bytes)), bytes);
  }
  const std::vector<std::uint8_t> fo{'f', 'o'};
  EXPECT_EQ(base64::encode(fo), "Zm8=");
}

TEST(Base64Test, FloatPackingIsLittleEndian) {
  const std::vector<float> v{1.0f};
  const auto bytes = base64::pack_f32_le(v);
  EXPECT_EQ(bytes, (std::vector<std::uint8_t>{0x00, 0x00, 0x80, 0x3f}));
  EXPECT_EQ(base64::unpack_f32_le(bytes), v);
}

TEST(Base64Test, RejectsGarbage) {
  EXPECT_THROW(base64::decode("a$=="), Error);
  EXPECT_THROW(base64::decode("abc"), Error);
}

TEST(HashTest, FnvReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST(RngTest, DeterministicAndInRange) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const auto k = c.between(-3, 3);
    EXPECT_GE(k, -3);
    EXPECT_LE(k, 3);
  }
}

TEST(RngTest, NormalMoments) {
  Rng rng(1);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(RngTest, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}

}  // namespace
}  // namespace tlab
