#include "pwdist/tsv.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pwdist/common.h"

namespace pwdist {
namespace {

TEST(TsvEscape, SpecialBytes) {
  EXPECT_EQ(tsv_escape("a\tb\\c\nd\re"), "a\\tb\\\\c\\nd\\re");
  EXPECT_EQ(tsv_unescape("a\\tb\\\\c"), "a\tb\\c");
  EXPECT_THROW(tsv_unescape("bad\\"), InputError);
  EXPECT_THROW(tsv_unescape("bad\\x"), InputError);
}

TEST(TsvEscape, RoundTripsRandomBytes) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s(gen() % 20, '\0');
    for (auto& c : s) c = static_cast<char>(gen() & 0xff);
    const auto escaped = tsv_escape(s);
    EXPECT_EQ(escaped.find('\t'), std::string::npos);
    EXPECT_EQ(escaped.find('\n'), std::string::npos);
    EXPECT_EQ(tsv_unescape(escaped), s);
  }
}

TEST(TableTsv, WritesHeaderAndRanks) {
  const RankFrequencyTable t({{"x\ty", 3}, {"z", 1}}, 0);
  std::ostringstream out;
  write_table_tsv(out, t);
  EXPECT_EQ(out.str(), "rank\tcount\tpassword\n1\t3\tx\\ty\n2\t1\tz\n");

  std::istringstream in(out.str());
  EXPECT_EQ(read_table_tsv(in).entries(), t.entries());
}

TEST(TableTsv, MaxRanksWritesThePrefix) {
  const RankFrequencyTable t({{"a", 3}, {"b", 2}, {"c", 1}}, 0);
  std::ostringstream out;
  write_table_tsv(out, t, 2);
  EXPECT_EQ(out.str(), "rank\tcount\tpassword\n1\t3\ta\n2\t2\tb\n");
}

TEST(TableTsv, RejectsMalformedFiles) {
  for (const char* text : {"", "bogus\n", "rank\tcount\tpassword\n2\t1\ta\n",
                           "rank\tcount\tpassword\n1\tx\ta\n", "rank\tcount\tpassword\n1\t1\n",
                           "rank\tcount\tpassword\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_table_tsv(in), InputError) << text;
  }
}

TEST(CountOfCountsTsv, Format) {
  std::ostringstream out;
  write_count_of_counts_tsv(out, CountOfCounts{{{1, 2}, {2, 1}}});
  EXPECT_EQ(out.str(), "k\tn_k\n1\t2\n2\t1\n");
}

}  // namespace
}  // namespace pwdist
