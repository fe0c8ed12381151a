#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "xlex/io.hpp"

using namespace xlex;

TEST(CoocTsv, LayoutAndRoundTrip) {
  const auto stats = count_cooccurrences(tokenize("a b a c"), Vocabulary({"a", "b", "c"}), 11);
  const auto text = format_cooc_tsv(stats);
  EXPECT_EQ(text,
            "#unigram\na\t2\nb\t1\nc\t1\n#pairs\n\ta\tb\tc\na\t0\t2\t2\nb\t2\t0\t1\nc\t2\t1\t0\n"
            "#window\t11\n#total_tokens\t4\n");
  EXPECT_EQ(parse_cooc_tsv(text), stats);
}

TEST(CoocTsv, RejectsMalformed) {
  EXPECT_THROW(parse_cooc_tsv("a\t1\n"), DomainError);
  EXPECT_THROW(parse_cooc_tsv("#unigram\na\t1\nb\t1\n"), DomainError);
  EXPECT_THROW(parse_cooc_tsv("#unigram\na\t1\nb\t1\n#pairs\n\ta\tb\na\t0\t1\nb\t2\t0\n"), DomainError);
  EXPECT_THROW(parse_cooc_tsv("#unigram\na\t1\nb\tx\n#pairs\n\ta\tb\na\t0\t1\nb\t1\t0\n"), DomainError);
}

TEST(AssocTsv, RoundTripIsExact) {
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    auto m = xlex::testing::random_matrix(2 + rng.below(10), rng);
    m.measure = AssocMeasure::kMiNoLog;
    EXPECT_EQ(parse_assoc_tsv(format_assoc_tsv(m)), m);
  }
}

TEST(AssocTsv, WithoutMetadata) {
  const auto m = parse_assoc_tsv("\tx\ty\nx\t0\t2\ny\t2\t0\n");
  EXPECT_FALSE(m.measure.has_value());
  EXPECT_TRUE(m.normalized);
  EXPECT_EQ(m(0, 1), 2.0);
  EXPECT_THROW(parse_assoc_tsv("\tx\ty\nx\t0\t2\ny\t1\t0\n"), DomainError);  // asymmetric
  EXPECT_THROW(parse_assoc_tsv("\tx\ty\nx\t0\t-2\ny\t-2\t0\n"), DomainError);
}

TEST(PermutationText, RoundTrip) {
  const Permutation p({2, 0, 1, 3});
  EXPECT_EQ(format_permutation(p), "2 0 1 3\n");
  EXPECT_EQ(parse_permutation(format_permutation(p)), p);
  EXPECT_THROW(parse_permutation("0 0"), DomainError);
}

TEST(CurveCsv, RoundTrip) {
  SimulationCurve c{AssocMeasure::kRaw, 10, {{0, 0, 0, 0, 1}, {2, 1.0 / 3.0, 0.1, 0.7, 50}}, 1};
  const auto text = format_curve_csv(c);
  EXPECT_TRUE(text.starts_with("c,mean_s,min_s,max_s,n_samples\n0,0,0,0,1\n"));
  EXPECT_EQ(parse_curve_csv(text), c.points);
}

TEST(Anchors, ParsesWordsAndComments) {
  const Vocabulary src(xlex::testing::kEnglish), dst(xlex::testing::kGerman);
  const auto a = parse_anchors("# known\nsky\thimmel\n\nschool\tschule\n", src, dst);
  ASSERT_EQ(a.pairs.size(), 2u);
  EXPECT_EQ(a.pairs[0], (std::pair<std::size_t, std::size_t>{4, 2}));
  EXPECT_EQ(a.pairs[1], (std::pair<std::size_t, std::size_t>{3, 5}));
}

TEST(Anchors, MalformedLineNumber) {
  const Vocabulary src(xlex::testing::kEnglish), dst(xlex::testing::kGerman);
  try {
    parse_anchors("sky\thimmel\nschool schule\n", src, dst);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_TRUE(std::string(e.what()).starts_with("line 2:"));
  }
  EXPECT_THROW(parse_anchors("cloud\thimmel\n", src, dst), DomainError);
  EXPECT_THROW(parse_anchors("sky\thimmel\nsky\tschule\n", src, dst), DomainError);
}

TEST(MatchTsv, RoundTrip) {
  const auto e = xlex::testing::table1_english(), g = xlex::testing::table1_german();
  MatchConfig cfg;
  cfg.restarts = 5;
  const auto r = match(e, g, AnchorSet{{{4, 2}, {3, 5}}}, cfg);
  const auto table = to_match_table(r, e.vocab, g.vocab);
  const auto text = format_match_tsv(table);
  EXPECT_TRUE(text.starts_with("source_word\ttarget_word\treliability\tanchored\nblue\tblau\t"));
  EXPECT_NE(text.find("# s = 0, restarts = 6, converged = 6\n"), std::string::npos);
  EXPECT_EQ(parse_match_tsv(text), table);
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_THROW(read_file("/nonexistent/dir/file.txt"), IoError);
  EXPECT_THROW(write_file("/nonexistent/dir/file.txt", "x"), IoError);
}
