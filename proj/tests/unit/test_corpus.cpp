#include "codemap/corpus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"

using namespace codemap::corpus;
using oracle::TempDir;

namespace {

/// Directory walk written without the library's glob machinery.
std::set<std::string> walk_files(const std::filesystem::path& root) {
  std::set<std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.insert(std::filesystem::relative(e.path(), root).generic_string());
  return out;
}

std::set<std::string> corpus_paths(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& f : c.files) out.insert(f.path);
  return out;
}

}  // namespace

TEST(ScanTree, EmptyDirectoryYieldsEmptyCorpus) {
  TempDir dir;
  const auto c = scan_tree(dir.path());
  EXPECT_TRUE(c.empty());
  EXPECT_TRUE(c.vocabulary.empty());
}

TEST(ScanTree, LocCountsNonBlankLines) {
  TempDir dir;
  dir.write("A.java", "class A {\n\n  int x;\n}\n");
  const auto c = scan_tree(dir.path());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.files[0].path, "A.java");
  EXPECT_EQ(c.files[0].loc, 3);
  EXPECT_EQ(c.files[0].basename, "A");
}

TEST(ScanTree, ExcludeGlobMatchesWalkOracle) {
  TempDir dir;
  dir.write("A.java", "class A {}\n");
  dir.write("B.java", "class B {}\n");
  ScanOptions opts;
  opts.exclude = {"B*"};
  auto expected = walk_files(dir.path());
  expected.erase("B.java");
  EXPECT_EQ(corpus_paths(scan_tree(dir.path(), opts)), expected);
}

TEST(ScanTree, IncludeAndExcludeOnNestedTree) {
  TempDir dir;
  dir.write("src/a/One.java", "one\n");
  dir.write("src/a/Two.kt", "two\n");
  dir.write("src/b/Three.java", "three\n");
  dir.write("test/Four.java", "four\n");
  ScanOptions opts;
  opts.include = {"*.java"};
  opts.exclude = {"test/**"};
  std::set<std::string> expected;
  for (const auto& p : walk_files(dir.path()))
    if (p.ends_with(".java") && !p.starts_with("test/")) expected.insert(p);
  EXPECT_EQ(corpus_paths(scan_tree(dir.path(), opts)), expected);
}

TEST(ScanTree, FilesAreSortedByPath) {
  TempDir dir;
  for (const char* name : {"z/Z.java", "a/B.java", "a/A.java", "M.java"}) dir.write(name, "x\n");
  const auto c = scan_tree(dir.path());
  ASSERT_EQ(c.size(), 4u);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c.files[i - 1].path, c.files[i].path);
}

TEST(ScanTree, SkipsBinaryFiles) {
  TempDir dir;
  dir.write("text.java", "class T {}\n");
  dir.write("blob.bin", std::string("ab\0cd", 5));
  const auto c = scan_tree(dir.path());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.files[0].path, "text.java");
}

TEST(ScanTree, NulAfterFirst8KiBIsNotBinary) {
  std::string late(9000, 'a');
  late[8500] = '\0';
  EXPECT_FALSE(looks_binary(late));
  late[100] = '\0';
  EXPECT_TRUE(looks_binary(late));
}

TEST(ScanTree, MissingRootThrows) {
  EXPECT_THROW(scan_tree("/nonexistent/codemap/root"), std::runtime_error);
}

TEST(ScanTree, RescanSerializesIdentically) {
  const auto a = to_json(scan_tree(oracle::fixture_dir("sample10"))).dump();
  const auto b = to_json(scan_tree(oracle::fixture_dir("sample10"))).dump();
  EXPECT_EQ(a, b);
}

TEST(ScanTree, VocabularyMatchesNaiveRecount) {
  const auto c = scan_tree(oracle::fixture_dir("sample10"));
  std::map<std::string, int> df;
  for (const auto& tokens : c.tokens)
    for (const auto& [term, count] : tokens) {
      ASSERT_GE(count, 1);
      ++df[term];
    }
  EXPECT_EQ(df, c.vocabulary);
  for (const auto& [term, n] : c.vocabulary) EXPECT_LE(n, static_cast<int>(c.size()));
}

TEST(Glob, ComponentAndPathPatterns) {
  EXPECT_TRUE(glob_match("*.java", "src/a/B.java"));
  EXPECT_FALSE(glob_match("*.java", "src/a/B.javax"));
  EXPECT_TRUE(glob_match("src/*/B.java", "src/a/B.java"));
  EXPECT_FALSE(glob_match("src/*.java", "src/a/B.java"));
  EXPECT_TRUE(glob_match("src/**/B.java", "src/a/b/c/B.java"));
  EXPECT_TRUE(glob_match("src/**", "src/a/b"));
  EXPECT_TRUE(glob_match("B?.java", "B1.java"));
  EXPECT_TRUE(glob_match("build", "a/build/x.java"));
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, CamelCaseWithStopwords) {
  // "or" is an English stopword; "default" is also a Java keyword, so the
  // plain-English list keeps it and the Java list drops it.
  const TermCounts english = tokenize("getSettingOrDefault MenuAction", {});
  const TermCounts expected{{"get", 1}, {"setting", 1}, {"default", 1}, {"menu", 1}, {"action", 1}};
  EXPECT_EQ(english, expected);

  TermCounts java_expected = expected;
  java_expected.erase("default");
  EXPECT_EQ(tokenize("getSettingOrDefault MenuAction", {"java"}), java_expected);
}

TEST(Tokenize, UnderscoreAndDigitBoundaries) {
  const TermCounts expected{{"foo", 1}, {"bar", 1}, {"baz", 1}};
  EXPECT_EQ(tokenize("foo_bar2Baz"), expected);
}

TEST(Tokenize, AcronymsSplitBeforeTrailingWord) {
  const TermCounts expected{{"http", 1}, {"server", 1}};
  EXPECT_EQ(tokenize("HTTPServer"), expected);
}

TEST(Tokenize, CountsRepeatsAndDropsShortTerms) {
  const TermCounts t = tokenize("x socket socketBuffer a1 b");
  const TermCounts expected{{"socket", 2}, {"buffer", 1}};
  EXPECT_EQ(t, expected);
}

TEST(Tokenize, IdempotentOnJoinedOutput) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> parts{"get", "HTTP", "Server", "_", "2", "menuAction", "XMLParser", "foo",
                                       "bar", "or", "the", "SocketBuffer", "io"};
  std::uniform_int_distribution<std::size_t> pick(0, parts.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int k = 0; k < 12; ++k) text += parts[pick(rng)] + (k % 3 == 0 ? " " : "");
    const TermCounts once = tokenize(text);
    std::string joined;
    for (const auto& [term, count] : once)
      for (int c = 0; c < count; ++c) joined += term + " ";
    EXPECT_EQ(tokenize(joined), once) << text;
  }
}

TEST(Tokenize, LanguageKeywordLists) {
  EXPECT_TRUE(is_stopword("public", {"java"}));
  EXPECT_FALSE(is_stopword("public", {}));
  EXPECT_TRUE(is_stopword("the", {}));
  EXPECT_TRUE(is_stopword("namespace", {"cpp"}));
  EXPECT_TRUE(is_stopword("lambda", {"python"}));
  EXPECT_TRUE(language_keywords("cobol").empty());
}

TEST(Vectors, SingleTermNormalizesToOne) {
  const auto c = make_corpus({{"a.txt", "alpha alpha alpha", 1, "a"}});
  const auto vs = build_vectors(c);
  ASSERT_EQ(vs.size(), 1u);
  ASSERT_EQ(vs.vectors[0].size(), 1u);
  EXPECT_DOUBLE_EQ(vs.vectors[0].at("alpha"), 1.0);
}

TEST(Vectors, IdenticalMultisetsGiveIdenticalVectors) {
  const auto c = make_corpus({{"a.txt", "kernel socket kernel", 1, "a"}, {"b.txt", "socket kernel kernel", 1, "b"},
                              {"c.txt", "buffer", 1, "c"}});
  const auto vs = build_vectors(c);
  EXPECT_EQ(vs.vectors[0], vs.vectors[1]);
}

TEST(Vectors, HandEvaluatedTwoFileCorpus) {
  // Files share "kernel" (df 2) and each has one private term (df 1):
  // w_shared = ln(1 + 2/2) = ln 2, w_private = ln(1 + 2/1) = ln 3.
  const auto c = make_corpus({{"a.txt", "kernel socket", 1, "a"}, {"b.txt", "kernel buffer", 1, "b"}});
  const auto vs = build_vectors(c);
  const double shared = std::log(2.0), priv = std::log(3.0);
  const double norm = std::sqrt(shared * shared + priv * priv);
  EXPECT_NEAR(vs.vectors[0].at("kernel"), shared / norm, 1e-12);
  EXPECT_NEAR(vs.vectors[0].at("socket"), priv / norm, 1e-12);
  EXPECT_NEAR(vs.vectors[1].at("buffer"), priv / norm, 1e-12);
}

TEST(Vectors, TfidfFormula) {
  EXPECT_NEAR(tfidf_weight(1, 1, 1), std::log(2.0), 1e-15);
  EXPECT_NEAR(tfidf_weight(3, 2, 10), (1 + std::log(3.0)) * std::log(6.0), 1e-12);
}

TEST(Vectors, UnitNormAndEmptyFlags) {
  const auto c = make_corpus({{"a.txt", "kernel socket socket", 1, "a"}, {"b.txt", "the of", 1, "b"},
                              {"c.txt", "socket buffer buffer buffer", 1, "c"}});
  const auto vs = build_vectors(c);
  ASSERT_EQ(vs.size(), 3u);
  EXPECT_TRUE(vs.empty[1]);
  EXPECT_TRUE(vs.vectors[1].empty());
  for (std::size_t i : {0u, 2u}) {
    double sq = 0;
    for (const auto& [t, w] : vs.vectors[i]) sq += w * w;
    EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-9);
  }
}

TEST(Corpus, DuplicatePathsRejected) {
  EXPECT_THROW(make_corpus({{"a.txt", "x", 1, "a"}, {"a.txt", "y", 1, "a"}}), std::invalid_argument);
}

TEST(Corpus, JsonShape) {
  const auto c = make_corpus({{"b.txt", "socket", 1, "b"}, {"a.txt", "socket kernel", 1, "a"}});
  const auto j = to_json(c);
  ASSERT_EQ(j["files"].size(), 2u);
  EXPECT_EQ(j["files"][0]["path"], "a.txt");
  EXPECT_EQ(j["files"][0]["terms"]["socket"], 1);
  EXPECT_EQ(j["vocabulary"]["socket"], 2);
  EXPECT_EQ(c.index_of("b.txt"), 1);
  EXPECT_EQ(c.index_of("zzz"), -1);
}

TEST(Corpus, LoadPathsWarnsOnMissing) {
  TempDir dir;
  dir.write("A.java", "alpha\n");
  const auto c = load_paths(dir.path(), {"A.java", "Gone.java"});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.warnings.size(), 1u);
  EXPECT_EQ(c.files[c.index_of("Gone.java")].content, "");
}
