#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace codemap::corpus {

using TermCounts = std::map<std::string, int>;

struct SourceFile {
  std::string path;      // repo-relative, '/' separated
  std::string content;
  int loc = 0;           // non-blank lines
  std::string basename;  // file name without its last extension
};

struct ScanWarning {
  std::string path;
  std::string message;
};

/// A tokenized source tree. Files are sorted by path and the per-file term
/// multisets are index-aligned with `files`.
struct Corpus {
  std::vector<SourceFile> files;
  std::vector<TermCounts> tokens;
  std::map<std::string, int> vocabulary;  // term -> document frequency
  std::vector<ScanWarning> warnings;

  std::size_t size() const { return files.size(); }
  bool empty() const { return files.empty(); }
  /// Index of `path`, or -1.
  int index_of(std::string_view path) const;
};

struct ScanOptions {
  std::vector<std::string> include;  // empty: every file
  std::vector<std::string> exclude;
  std::vector<std::string> languages{"java"};  // keyword lists added to the stopwords
};

/// gitignore-flavoured matching: a pattern without '/' is tested against every
/// path component, one with '/' against the whole relative path. `*` and `?`
/// never cross '/', `**` does.
bool glob_match(std::string_view pattern, std::string_view path);
bool path_selected(std::string_view rel_path, const ScanOptions& opts);

int count_loc(std::string_view content);
std::string basename_of(std::string_view path);
bool looks_binary(std::string_view bytes);

/// Splits identifiers at camelCase, underscore and digit boundaries, lowercases,
/// drops terms under two characters and stopwords.
TermCounts tokenize(std::string_view content,
                    const std::vector<std::string>& languages = {"java"});

bool is_stopword(std::string_view term, const std::vector<std::string>& languages);
const std::vector<std::string_view>& english_stopwords();
/// Keyword list for a language name ("java", "cpp", "python"); unknown names
/// yield an empty list.
const std::vector<std::string_view>& language_keywords(std::string_view language);

/// Throws std::runtime_error if `root` is not a readable directory.
Corpus scan_tree(const std::filesystem::path& root, const ScanOptions& opts = {});

/// Assembles a corpus from in-memory files (sorted by path, tokenized).
Corpus make_corpus(std::vector<SourceFile> files,
                   const std::vector<std::string>& languages = {"java"});

/// Reads exactly the listed paths below `root`; missing files keep empty
/// content and add a warning.
Corpus load_paths(const std::filesystem::path& root, const std::vector<std::string>& paths,
                  const std::vector<std::string>& languages = {"java"});

nlohmann::json to_json(const Corpus& c);

/// Sparse unit-length tf-idf vectors, index-aligned with the corpus files.
struct VectorSpace {
  std::vector<std::string> labels;
  std::vector<std::map<std::string, double>> vectors;
  std::vector<bool> empty;  // file had no terms; its vector is empty

  std::size_t size() const { return vectors.size(); }
};

double tfidf_weight(int tf, int df, std::size_t n_files);
VectorSpace build_vectors(const Corpus& c);

}  // namespace codemap::corpus
