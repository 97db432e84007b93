#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "codemap/corpus.hpp"

namespace codemap::xref {

/// Approximate reference graph: A -> B when A's text mentions B's basename as
/// a whole identifier. Edge weight is the number of mentions.
struct XrefGraph {
  std::vector<std::string> labels;
  std::map<std::pair<int, int>, int> edges;  // (from, to) -> weight

  int n() const { return static_cast<int>(labels.size()); }
};

enum class SearchMode { plain, identifier };

struct FileHits {
  int fileIndex = 0;
  std::string path;
  int count = 0;
  std::vector<int> lines;  // 1-based, ascending, unique
};

struct SearchHits {
  std::string query;
  SearchMode mode = SearchMode::plain;
  std::vector<FileHits> files;  // corpus order
};

struct CallerCount {
  int fileIndex = 0;
  int count = 0;
};

bool is_identifier_char(char c);

/// Start offsets of `needle` in `text`. Plain mode compares ASCII
/// case-insensitively and counts overlapping matches; identifier mode is
/// case-sensitive and requires non-identifier characters on both sides.
std::vector<std::size_t> find_occurrences(std::string_view text, std::string_view needle,
                                          SearchMode mode);

XrefGraph extract_references(const corpus::Corpus& c);
/// Throws std::invalid_argument for an empty symbol.
std::vector<CallerCount> callers_of(std::string_view symbol, const corpus::Corpus& c);
/// Throws std::invalid_argument for an empty query.
SearchHits search(std::string_view query, const corpus::Corpus& c, SearchMode mode);

/// Picks the file that most plausibly declares `symbol`: an exact basename
/// match, else a file with a `symbol(...) {` line, else the most mentions.
/// Accepts `Class#member` to name the declaring file explicitly. Returns -1
/// when nothing mentions the symbol.
int declaring_file(std::string_view symbol, const corpus::Corpus& c);

SearchMode parse_mode(std::string_view s);
std::string_view mode_name(SearchMode m);
nlohmann::json to_json(const SearchHits& h);
nlohmann::json to_json(const XrefGraph& g);

}  // namespace codemap::xref
