#include "codemap/xref.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <stdexcept>
#include <unordered_map>

namespace codemap::xref {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool equal_ci(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (lower(a[i]) != lower(b[i])) return false;
  return true;
}

std::vector<int> line_numbers(std::string_view text, const std::vector<std::size_t>& offsets) {
  std::vector<int> lines;
  int line = 1;
  std::size_t pos = 0;
  for (auto off : offsets) {
    for (; pos < off; ++pos)
      if (text[pos] == '\n') ++line;
    if (lines.empty() || lines.back() != line) lines.push_back(line);
  }
  return lines;
}

}  // namespace

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

std::vector<std::size_t> find_occurrences(std::string_view text, std::string_view needle,
                                          SearchMode mode) {
  std::vector<std::size_t> out;
  if (needle.empty() || needle.size() > text.size()) return out;
  for (std::size_t i = 0; i + needle.size() <= text.size(); ++i) {
    const auto window = text.substr(i, needle.size());
    if (mode == SearchMode::plain) {
      if (equal_ci(window, needle)) out.push_back(i);
      continue;
    }
    if (window != needle) continue;
    if (i > 0 && is_identifier_char(text[i - 1])) continue;
    const std::size_t end = i + needle.size();
    if (end < text.size() && is_identifier_char(text[end])) continue;
    out.push_back(i);
  }
  return out;
}

XrefGraph extract_references(const corpus::Corpus& c) {
  XrefGraph g;
  const int n = static_cast<int>(c.size());
  g.labels.reserve(n);
  std::unordered_map<std::string, std::vector<int>> by_basename;
  for (int i = 0; i < n; ++i) {
    g.labels.push_back(c.files[i].path);
    by_basename[c.files[i].basename].push_back(i);
  }
  for (int a = 0; a < n; ++a) {
    const std::string& text = c.files[a].content;
    std::unordered_map<std::string_view, int> mentions;
    std::size_t i = 0;
    while (i < text.size()) {
      if (!is_identifier_char(text[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < text.size() && is_identifier_char(text[j])) ++j;
      const std::string_view word(text.data() + i, j - i);
      if (by_basename.count(std::string(word))) ++mentions[word];
      i = j;
    }
    for (const auto& [word, count] : mentions)
      for (int b : by_basename.at(std::string(word)))
        if (b != a) g.edges[{a, b}] += count;
  }
  return g;
}

std::vector<CallerCount> callers_of(std::string_view symbol, const corpus::Corpus& c) {
  if (symbol.empty()) throw std::invalid_argument("callers_of: empty symbol");
  std::vector<CallerCount> out;
  for (int i = 0; i < static_cast<int>(c.size()); ++i) {
    const auto hits = find_occurrences(c.files[i].content, symbol, SearchMode::identifier);
    if (!hits.empty()) out.push_back({i, static_cast<int>(hits.size())});
  }
  return out;
}

SearchHits search(std::string_view query, const corpus::Corpus& c, SearchMode mode) {
  if (query.empty()) throw std::invalid_argument("search: empty query");
  SearchHits hits{std::string(query), mode, {}};
  for (int i = 0; i < static_cast<int>(c.size()); ++i) {
    const auto& text = c.files[i].content;
    const auto offsets = find_occurrences(text, query, mode);
    if (offsets.empty()) continue;
    hits.files.push_back(
        {i, c.files[i].path, static_cast<int>(offsets.size()), line_numbers(text, offsets)});
  }
  return hits;
}

int declaring_file(std::string_view symbol, const corpus::Corpus& c) {
  if (auto hash = symbol.find('#'); hash != std::string_view::npos) {
    const auto owner = symbol.substr(0, hash);
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
      if (c.files[i].basename == owner) return i;
    symbol = symbol.substr(hash + 1);
  }
  for (int i = 0; i < static_cast<int>(c.size()); ++i)
    if (c.files[i].basename == symbol) return i;

  const auto mentions = callers_of(symbol, c);
  if (mentions.empty()) return -1;

  std::string escaped;
  for (char ch : symbol) {
    if (std::string_view("\\^$.|?*+()[]{}").find(ch) != std::string_view::npos) escaped += '\\';
    escaped += ch;
  }
  const std::regex decl("(^|[^A-Za-z0-9_$])" + escaped + R"(\s*\([^;]*\)\s*(throws[^;{]*)?\{)");
  for (const auto& m : mentions) {
    const auto& text = c.files[m.fileIndex].content;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      if (std::regex_search(text.begin() + static_cast<long>(start),
                            text.begin() + static_cast<long>(end), decl))
        return m.fileIndex;
      start = end + 1;
    }
  }
  const auto best = std::max_element(mentions.begin(), mentions.end(),
                                     [](const CallerCount& a, const CallerCount& b) {
                                       return a.count < b.count;
                                     });
  return best->fileIndex;
}

SearchMode parse_mode(std::string_view s) {
  if (s.empty() || s == "plain") return SearchMode::plain;
  if (s == "identifier") return SearchMode::identifier;
  throw std::invalid_argument("unknown search mode: " + std::string(s));
}

std::string_view mode_name(SearchMode m) {
  return m == SearchMode::plain ? "plain" : "identifier";
}

nlohmann::json to_json(const SearchHits& h) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : h.files)
    files.push_back(
        {{"fileIndex", f.fileIndex}, {"path", f.path}, {"count", f.count}, {"lines", f.lines}});
  return {{"query", h.query}, {"mode", mode_name(h.mode)}, {"files", files}};
}

nlohmann::json to_json(const XrefGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [e, w] : g.edges)
    edges.push_back({{"from", g.labels[e.first]}, {"to", g.labels[e.second]}, {"weight", w}});
  return {{"labels", g.labels}, {"edges", edges}};
}

}  // namespace codemap::xref
