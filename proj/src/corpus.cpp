#include "codemap/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fs = std::filesystem;

namespace codemap::corpus {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Matches one path segment (no '/') against a pattern segment with * and ?.
bool match_segment(std::string_view pat, std::string_view s) {
  std::size_t p = 0, i = 0, star = std::string_view::npos, mark = 0;
  while (i < s.size()) {
    if (p < pat.size() && (pat[p] == '?' || pat[p] == s[i])) {
      ++p;
      ++i;
    } else if (p < pat.size() && pat[p] == '*') {
      star = p++;
      mark = i;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      i = ++mark;
    } else {
      return false;
    }
  }
  while (p < pat.size() && pat[p] == '*') ++p;
  return p == pat.size();
}

std::vector<std::string_view> split_path(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto slash = s.find('/', start);
    if (slash == std::string_view::npos) slash = s.size();
    if (slash > start) out.push_back(s.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

bool match_parts(const std::vector<std::string_view>& pat, std::size_t pi,
                 const std::vector<std::string_view>& path, std::size_t si) {
  if (pi == pat.size()) return si == path.size();
  if (pat[pi] == "**") {
    for (std::size_t k = si; k <= path.size(); ++k)
      if (match_parts(pat, pi + 1, path, k)) return true;
    return false;
  }
  if (si == path.size()) return false;
  return match_segment(pat[pi], path[si]) && match_parts(pat, pi + 1, path, si + 1);
}

std::string read_file(const fs::path& p, bool& ok) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    ok = false;
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  ok = !in.bad();
  return ss.str();
}

void append_term(std::string term, const std::vector<std::string>& languages, TermCounts& out) {
  if (term.size() < 2) return;
  for (auto& ch : term) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (is_stopword(term, languages)) return;
  ++out[term];
}

// Splits one identifier run (letters, digits, underscores).
void split_identifier(std::string_view word, const std::vector<std::string>& languages,
                      TermCounts& out) {
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) append_term(std::move(cur), languages, out);
    cur.clear();
  };
  for (std::size_t i = 0; i < word.size(); ++i) {
    const char c = word[i];
    if (c == '_' || is_digit(c)) {
      flush();
      continue;
    }
    if (is_upper(c) && !cur.empty()) {
      const char prev = word[i - 1];
      const bool next_lower = i + 1 < word.size() && is_lower(word[i + 1]);
      // fooBar -> foo|Bar ; HTTPServer -> HTTP|Server
      if (is_lower(prev) || (is_upper(prev) && next_lower)) flush();
    }
    cur.push_back(c);
  }
  flush();
}

void finish_vocabulary(Corpus& c) {
  c.vocabulary.clear();
  for (const auto& terms : c.tokens)
    for (const auto& [term, count] : terms) ++c.vocabulary[term];
}

}  // namespace

int Corpus::index_of(std::string_view path) const {
  auto it = std::lower_bound(files.begin(), files.end(), path,
                             [](const SourceFile& f, std::string_view p) { return f.path < p; });
  if (it == files.end() || it->path != path) return -1;
  return static_cast<int>(it - files.begin());
}

bool glob_match(std::string_view pattern, std::string_view path) {
  if (pattern.find('/') == std::string_view::npos) {
    for (auto part : split_path(path))
      if (match_segment(pattern, part)) return true;
    return false;
  }
  return match_parts(split_path(pattern), 0, split_path(path), 0);
}

bool path_selected(std::string_view rel_path, const ScanOptions& opts) {
  bool included = opts.include.empty();
  for (const auto& g : opts.include)
    if (glob_match(g, rel_path)) {
      included = true;
      break;
    }
  if (!included) return false;
  for (const auto& g : opts.exclude)
    if (glob_match(g, rel_path)) return false;
  return true;
}

int count_loc(std::string_view content) {
  int loc = 0;
  bool blank = true;
  for (char c : content) {
    if (c == '\n') {
      if (!blank) ++loc;
      blank = true;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      blank = false;
    }
  }
  if (!blank) ++loc;
  return loc;
}

std::string basename_of(std::string_view path) {
  return fs::path(std::string(path)).stem().string();
}

bool looks_binary(std::string_view bytes) {
  return bytes.substr(0, 8192).find('\0') != std::string_view::npos;
}

TermCounts tokenize(std::string_view content, const std::vector<std::string>& languages) {
  TermCounts out;
  std::size_t i = 0;
  while (i < content.size()) {
    if (!is_ident_char(content[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < content.size() && is_ident_char(content[j])) ++j;
    split_identifier(content.substr(i, j - i), languages, out);
    i = j;
  }
  return out;
}

bool is_stopword(std::string_view term, const std::vector<std::string>& languages) {
  const auto& en = english_stopwords();
  if (std::binary_search(en.begin(), en.end(), term)) return true;
  for (const auto& lang : languages) {
    const auto& kw = language_keywords(lang);
    if (std::binary_search(kw.begin(), kw.end(), term)) return true;
  }
  return false;
}

Corpus make_corpus(std::vector<SourceFile> files, const std::vector<std::string>& languages) {
  std::sort(files.begin(), files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  for (std::size_t i = 1; i < files.size(); ++i)
    if (files[i].path == files[i - 1].path)
      throw std::invalid_argument("duplicate corpus path: " + files[i].path);
  Corpus c;
  c.files = std::move(files);
  c.tokens.reserve(c.files.size());
  for (auto& f : c.files) {
    f.loc = count_loc(f.content);
    if (f.basename.empty()) f.basename = basename_of(f.path);
    c.tokens.push_back(tokenize(f.content, languages));
  }
  finish_vocabulary(c);
  return c;
}

Corpus scan_tree(const fs::path& root, const ScanOptions& opts) {
  std::error_code ec;
  if (!fs::is_directory(root, ec))
    throw std::runtime_error("cannot read source root: " + root.string());
  fs::directory_iterator probe(root, ec);
  if (ec) throw std::runtime_error("cannot read source root: " + root.string() + ": " + ec.message());

  std::vector<SourceFile> files;
  std::vector<ScanWarning> warnings;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  for (; !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    const auto& entry = *it;
    std::error_code fec;
    if (!entry.is_regular_file(fec)) continue;
    const std::string rel = entry.path().lexically_relative(root).generic_string();
    if (!path_selected(rel, opts)) continue;
    bool ok = true;
    std::string content = read_file(entry.path(), ok);
    if (!ok) {
      warnings.push_back({rel, "unreadable file skipped"});
      continue;
    }
    if (looks_binary(content)) continue;
    files.push_back({rel, std::move(content), 0, basename_of(rel)});
  }
  if (ec) warnings.push_back({"", "directory walk stopped early: " + ec.message()});

  Corpus c = make_corpus(std::move(files), opts.languages);
  c.warnings = std::move(warnings);
  return c;
}

Corpus load_paths(const fs::path& root, const std::vector<std::string>& paths,
                  const std::vector<std::string>& languages) {
  std::vector<SourceFile> files;
  std::vector<ScanWarning> warnings;
  for (const auto& p : paths) {
    bool ok = true;
    std::string content = read_file(root / p, ok);
    if (!ok) warnings.push_back({p, "missing or unreadable; served empty"});
    files.push_back({p, std::move(content), 0, basename_of(p)});
  }
  Corpus c = make_corpus(std::move(files), languages);
  c.warnings = std::move(warnings);
  return c;
}

nlohmann::json to_json(const Corpus& c) {
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < c.files.size(); ++i) {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [t, n] : c.tokens[i]) terms[t] = n;
    files.push_back({{"path", c.files[i].path}, {"loc", c.files[i].loc}, {"terms", terms}});
  }
  nlohmann::json vocab = nlohmann::json::object();
  for (const auto& [t, df] : c.vocabulary) vocab[t] = df;
  return {{"files", files}, {"vocabulary", vocab}};
}

double tfidf_weight(int tf, int df, std::size_t n_files) {
  return (1.0 + std::log(static_cast<double>(tf))) *
         std::log(1.0 + static_cast<double>(n_files) / static_cast<double>(df));
}

VectorSpace build_vectors(const Corpus& c) {
  VectorSpace vs;
  const std::size_t n = c.size();
  vs.labels.reserve(n);
  vs.vectors.resize(n);
  vs.empty.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    vs.labels.push_back(c.files[i].path);
    auto& v = vs.vectors[i];
    double norm2 = 0.0;
    for (const auto& [term, tf] : c.tokens[i]) {
      const double w = tfidf_weight(tf, c.vocabulary.at(term), n);
      v.emplace(term, w);
      norm2 += w * w;
    }
    if (norm2 == 0.0) {
      v.clear();
      vs.empty[i] = true;
      continue;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& [term, w] : v) w *= inv;
  }
  return vs;
}

}  // namespace codemap::corpus
