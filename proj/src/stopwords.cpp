#include <algorithm>
#include <string_view>
#include <vector>

#include "codemap/corpus.hpp"

namespace codemap::corpus {

namespace {

std::vector<std::string_view> sorted(std::vector<std::string_view> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

const std::vector<std::string_view>& english_stopwords() {
  static const std::vector<std::string_view> words = sorted({
      "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
      "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
      "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each",
      "few", "for", "from", "further", "had", "has", "have", "having", "he", "her", "here",
      "hers", "herself", "him", "himself", "his", "how", "if", "in", "into", "is", "it",
      "its", "itself", "just", "me", "more", "most", "my", "myself", "no", "nor", "not",
      "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves",
      "out", "over", "own", "same", "she", "should", "so", "some", "such", "than", "that",
      "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they",
      "this", "those", "through", "to", "too", "under", "until", "up", "very", "was", "we",
      "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will",
      "with", "would", "you", "your", "yours", "yourself", "yourselves",
  });
  return words;
}

const std::vector<std::string_view>& language_keywords(std::string_view language) {
  static const std::vector<std::string_view> java = sorted({
      "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class",
      "const", "continue", "default", "do", "double", "else", "enum", "extends", "final",
      "finally", "float", "for", "goto", "if", "implements", "import", "instanceof", "int",
      "interface", "long", "native", "new", "package", "private", "protected", "public",
      "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
      "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false",
      "null", "var", "record", "yield",
  });
  static const std::vector<std::string_view> cpp = sorted({
      "alignas", "alignof", "auto", "bool", "break", "case", "catch", "char", "class",
      "const", "constexpr", "const_cast", "continue", "decltype", "default", "delete", "do",
      "double", "dynamic_cast", "else", "enum", "explicit", "extern", "false", "float",
      "for", "friend", "goto", "if", "include", "inline", "int", "long", "mutable",
      "namespace", "new", "noexcept", "nullptr", "operator", "private", "protected",
      "public", "register", "reinterpret_cast", "return", "short", "signed", "sizeof",
      "static", "static_cast", "struct", "switch", "template", "this", "throw", "true",
      "try", "typedef", "typename", "union", "unsigned", "using", "virtual", "void",
      "volatile", "while", "std", "define", "ifdef", "ifndef", "endif", "pragma",
  });
  static const std::vector<std::string_view> python = sorted({
      "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del",
      "elif", "else", "except", "false", "finally", "for", "from", "global", "if", "import",
      "in", "is", "lambda", "none", "nonlocal", "not", "or", "pass", "raise", "return",
      "true", "try", "while", "with", "yield", "self",
  });
  static const std::vector<std::string_view> none;
  if (language == "java") return java;
  if (language == "cpp" || language == "c++" || language == "c") return cpp;
  if (language == "python") return python;
  return none;
}

}  // namespace codemap::corpus
