// Independent reference computations used to check the library.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "codemap/embedding.hpp"

namespace oracle {

namespace fs = std::filesystem;

inline fs::path fixture_dir(const std::string& name) { return fs::path(CODEMAP_FIXTURE_DIR) / name; }

/// Fresh scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "codemap") {
    static int counter = 0;
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  void write(const std::string& rel, const std::string& content) const {
    const auto p = path_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
  }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void copy_tree(const fs::path& from, const fs::path& to) {
  fs::create_directories(to);
  fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

// ---------------------------------------------------------------- text

/// Counts every start offset where `needle` matches, character by character.
inline int naive_count(const std::string& text, const std::string& needle, bool fold_case) {
  if (needle.empty() || needle.size() > text.size()) return 0;
  int n = 0;
  for (std::size_t i = 0; i + needle.size() <= text.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < needle.size() && ok; ++j) {
      char a = text[i + j], b = needle[j];
      if (fold_case) {
        a = static_cast<char>(std::tolower(static_cast<unsigned char>(a)));
        b = static_cast<char>(std::tolower(static_cast<unsigned char>(b)));
      }
      ok = a == b;
    }
    n += ok;
  }
  return n;
}

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

inline int naive_word_count(const std::string& text, const std::string& word) {
  int n = 0;
  for (std::size_t i = 0; i + word.size() <= text.size(); ++i) {
    if (text.compare(i, word.size(), word) != 0) continue;
    const bool left = i == 0 || !ident_char(text[i - 1]);
    const bool right = i + word.size() == text.size() || !ident_char(text[i + word.size()]);
    n += left && right;
  }
  return n;
}

/// 1-based line numbers containing at least one case-folded match.
inline std::vector<int> naive_lines(const std::string& text, const std::string& needle) {
  std::vector<int> lines;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (naive_count(line, needle, true) > 0) lines.push_back(no);
  }
  return lines;
}

// ---------------------------------------------------------------- geometry

inline Eigen::MatrixXd as_matrix(const std::vector<codemap::embed::Point>& pts) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = pts[i].x;
    m(static_cast<Eigen::Index>(i), 1) = pts[i].y;
  }
  return m;
}

inline Eigen::MatrixXd euclidean_distances(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  return d;
}

/// Root-mean-square residual after the best rigid motion (rotation or
/// reflection plus translation, no scaling) of `b` onto `a`.
inline double procrustes_rms(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::RowVectorXd ca = a.colwise().mean(), cb = b.colwise().mean();
  const Eigen::MatrixXd a0 = a.rowwise() - ca, b0 = b.rowwise() - cb;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b0.transpose() * a0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd r = svd.matrixU() * svd.matrixV().transpose();
  const Eigen::MatrixXd aligned = b0 * r;
  return std::sqrt((aligned - a0).squaredNorm() / static_cast<double>(a.rows()));
}

/// Mean per-point distance after rigid alignment of `b` onto `a`.
inline double procrustes_mean_displacement(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::RowVectorXd ca = a.colwise().mean(), cb = b.colwise().mean();
  const Eigen::MatrixXd a0 = a.rowwise() - ca, b0 = b.rowwise() - cb;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b0.transpose() * a0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd aligned = b0 * (svd.matrixU() * svd.matrixV().transpose());
  return (aligned - a0).rowwise().norm().mean();
}

inline double mean_displacement(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).rowwise().norm().mean();
}

/// Floyd-Warshall over a dense weight matrix (inf = no edge).
inline Eigen::MatrixXd floyd_warshall(Eigen::MatrixXd w) {
  const auto n = w.rows();
  for (Eigen::Index i = 0; i < n; ++i) w(i, i) = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) w(i, j) = std::min(w(i, j), w(i, k) + w(k, j));
  return w;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

/// Raw stress written out pair by pair.
inline double naive_stress(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& x,
                           const Eigen::MatrixXd& w = {}) {
  double s = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      const double wij = w.size() ? w(i, j) : 1.0;
      const double r = (x.row(i) - x.row(j)).norm() - delta(i, j);
      s += wij * r * r;
    }
  return s;
}

/// Random symmetric dissimilarities in (0.05, 1] with a zero diagonal.
inline Eigen::MatrixXd random_dissimilarities(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
  return d;
}

/// Smooth random field: a handful of Gaussian bumps with random centres,
/// widths and signs, shifted to be non-negative and scaled to peak 1.
inline std::vector<double> random_smooth_field(int r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int bumps = 3 + static_cast<int>(u(rng) * 6);
  std::vector<double> cx(bumps), cy(bumps), s(bumps), a(bumps);
  for (int b = 0; b < bumps; ++b) {
    cx[b] = -0.1 + 1.2 * u(rng);
    cy[b] = -0.1 + 1.2 * u(rng);
    s[b] = 0.05 + 0.2 * u(rng);
    a[b] = u(rng) < 0.8 ? 1.0 : -0.5;
  }
  std::vector<double> h(static_cast<std::size_t>(r) * r);
  for (int row = 0; row < r; ++row)
    for (int col = 0; col < r; ++col) {
      const double x = (col + 0.5) / r, y = (row + 0.5) / r;
      double v = 0;
      for (int b = 0; b < bumps; ++b)
        v += a[b] * std::exp(-((x - cx[b]) * (x - cx[b]) + (y - cy[b]) * (y - cy[b])) / (2 * s[b] * s[b]));
      h[static_cast<std::size_t>(row) * r + col] = v;
    }
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  const double l = *lo, span = *hi - *lo;
  for (auto& v : h) v = span > 0 ? (v - l) / span : 0.0;
  return h;
}

}  // namespace oracle
