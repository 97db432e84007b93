#include "codemap/metricspace.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "codemap/xref.hpp"

namespace codemap::metric {

namespace {
constexpr double kHopStep = 0.1;
}

void check_invariants(const DissimilarityMatrix& d, bool bounded) {
  const auto n = d.values.rows();
  if (d.values.cols() != n) throw std::logic_error("dissimilarity matrix is not square");
  if (static_cast<Eigen::Index>(d.labels.size()) != n)
    throw std::logic_error("dissimilarity labels do not match matrix size");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d.values(i, i) != 0.0) throw std::logic_error("nonzero dissimilarity diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = d.values(i, j);
      if (v != d.values(j, i)) throw std::logic_error("asymmetric dissimilarity matrix");
      if (!std::isfinite(v) || v < 0.0 || (bounded && v > 1.0))
        throw std::logic_error("dissimilarity out of range");
    }
  }
}

double cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, w] : a) na += w * w;
  for (const auto& [t, w] : b) nb += w * w;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

DissimilarityMatrix lexical_dissimilarity(const corpus::VectorSpace& vs) {
  const int n = static_cast<int>(vs.size());
  DissimilarityMatrix d{vs.labels, Eigen::MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = 1.0;
      if (!vs.empty[i] && !vs.empty[j])
        v = std::clamp(1.0 - cosine(vs.vectors[i], vs.vectors[j]), 0.0, 1.0);
      d.values(i, j) = d.values(j, i) = v;
    }
  }
  check_invariants(d);
  return d;
}

DissimilarityMatrix reference_distance(const xref::XrefGraph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [edge, w] : g.edges) {
    adj[edge.first].push_back(edge.second);
    adj[edge.second].push_back(edge.first);
  }
  DissimilarityMatrix d{g.labels, Eigen::MatrixXd::Zero(n, n)};
  std::vector<int> hops(n);
  for (int s = 0; s < n; ++s) {
    std::fill(hops.begin(), hops.end(), -1);
    hops[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj[u])
        if (hops[v] < 0) {
          hops[v] = hops[u] + 1;
          queue.push_back(v);
        }
    }
    for (int t = 0; t < n; ++t) {
      if (t == s) continue;
      d.values(s, t) = hops[t] < 0 ? 1.0 : std::min(1.0, kHopStep * hops[t]);
    }
  }
  check_invariants(d);
  return d;
}

DissimilarityMatrix blend(const DissimilarityMatrix& lexical, const DissimilarityMatrix& structural,
                          double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("blend alpha must lie in [0,1]");
  if (lexical.labels != structural.labels || lexical.values.rows() != structural.values.rows())
    throw std::invalid_argument("blend: matrices cover different files");
  DissimilarityMatrix d{lexical.labels, {}};
  if (alpha == 0.0) {
    d.values = lexical.values;
  } else if (alpha == 1.0) {
    d.values = structural.values;
  } else {
    d.values = alpha * structural.values + (1.0 - alpha) * lexical.values;
    d.values = d.values.cwiseMax(0.0).cwiseMin(1.0);
  }
  check_invariants(d);
  return d;
}

nlohmann::json to_json(const DissimilarityMatrix& d) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < d.n(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < d.n(); ++j) row.push_back(d.values(i, j));
    rows.push_back(std::move(row));
  }
  return {{"labels", d.labels}, {"values", rows}};
}

}  // namespace codemap::metric
