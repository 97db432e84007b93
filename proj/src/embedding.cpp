#include "codemap/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

namespace codemap::embed {

namespace {

using Coords = Eigen::Matrix<double, Eigen::Dynamic, 2>;

Coords to_coords(const std::vector<Point>& pts) {
  Coords x(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    x(static_cast<Eigen::Index>(i), 0) = pts[i].x;
    x(static_cast<Eigen::Index>(i), 1) = pts[i].y;
  }
  return x;
}

std::vector<Point> to_points(const Coords& x) {
  std::vector<Point> pts(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) pts[static_cast<std::size_t>(i)] = {x(i, 0), x(i, 1)};
  return pts;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

void add_edge(NeighborGraph& g, int a, int b, double w) {
  auto insert = [](std::vector<std::pair<int, double>>& adj, int v, double w) {
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const std::pair<int, double>& e, int key) { return e.first < key; });
    if (it == adj.end() || it->first != v) adj.insert(it, {v, w});
  };
  insert(g.adjacency[a], b, w);
  insert(g.adjacency[b], a, w);
}

double coords_stress(const Eigen::MatrixXd& delta, const Coords& x, const Eigen::MatrixXd& w) {
  const Eigen::Index n = x.rows();
  const bool weighted = w.size() != 0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double wij = weighted ? w(i, j) : 1.0;
      if (wij == 0.0) continue;
      const double r = (x.row(i) - x.row(j)).norm() - delta(i, j);
      s += wij * r * r;
    }
  return s;
}

// (B(X) X)_i = sum_j c_ij (x_i - x_j), c_ij = w_ij delta_ij / d_ij (0 when d_ij = 0).
Coords b_times_x(const Eigen::MatrixXd& delta, const Coords& x, const Eigen::MatrixXd& w) {
  const Eigen::Index n = x.rows();
  const bool weighted = w.size() != 0;
  Coords bx = Coords::Zero(n, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::RowVector2d diff = x.row(i) - x.row(j);
      const double dist = diff.norm();
      if (dist == 0.0) continue;
      const double c = (weighted ? w(i, j) : 1.0) * delta(i, j) / dist;
      bx.row(i) += c * diff;
      bx.row(j) -= c * diff;
    }
  return bx;
}

// Laplacian-style V = sum_{i<j} w_ij (e_i - e_j)(e_i - e_j)^T.
Eigen::MatrixXd v_matrix(Eigen::Index n, const Eigen::MatrixXd& w) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double wij = w.size() != 0 ? w(i, j) : 1.0;
      v(i, j) = -wij;
      v(i, i) += wij;
    }
  return v;
}

double spread(const std::vector<Point>& pts, bool along_x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : pts) {
    const double v = along_x ? p.x : p.y;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return pts.empty() ? 0.0 : hi - lo;
}

// Least-squares factor c minimizing sum_{i<j} (c * |x_i - x_j| - delta_ij)^2.
double fit_scale(const Eigen::MatrixXd& delta, const std::vector<Point>& pts) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dij = distance(pts[i], pts[j]);
      num += dij * delta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      den += dij * dij;
    }
  return den > 0.0 ? num / den : 1.0;
}

// Factor that carries dissimilarities into the frame of `pts`.
double frame_scale(const Eigen::MatrixXd& delta, const std::vector<Point>& pts) {
  const double c = fit_scale(delta, pts);
  return c > 0.0 ? 1.0 / c : 1.0;
}

void scale_about_centroid(std::vector<Point>& pts, double c) {
  Point mean{};
  for (const auto& p : pts) {
    mean.x += p.x;
    mean.y += p.y;
  }
  mean.x /= static_cast<double>(pts.size());
  mean.y /= static_cast<double>(pts.size());
  for (auto& p : pts) p = {(p.x - mean.x) * c, (p.y - mean.y) * c};
}

// Guards against a start configuration SMACOF cannot leave: all points
// coincident (B(X) = 0) or collinear (transforms stay on the line).
void break_degeneracy(std::vector<Point>& pts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double sx = spread(pts, true);
  const double sy = spread(pts, false);
  const double big = std::max(sx, sy);
  if (big <= 1e-12) {
    for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};
    return;
  }
  if (std::min(sx, sy) <= 1e-9 * big) {
    for (auto& p : pts) {
      const double jitter = (2.0 * uniform01(rng) - 1.0) * 1e-3 * big;
      (sx < sy ? p.x : p.y) += jitter;
    }
  }
}

}  // namespace

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool NeighborGraph::has_edge(int a, int b) const {
  const auto& adj = adjacency[a];
  return std::any_of(adj.begin(), adj.end(), [b](const auto& e) { return e.first == b; });
}

std::size_t NeighborGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& adj : adjacency) total += adj.size();
  return total / 2;
}

int default_k(int n) { return std::max(1, std::min(7, n - 1)); }

NeighborGraph knn_graph(const metric::DissimilarityMatrix& d, int k) {
  const int n = d.n();
  if (n < 2) throw std::invalid_argument("knn_graph needs at least two points");
  if (k <= 0 || k >= n) throw std::invalid_argument("knn_graph: k must satisfy 0 < k < n");
  NeighborGraph g{std::vector<std::vector<std::pair<int, double>>>(static_cast<std::size_t>(n)),
                  d.labels};
  std::vector<int> order(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    order.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
      if (d(i, a) != d(i, b)) return d(i, a) < d(i, b);
      return a < b;
    });
    for (int m = 0; m < k; ++m) add_edge(g, i, order[m], d(i, order[m]));
  }

  DisjointSets sets(n);
  int components = n;
  for (int i = 0; i < n; ++i)
    for (const auto& [j, w] : g.adjacency[i])
      if (sets.unite(i, j)) --components;
  if (components == 1) return g;

  // Kruskal over cross-component pairs == repeatedly adding the globally
  // shortest inter-component edge.
  struct Pair {
    double w;
    int a, b;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (sets.find(i) != sets.find(j)) pairs.push_back({d(i, j), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.w != y.w) return x.w < y.w;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  for (const auto& p : pairs) {
    if (components == 1) break;
    if (sets.unite(p.a, p.b)) {
      add_edge(g, p.a, p.b, p.w);
      --components;
    }
  }
  return g;
}

bool is_connected(const NeighborGraph& g) {
  if (g.n() == 0) return true;
  std::vector<bool> seen(static_cast<std::size_t>(g.n()), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& [v, w] : g.adjacency[u])
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
  }
  return count == g.n();
}

metric::DissimilarityMatrix geodesic_distances(const NeighborGraph& g) {
  if (!is_connected(g)) throw std::invalid_argument("geodesic_distances: graph is disconnected");
  const int n = g.n();
  metric::DissimilarityMatrix out{g.labels, Eigen::MatrixXd::Zero(n, n)};
  if (out.labels.size() != static_cast<std::size_t>(n)) out.labels.assign(n, std::string{});
  using Item = std::pair<double, int>;
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    dist[s] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, s});
    while (!heap.empty()) {
      const auto [du, u] = heap.top();
      heap.pop();
      if (du > dist[u]) continue;
      for (const auto& [v, w] : g.adjacency[u]) {
        const double nd = du + w;
        if (nd < dist[v]) {
          dist[v] = nd;
          heap.push({nd, v});
        }
      }
    }
    for (int t = 0; t < n; ++t) out.values(s, t) = dist[t];
  }
  // Dijkstra from each end may round differently; keep the matrix exactly symmetric.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.values(i, j) = out.values(j, i) = std::min(out.values(i, j), out.values(j, i));
  return out;
}

Layout classical_mds(const metric::DissimilarityMatrix& d) {
  const Eigen::Index n = d.values.rows();
  if (n < 2) throw std::invalid_argument("classical_mds needs at least two points");
  const Eigen::MatrixXd sq = d.values.array().square().matrix();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd b = -0.5 * centering * sq * centering;
  b = 0.5 * (b + b.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw std::runtime_error("classical_mds: eigensolver failed");

  Coords x = Coords::Zero(n, 2);
  for (int axis = 0; axis < 2; ++axis) {
    const Eigen::Index col = n - 1 - axis;
    const double lambda = std::max(0.0, eig.eigenvalues()(col));
    Eigen::VectorXd v = eig.eigenvectors().col(col);
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(pivot))) pivot = i;
    if (v(pivot) < 0.0) v = -v;
    x.col(axis) = v * std::sqrt(lambda);
  }
  Layout l;
  l.positions = to_points(x);
  return l;
}

double stress(const Eigen::MatrixXd& delta, const std::vector<Point>& x,
              const Eigen::MatrixXd& weights) {
  return coords_stress(delta, to_coords(x), weights);
}

Layout smacof(const metric::DissimilarityMatrix& d, const Layout& init,
              const std::optional<AnchorSet>& anchors, const SmacofOptions& opts) {
  const Eigen::Index n = d.values.rows();
  if (static_cast<Eigen::Index>(init.positions.size()) != n)
    throw std::invalid_argument("smacof: init size does not match the dissimilarity matrix");
  const Eigen::MatrixXd& delta = d.values;

  Eigen::MatrixXd w = opts.weights;
  if (w.size() != 0 && (w.rows() != n || w.cols() != n))
    throw std::invalid_argument("smacof: weight matrix has the wrong shape");

  Layout out;
  out.seed = init.seed;
  Coords x = to_coords(init.positions);
  std::vector<bool> fixed(static_cast<std::size_t>(n), false);
  if (anchors) {
    for (const auto& [idx, p] : anchors->entries) {
      if (idx < 0 || idx >= n) throw std::invalid_argument("smacof: anchor index out of range");
      x(idx, 0) = p.x;
      x(idx, 1) = p.y;
      if (anchors->mode == AnchorMode::hard) fixed[static_cast<std::size_t>(idx)] = true;
    }
    if (anchors->mode == AnchorMode::soft && !anchors->entries.empty()) {
      if (!(anchors->softWeight > 0.0)) throw std::invalid_argument("smacof: softWeight must be > 0");
      if (w.size() == 0) w = Eigen::MatrixXd::Ones(n, n);
      for (const auto& [idx, p] : anchors->entries) {
        w.row(idx) *= anchors->softWeight;
        w.col(idx) *= anchors->softWeight;
        w(idx, idx) /= anchors->softWeight;  // touched twice; weight once per pair
      }
      for (const auto& [a, pa] : anchors->entries)
        for (const auto& [b, pb] : anchors->entries)
          if (a != b) w(a, b) /= anchors->softWeight;
    }
  }
  if (w.size() != 0) w.diagonal().setZero();

  double current = coords_stress(delta, x, w);
  out.stressTrace.push_back(current);
  if (n < 2) {
    out.positions = to_points(x);
    return out;
  }

  // A free point without weighted pairs cannot be placed; keep it where it is.
  if (w.size() != 0)
    for (Eigen::Index i = 0; i < n; ++i)
      if (w.row(i).sum() == 0.0) fixed[static_cast<std::size_t>(i)] = true;

  std::vector<Eigen::Index> free_idx, fixed_idx;
  for (Eigen::Index i = 0; i < n; ++i)
    (fixed[static_cast<std::size_t>(i)] ? fixed_idx : free_idx).push_back(i);
  if (free_idx.empty()) {
    out.positions = to_points(x);
    return out;
  }

  const bool uniform = w.size() == 0 && fixed_idx.empty();
  Eigen::LDLT<Eigen::MatrixXd> solver;
  Eigen::MatrixXd v_free_fixed;
  if (!uniform) {
    const Eigen::MatrixXd v = v_matrix(n, w);
    if (fixed_idx.empty()) {
      // (V + 11^T/n) agrees with V on centred vectors and is invertible.
      solver.compute(v + Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n)));
    } else {
      const auto nf = static_cast<Eigen::Index>(free_idx.size());
      const auto na = static_cast<Eigen::Index>(fixed_idx.size());
      Eigen::MatrixXd vff(nf, nf);
      v_free_fixed.resize(nf, na);
      for (Eigen::Index a = 0; a < nf; ++a) {
        for (Eigen::Index b = 0; b < nf; ++b) vff(a, b) = v(free_idx[a], free_idx[b]);
        for (Eigen::Index b = 0; b < na; ++b) v_free_fixed(a, b) = v(free_idx[a], fixed_idx[b]);
      }
      solver.compute(vff);
    }
  }

  for (int iter = 0; iter < opts.maxIter && current > 0.0; ++iter) {
    const Coords bx = b_times_x(delta, x, w);
    Coords next = x;
    if (uniform) {
      next = bx / static_cast<double>(n);
    } else if (fixed_idx.empty()) {
      next = solver.solve(bx);
    } else {
      const auto nf = static_cast<Eigen::Index>(free_idx.size());
      Coords rhs(nf, 2);
      Coords anchored(static_cast<Eigen::Index>(fixed_idx.size()), 2);
      for (Eigen::Index a = 0; a < nf; ++a) rhs.row(a) = bx.row(free_idx[a]);
      for (std::size_t b = 0; b < fixed_idx.size(); ++b)
        anchored.row(static_cast<Eigen::Index>(b)) = x.row(fixed_idx[b]);
      rhs -= v_free_fixed * anchored;
      const Coords solved = solver.solve(rhs);
      for (Eigen::Index a = 0; a < nf; ++a) next.row(free_idx[a]) = solved.row(a);
    }
    const double candidate = coords_stress(delta, next, w);
    if ((current - candidate) < opts.epsRel * current) break;
    x = std::move(next);
    current = candidate;
    out.stressTrace.push_back(current);
  }
  out.positions = to_points(x);
  return out;
}

Layout normalize_layout(const Layout& l, double margin) {
  Layout out = l;
  if (l.positions.empty()) return out;
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  for (const auto& p : l.positions) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double w = maxx - minx;
  const double h = maxy - miny;
  const double span = std::max(w, h);
  if (!(span > 0.0)) {
    for (auto& p : out.positions) p = {0.5, 0.5};
    return out;
  }
  const double extent = 1.0 - 2.0 * margin;
  const double s = extent / span;
  const double ox = margin + (extent - w * s) / 2.0;
  const double oy = margin + (extent - h * s) / 2.0;
  for (auto& p : out.positions) p = {ox + (p.x - minx) * s, oy + (p.y - miny) * s};
  return out;
}

Layout fit_layout(const Layout& l, double margin) {
  Layout out = l;
  if (l.positions.empty()) return out;
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  Point c{};
  for (const auto& p : l.positions) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(l.positions.size());
  c.y /= static_cast<double>(l.positions.size());
  const double lo = margin, hi = 1.0 - margin;
  const double span = std::max(maxx - minx, maxy - miny);
  const double s = span > hi - lo ? (hi - lo) / span : 1.0;
  // Shrinking about the centroid with no shift minimizes the squared
  // displacement; clamping the shift keeps that optimum per axis.
  auto shift = [&](double a, double b) {
    return a < lo ? lo - a : (b > hi ? hi - b : 0.0);
  };
  const double dx = shift(c.x + s * (minx - c.x), c.x + s * (maxx - c.x));
  const double dy = shift(c.y + s * (miny - c.y), c.y + s * (maxy - c.y));
  for (auto& p : out.positions) p = {c.x + s * (p.x - c.x) + dx, c.y + s * (p.y - c.y) + dy};
  return out;
}

LayoutResult compute_layout(const metric::DissimilarityMatrix& d, const LayoutOptions& opts) {
  const int n = d.n();
  LayoutResult res;
  res.layout.seed = opts.seed;
  if (n == 0) return res;
  if (n == 1) {
    res.layout.positions = {{0.5, 0.5}};
    res.layout.stressTrace = {0.0};
    return res;
  }
  res.k = std::min(opts.k > 0 ? opts.k : default_k(n), n - 1);
  const auto graph = knn_graph(d, res.k);
  Layout init = classical_mds(geodesic_distances(graph));
  break_degeneracy(init.positions, opts.seed);
  scale_about_centroid(init.positions, fit_scale(d.values, init.positions));
  init.seed = opts.seed;

  Layout refined = smacof(d, init, std::nullopt, opts.smacof);
  res.layout = normalize_layout(refined, opts.margin);
  return res;
}

LayoutResult incremental_layout(const LabeledLayout& prev, const metric::DissimilarityMatrix& d,
                                const LayoutOptions& opts) {
  const int n = d.n();
  std::map<std::string, Point> previous;
  for (std::size_t i = 0; i < prev.labels.size(); ++i) previous[prev.labels[i]] = prev.positions[i];

  std::vector<int> survivors;
  std::vector<Point> init(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    if (auto it = previous.find(d.labels[i]); it != previous.end()) {
      survivors.push_back(i);
      init[i] = it->second;
    }
  if (survivors.empty()) {
    LayoutResult res = compute_layout(d, opts);
    res.incomparable = !prev.labels.empty() || n == 0;
    return res;
  }

  LayoutResult res;
  res.fresh = false;
  res.k = std::min(opts.k > 0 ? opts.k : default_k(n), std::max(n - 1, 1));
  res.layout.seed = opts.seed;

  std::vector<bool> survived(static_cast<std::size_t>(n), false);
  for (int s : survivors) survived[s] = true;
  for (int i = 0; i < n; ++i) {
    if (survived[i]) continue;
    std::vector<int> near = survivors;
    const auto take = std::min<std::size_t>(3, near.size());
    std::partial_sort(near.begin(), near.begin() + static_cast<long>(take), near.end(),
                      [&](int a, int b) {
                        if (d(i, a) != d(i, b)) return d(i, a) < d(i, b);
                        return a < b;
                      });
    Point c{};
    double total = 0.0;
    for (std::size_t m = 0; m < take; ++m) {
      const double w = 1.0 / (d(i, near[m]) + 1e-6);
      c.x += w * init[near[m]].x;
      c.y += w * init[near[m]].y;
      total += w;
    }
    init[i] = total > 0.0 ? Point{c.x / total, c.y / total} : Point{0.5, 0.5};
  }
  if (n == 1) {
    res.layout.positions = {{0.5, 0.5}};
    res.layout.stressTrace = {0.0};
    return res;
  }

  // Survivors are tethered to virtual fixed copies of their previous
  // positions; the matrix is rescaled into the previous frame instead.
  const int m = static_cast<int>(survivors.size());
  const int total = n + m;
  std::vector<Point> kept;
  Eigen::MatrixXd kept_delta(m, m);
  for (int a = 0; a < m; ++a) {
    kept.push_back(init[survivors[a]]);
    for (int b = 0; b < m; ++b) kept_delta(a, b) = d(survivors[a], survivors[b]);
  }
  const double f = frame_scale(kept_delta, kept);
  metric::DissimilarityMatrix ext{d.labels, Eigen::MatrixXd::Zero(total, total)};
  ext.values.topLeftCorner(n, n) = f * d.values;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(total, total);
  w.topLeftCorner(n, n).setOnes();
  Layout start;
  start.positions = init;
  start.seed = opts.seed;
  AnchorSet fixed;
  fixed.mode = AnchorMode::hard;
  for (int a = 0; a < m; ++a) {
    const int s = survivors[a];
    ext.labels.push_back("prev:" + d.labels[s]);
    w(s, n + a) = w(n + a, s) = opts.softWeight;
    start.positions.push_back(init[s]);
    fixed.entries[n + a] = init[s];
  }
  SmacofOptions so = opts.smacof;
  so.weights = std::move(w);
  const Layout refined = smacof(ext, start, fixed, so);

  Layout out;
  out.seed = opts.seed;
  out.stressTrace = refined.stressTrace;
  out.positions.assign(refined.positions.begin(), refined.positions.begin() + n);
  // New files that land off the map go to its edge rather than moving the
  // survivors to make room.
  for (int i = 0; i < n; ++i)
    if (!survived[i])
      out.positions[i] = {std::clamp(out.positions[i].x, 0.0, 1.0), std::clamp(out.positions[i].y, 0.0, 1.0)};
  res.layout = fit_layout(out, 0.0);
  return res;
}

LayoutResult anchored_layout(const metric::DissimilarityMatrix& d, const Layout& base,
                             const std::vector<PrefixAnchor>& anchors, const LayoutOptions& opts) {
  const int n = d.n();
  if (static_cast<int>(base.positions.size()) != n)
    throw std::invalid_argument("anchored_layout: base layout does not match the matrix");
  std::vector<std::vector<int>> members(anchors.size());
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const auto& t = anchors[a].target;
    if (!(t.x >= 0.0 && t.x <= 1.0 && t.y >= 0.0 && t.y <= 1.0))
      throw std::invalid_argument("anchor target outside the unit square: " + anchors[a].pathPrefix);
    for (int i = 0; i < n; ++i)
      if (d.labels[i].compare(0, anchors[a].pathPrefix.size(), anchors[a].pathPrefix) == 0)
        members[a].push_back(i);
    if (members[a].empty())
      throw std::invalid_argument("anchor prefix matches no file: " + anchors[a].pathPrefix);
  }

  LayoutResult res;
  res.fresh = false;
  res.k = std::min(opts.k > 0 ? opts.k : default_k(n), std::max(n - 1, 1));
  res.layout.seed = opts.seed;
  if (anchors.empty() || n == 0) {
    res.layout = base;
    return res;
  }

  const int m = static_cast<int>(anchors.size());
  const int total = n + m;
  const double f = frame_scale(d.values, base.positions);

  metric::DissimilarityMatrix ext{d.labels, Eigen::MatrixXd::Zero(total, total)};
  ext.values.topLeftCorner(n, n) = f * d.values;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(total, total);
  w.topLeftCorner(n, n).setOnes();
  for (int a = 0; a < m; ++a) {
    ext.labels.push_back("anchor:" + anchors[a].pathPrefix);
    for (int i : members[a]) w(i, n + a) = w(n + a, i) = opts.softWeight;
  }

  Layout start;
  start.positions = base.positions;
  AnchorSet fixed;
  fixed.mode = AnchorMode::hard;
  for (int a = 0; a < m; ++a) {
    start.positions.push_back(anchors[a].target);
    fixed.entries[n + a] = anchors[a].target;
  }
  SmacofOptions so = opts.smacof;
  so.weights = std::move(w);
  const Layout refined = smacof(ext, start, fixed, so);

  res.layout.stressTrace = refined.stressTrace;
  res.layout.positions.assign(refined.positions.begin(), refined.positions.begin() + n);
  for (auto& p : res.layout.positions) p = {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)};
  return res;
}

nlohmann::json to_json(const Layout& l, const std::vector<std::string>& labels,
                       const nlohmann::json& meta) {
  nlohmann::json positions = nlohmann::json::array();
  for (std::size_t i = 0; i < l.positions.size(); ++i)
    positions.push_back({{"path", i < labels.size() ? labels[i] : std::string{}},
                         {"x", l.positions[i].x},
                         {"y", l.positions[i].y}});
  return {{"positions", positions}, {"stress", l.stressTrace}, {"meta", meta}};
}

}  // namespace codemap::embed
