#include "wds/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace wds {

cxd slice(const Constellation& c, cxd v) { return c.point(c.slice_index(v)); }

double spectral_radius(const CMat& m) {
  Eigen::ComplexEigenSolver<CMat> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

DetectorResult make_result(const Constellation& c, CVec hard, long metadata) {
  DetectorResult res;
  res.bits = c.demap_points(hard);
  res.hard_symbols = std::move(hard);
  res.metadata = metadata;
  return res;
}

CVec slice_vector(const Constellation& c, const CVec& v) {
  CVec out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = slice(c, v[i]);
  return out;
}

}  // namespace

DetectorResult detect_mf(const CVec& r, const Constellation& c) {
  return make_result(c, slice_vector(c, r), 0);
}

DetectorResult detect_zf(const CMat& corr, const CVec& r, const Constellation& c) {
  Eigen::JacobiSVD<CMat> svd(corr, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  double cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
  if (cond > 1e12) throw SingularMatrixError(cond);
  return make_result(c, slice_vector(c, svd.solve(r)), 0);
}

DetectorResult detect_id(const CMat& corr, const CVec& r, const Constellation& c,
                         int max_iter) {
  if (max_iter < 1) throw std::invalid_argument("detect_id: max_iter must be >= 1");
  const CMat ici = corr - CMat::Identity(corr.rows(), corr.cols());
  // Hard-decision cancellation: each iterate is re-sliced, so a converged
  // run cancels ICI exactly and matches the matched filter's noise behavior.
  CVec s = slice_vector(c, r);
  long iters = 0;
  bool converged = false;
  for (int z = 0; z < max_iter; ++z) {
    CVec next = slice_vector(c, r - ici * s);
    ++iters;
    if ((next - s).cwiseAbs().maxCoeff() == 0.0) {
      converged = true;
      break;
    }
    s = std::move(next);
  }
  if (!converged) {
    double rho = spectral_radius(ici);
    if (rho >= 1.0) throw DivergenceError(rho);
  }
  DetectorResult res;
  res.bits = c.demap_points(s);
  res.hard_symbols = std::move(s);
  res.metadata = iters;
  return res;
}

namespace {

// Shared by SD and ML: the metric ||R - C S||^2 rewritten on the triangular
// factor of C = Q U, so partial sums accumulate top-down per tree level.
struct TreeSearch {
  const Constellation& con;
  CMat u;      // upper triangular
  CVec y;      // Q^H R
  int n;
  int p;
  std::vector<cxd> symbols;       // current path, by level
  std::vector<int> indices;
  std::vector<cxd> acc;           // acc[l] = sum_{j>l} U(l,j) s_j
  std::vector<int> best_indices;
  double best_metric;
  long nodes = 0;
  long node_budget;

  TreeSearch(const CMat& corr, const CVec& r, const Constellation& c, long budget)
      : con(c), n(static_cast<int>(r.size())), p(c.size()), node_budget(budget) {
    Eigen::HouseholderQR<CMat> qr(corr);
    u = qr.matrixQR().triangularView<Eigen::Upper>();
    y = qr.householderQ().adjoint() * r;
    symbols.assign(n, cxd(0, 0));
    indices.assign(n, 0);
    acc.assign(n, cxd(0, 0));
    best_indices.assign(n, 0);
    best_metric = std::numeric_limits<double>::infinity();
  }

  void enter(int level, int point_index) {
    cxd s = con.point(point_index);
    symbols[level] = s;
    indices[level] = point_index;
    for (int l = 0; l < level; ++l) acc[l] += u(l, level) * s;
  }

  void leave(int level) {
    cxd s = symbols[level];
    for (int l = 0; l < level; ++l) acc[l] -= u(l, level) * s;
  }

  DetectorResult result() const {
    CVec hard(n);
    for (int i = 0; i < n; ++i) hard[i] = con.point(best_indices[i]);
    DetectorResult res;
    res.bits = con.demap_points(hard);
    res.hard_symbols = std::move(hard);
    res.metadata = nodes;
    return res;
  }

  // Pruned depth-first search (sphere decoder). Children visited in
  // ascending partial-metric order (Schnorr-Euchner).
  void search_pruned(int level, double partial) {
    std::array<std::pair<double, int>, 64> children;
    cxd b = y[level] - acc[level];
    for (int i = 0; i < p; ++i)
      children[i] = {std::norm(b - u(level, level) * con.point(i)), i};
    std::sort(children.begin(), children.begin() + p);
    for (int i = 0; i < p; ++i) {
      double metric = partial + children[i].first;
      if (metric >= best_metric) break;  // sorted: no later child can qualify
      if (++nodes > node_budget) throw NodeBudgetError(result());
      if (level == 0) {
        best_metric = metric;
        indices[level] = children[i].second;
        best_indices = indices;
        continue;
      }
      enter(level, children[i].second);
      search_pruned(level - 1, metric);
      leave(level);
    }
  }

  // Exhaustive depth-first search, no pruning (brute-force ML).
  void search_full(int level, double partial) {
    cxd b = y[level] - acc[level];
    for (int i = 0; i < p; ++i) {
      double metric = partial + std::norm(b - u(level, level) * con.point(i));
      ++nodes;
      if (level == 0) {
        if (metric < best_metric) {
          best_metric = metric;
          indices[level] = i;
          best_indices = indices;
        }
        continue;
      }
      enter(level, i);
      search_full(level - 1, metric);
      leave(level);
    }
  }
};

}  // namespace

DetectorResult detect_sd(const CMat& corr, const CVec& r, const Constellation& c,
                         long node_budget) {
  const int n = static_cast<int>(r.size());
  if (n > 32) throw std::invalid_argument("detect_sd: N exceeds configured bound (32)");
  DetectorResult zf = detect_zf(corr, r, c);
  double g = (r - corr * zf.hard_symbols).squaredNorm();
  TreeSearch ts(corr, r, c, node_budget);
  // Slack keeps the ZF leaf reachable under floating-point round-off.
  ts.best_metric = g + std::max(1e-12, 1e-9 * g);
  for (int i = 0; i < n; ++i)
    ts.best_indices[i] = c.slice_index(zf.hard_symbols[i]);
  ts.search_pruned(n - 1, 0.0);
  return ts.result();
}

DetectorResult detect_ml(const CMat& corr, const CVec& r, const Constellation& c) {
  const int n = static_cast<int>(r.size());
  double log_space = n * std::log2(static_cast<double>(c.size()));
  if (log_space > 24.0)
    throw std::invalid_argument("detect_ml: search space exceeds 2^24 candidates");
  if (n == 1) return detect_mf(r, c);
  TreeSearch ts(corr, r, c, std::numeric_limits<long>::max());
  ts.search_full(n - 1, 0.0);
  return ts.result();
}

}  // namespace wds
