#include "eaqc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eaqc/landscape.hpp"
#include "eaqc/parallel.hpp"
#include "eaqc/rng.hpp"

namespace eaqc {

namespace {

// Lanczos with full reorthogonalization for the L smallest eigenpairs of a
// symmetric sparse matrix.  Restarted from a deterministic seed; convergence
// on the Ritz residuals.
EigenResult lanczos_lowest(const Eigen::SparseMatrix<double>& A, int L) {
  const long dim = A.rows();
  const int max_basis = std::min<long>(dim, std::max(4 * L + 40, 80));
  Rng rng(0x5eed);
  Eigen::VectorXd v(dim);
  for (long i = 0; i < dim; ++i) v(i) = rng.uniform_pm1();
  v.normalize();

  Eigen::MatrixXd V(dim, max_basis);
  Eigen::VectorXd alpha(max_basis), beta(max_basis);
  V.col(0) = v;
  int m = 0;
  Eigen::VectorXd w;
  for (int j = 0; j < max_basis; ++j) {
    w = A * V.col(j);
    alpha(j) = V.col(j).dot(w);
    w -= alpha(j) * V.col(j);
    if (j > 0) w -= beta(j - 1) * V.col(j - 1);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
    const double nb = w.norm();
    m = j + 1;
    if (j + 1 < max_basis) {
      if (nb < 1e-13) break;  // invariant subspace found
      beta(j) = nb;
      V.col(j + 1) = w / nb;
    }
  }

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha(i);
    if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensystem: tridiagonal solve failed");
  const int take = std::min(L, m);
  EigenResult out;
  out.values = es.eigenvalues().head(take);
  out.vectors = V.leftCols(m) * es.eigenvectors().leftCols(take);
  // surface non-convergence instead of returning bad pairs
  for (int c = 0; c < take; ++c) {
    const double res = (A * out.vectors.col(c) - out.values(c) * out.vectors.col(c)).norm();
    if (res > 1e-8 * std::max(1.0, std::abs(out.values(c))))
      throw std::runtime_error("eigensystem: Lanczos did not converge");
  }
  return out;
}

}  // namespace

std::vector<double> lambda_grid(int points) {
  if (points < 2) throw std::invalid_argument("lambda_grid: need at least 2 points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
  return g;
}

EigenResult eigensystem(const EnsembleOperator& H, int L, int dense_cap) {
  const long dim = H.dim();
  if (L < 1 || L > dim) throw std::invalid_argument("eigensystem: L out of range");
  if (dim <= dense_cap) {
    Eigen::MatrixXd dense(H.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigensystem: dense solver failed");
    EigenResult out;
    out.values = es.eigenvalues().head(L);
    out.vectors = es.eigenvectors().leftCols(L);
    return out;
  }
  if (L > 30)
    throw std::invalid_argument("eigensystem: L > 30 above the dense cap");
  return lanczos_lowest(H.matrix, L);
}

double gap(const ProblemInstance& inst, int N, double lambda, int dense_cap) {
  const EnsembleOperator H = hamiltonian(inst, N, lambda);
  const EigenResult r = eigensystem(H, 2, dense_cap);
  return r.values(1) - r.values(0);
}

MinGapResult min_gap(const ProblemInstance& inst, int N,
                     const std::vector<double>& grid, bool refine, int dense_cap) {
  if (grid.size() < 3) throw std::invalid_argument("min_gap: need >= 3 grid points");
  for (double l : grid)
    if (l < 0.0 || l > 1.0) throw std::invalid_argument("min_gap: grid outside [0,1]");

  MinGapResult best{grid.front(), std::numeric_limits<double>::infinity()};
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = gap(inst, N, grid[i], dense_cap);
    if (g < best.gap_min) {  // strict: ties go to the smaller lambda
      best = {grid[i], g};
      best_i = i;
    }
  }
  if (refine && best_i > 0 && best_i + 1 < grid.size()) {
    double a = grid[best_i - 1], b = grid[best_i + 1];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = gap(inst, N, x1, dense_cap), f2 = gap(inst, N, x2, dense_cap);
    while (b - a > 1e-4) {
      if (f1 <= f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - gr * (b - a);
        f1 = gap(inst, N, x1, dense_cap);
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + gr * (b - a);
        f2 = gap(inst, N, x2, dense_cap);
      }
    }
    const double lm = 0.5 * (a + b), gm = gap(inst, N, lm, dense_cap);
    if (gm < best.gap_min) best = {lm, gm};
  }
  return best;
}

LevelClassification classify_levels(const ProblemInstance& inst, int N, int L) {
  const int M = inst.size();
  const Eigen::VectorXd diag = hz_diagonal(inst, N);
  const long dim = diag.size();
  if (L < 1 || L > dim) throw std::invalid_argument("classify_levels: L out of range");

  std::vector<long> order(dim);
  std::iota(order.begin(), order.end(), 0L);
  std::stable_sort(order.begin(), order.end(),
                   [&](long a, long b) { return diag(a) < diag(b); });

  const LandscapeSummary ls = analyze_landscape(inst);
  LevelClassification out;
  out.energies.resize(L);
  out.tags.reserve(L);
  out.flat_indices.reserve(L);
  for (int l = 0; l < L; ++l) {
    const long flat = order[l];
    out.energies(l) = diag(flat);
    out.flat_indices.push_back(flat);
    const auto label = majority_label(fock_from_flat(flat, M, N));
    if (!label)
      out.tags.push_back(LevelTag::Unresolved);
    else if (*label == ls.sigma_star)
      out.tags.push_back(LevelTag::Equivalent);
    else
      out.tags.push_back(LevelTag::Error);
  }
  return out;
}

GapStatistics min_gap_statistics(const std::vector<ProblemInstance>& set,
                                 const std::vector<int>& ensemble_sizes,
                                 const std::vector<double>& grid, int threads) {
  if (set.empty() || ensemble_sizes.empty())
    throw std::invalid_argument("min_gap_statistics: empty input");
  const int ni = static_cast<int>(set.size());
  const int nn = static_cast<int>(ensemble_sizes.size());
  // gaps[i][n]
  std::vector<std::vector<double>> gaps(ni, std::vector<double>(nn, 0.0));
  parallel_for(ni, threads, [&](int i) {
    for (int n = 0; n < nn; ++n)
      gaps[i][n] = min_gap(set[i], ensemble_sizes[n], grid).gap_min;
  });

  GapStatistics out;
  out.ensemble_sizes = ensemble_sizes;
  // best / worst by the change of gap_min between the qubit case (first N)
  // and the largest N in the sweep
  int bi = 0, wi = 0;
  double bdiff = -std::numeric_limits<double>::infinity();
  double wdiff = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ni; ++i) {
    const double diff = gaps[i][nn - 1] - gaps[i][0];
    if (diff > bdiff) { bdiff = diff; bi = i; }
    if (diff < wdiff) { wdiff = diff; wi = i; }
  }
  out.best_instance = bi;
  out.worst_instance = wi;
  for (int n = 0; n < nn; ++n) {
    double mean = 0.0;
    for (int i = 0; i < ni; ++i) mean += gaps[i][n];
    out.mean.push_back(mean / ni);
    out.best.push_back(gaps[bi][n]);
    out.worst.push_back(gaps[wi][n]);
  }
  return out;
}

}  // namespace eaqc
