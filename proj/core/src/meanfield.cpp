#include "eaqc/meanfield.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "eaqc/landscape.hpp"
#include "eaqc/rng.hpp"

namespace eaqc {

namespace {

Eigen::VectorXd fixed_point_map(const ProblemInstance& inst, double lambda,
                                const Eigen::VectorXd& z,
                                const SpinConfiguration& sigma) {
  const int M = inst.size();
  Eigen::VectorXd g(M);
  for (int i = 0; i < M; ++i) {
    double Mi = 0.0;
    for (int j = 0; j < M; ++j) Mi += inst.J(i, j) * sigma(j) * z(j);
    const double a = 2.0 * Mi + inst.K(i);
    const double denom = std::sqrt((1.0 - lambda) * (1.0 - lambda) + lambda * lambda * a * a);
    double gi = denom > 0.0 ? -sigma(i) * lambda * a / denom : 0.0;
    g(i) = std::clamp(gi, 0.0, 1.0);
  }
  return g;
}

double energy_per_site(const ProblemInstance& inst, double lambda,
                       const Eigen::VectorXd& z, const SpinConfiguration& sigma) {
  const int M = inst.size();
  double sq = 0.0, zee = 0.0;
  for (int i = 0; i < M; ++i) {
    sq += std::sqrt(std::max(0.0, 1.0 - z(i) * z(i)));
    zee += inst.K(i) * sigma(i) * z(i);
    for (int j = 0; j < M; ++j)
      zee += inst.J(i, j) * sigma(i) * sigma(j) * z(i) * z(j);
  }
  return -(1.0 - lambda) * sq + lambda * zee;
}

// golden-section line search for the coordinate minimum on [0, 1]
double line_min(const std::function<double(double)>& f) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  double best = xm, fb = f(xm);
  for (double cand : {0.0, 1.0})
    if (f(cand) < fb) { best = cand; fb = f(cand); }
  return best;
}

}  // namespace

Eigen::VectorXd minimize_ground_energy(const ProblemInstance& inst, double lambda,
                                       const SpinConfiguration& sigma_star,
                                       int starts, std::uint64_t seed) {
  const int M = inst.size();
  Rng rng(seed);
  Eigen::VectorXd best;
  double best_e = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd z(M);
    if (s == 0)
      z.setZero();
    else if (s == 1)
      z.setOnes();
    else
      for (int i = 0; i < M; ++i) z(i) = rng.uniform01();
    double e = energy_per_site(inst, lambda, z, sigma_star);
    for (int sweep = 0; sweep < 400; ++sweep) {
      const double e_before = e;
      for (int i = 0; i < M; ++i) {
        z(i) = line_min([&](double zi) {
          Eigen::VectorXd zz = z;
          zz(i) = zi;
          return energy_per_site(inst, lambda, zz, sigma_star);
        });
      }
      e = energy_per_site(inst, lambda, z, sigma_star);
      if (e_before - e < 1e-10) break;
    }
    if (e < best_e) {
      best_e = e;
      best = z;
    }
  }
  return best;
}

MeanFieldSolution solve_self_consistent(const ProblemInstance& inst, double lambda,
                                        const SpinConfiguration& sigma_star,
                                        const MeanFieldOptions& opts) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("solve_self_consistent: lambda outside [0,1]");
  if (!check_spins(sigma_star) || sigma_star.size() != inst.size())
    throw std::invalid_argument("solve_self_consistent: bad sigma_star");

  MeanFieldSolution sol;
  sol.lambda = lambda;
  sol.sigma_star = sigma_star;
  Eigen::VectorXd z = Eigen::VectorXd::Ones(inst.size());
  double res = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const Eigen::VectorXd g = fixed_point_map(inst, lambda, z, sigma_star);
    res = (g - z).cwiseAbs().maxCoeff();
    if (res <= opts.tol) break;
    z = opts.damping * g + (1.0 - opts.damping) * z;
  }
  sol.iterations = it;
  sol.residual = res;
  sol.converged = res <= opts.tol;
  if (!sol.converged) {
    // stalled fixed point: fall back to direct minimization
    z = minimize_ground_energy(inst, lambda, sigma_star);
    const Eigen::VectorXd g = fixed_point_map(inst, lambda, z, sigma_star);
    sol.residual = (g - z).cwiseAbs().maxCoeff();
    sol.used_fallback = true;
    sol.converged = sol.residual <= 1e-6;
    if (!sol.converged)
      throw std::runtime_error("solve_self_consistent: fixed point and direct minimization both failed");
  }
  sol.z = z;
  sol.energy_per_site = energy_per_site(inst, lambda, z, sigma_star);
  return sol;
}

double mf_ground_energy(const ProblemInstance& inst, int N, double lambda,
                        const Eigen::VectorXd& z, const SpinConfiguration& sigma_star) {
  if (z.minCoeff() < 0.0 || z.maxCoeff() > 1.0)
    throw std::invalid_argument("mf_ground_energy: z outside [0,1]^M");
  return static_cast<double>(N) * energy_per_site(inst, lambda, z, sigma_star);
}

Eigen::MatrixXd excitation_matrix(const ProblemInstance& inst, double lambda,
                                  const Eigen::VectorXd& z,
                                  const SpinConfiguration& sigma_star) {
  const int M = inst.size();
  Eigen::MatrixXd A(M, M);
  Eigen::VectorXd sq(M);
  for (int i = 0; i < M; ++i) sq(i) = std::sqrt(std::max(0.0, 1.0 - z(i) * z(i)));
  for (int k = 0; k < M; ++k) {
    double diag = 2.0 * (1.0 - lambda) * sq(k) - 2.0 * lambda * inst.K(k) * sigma_star(k) * z(k);
    for (int i = 0; i < M; ++i) {
      if (i == k) continue;
      diag -= 4.0 * lambda * inst.J(i, k) * sigma_star(i) * sigma_star(k) * z(i) * z(k);
      A(k, i) = 2.0 * lambda * inst.J(k, i) * sq(k) * sq(i);
    }
    A(k, k) = diag;
  }
  return A;
}

double mf_gap(const ProblemInstance& inst, double lambda, const Eigen::VectorXd& z,
              const SpinConfiguration& sigma_star) {
  const Eigen::MatrixXd A = excitation_matrix(inst, lambda, z, sigma_star);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  return es.eigenvalues()(0);
}

std::vector<MeanFieldPoint> mf_curve(const ProblemInstance& inst,
                                     const std::vector<double>& grid) {
  // sigma* comes from corner enumeration, never from the MF solution itself
  const LandscapeSummary ls = analyze_landscape(inst);
  if (ls.ground_degeneracy != 1)
    throw std::domain_error("mf_curve: degenerate qubit ground state");
  std::vector<MeanFieldPoint> out;
  out.reserve(grid.size());
  for (double lambda : grid) {
    const MeanFieldSolution sol = solve_self_consistent(inst, lambda, ls.sigma_star);
    MeanFieldPoint p;
    p.lambda = lambda;
    p.z = sol.z;
    p.energy_per_site = sol.energy_per_site;
    p.gap = mf_gap(inst, lambda, sol.z, ls.sigma_star);
    p.converged = sol.converged;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace eaqc
