#include "eaqc/landscape.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "eaqc/rng.hpp"

namespace eaqc {

namespace {

constexpr int kEnumerationGuard = 24;

// Near-equality margin used when deciding N*(eps1-eps0) > delta: hand-built
// instances (e.g. the ferromagnet) can hit the crossover exactly, where bare
// floating-point comparison of two differently-rounded expressions is a coin
// flip.
constexpr double kTieEps = 1e-9;

SpinConfiguration corner_from_index(std::uint32_t bits, int M) {
  // Increasing `bits` enumerates corners in lexicographic order over sigma
  // with -1 < +1 and sigma_1 most significant.
  SpinConfiguration s(M);
  for (int i = 0; i < M; ++i)
    s(i) = (bits >> (M - 1 - i)) & 1u ? 1 : -1;
  return s;
}

}  // namespace

double corner_energy(const ProblemInstance& inst, const SpinConfiguration& sigma) {
  if (sigma.size() != inst.size())
    throw std::invalid_argument("corner_energy: sigma length mismatch");
  const Eigen::VectorXd s = sigma.cast<double>();
  return s.dot(inst.J * s) + inst.K.dot(s);
}

double hypercube_energy(const ProblemInstance& inst, const Eigen::VectorXd& x) {
  if (x.size() != inst.size())
    throw std::invalid_argument("hypercube_energy: x length mismatch");
  return x.dot(inst.J * x) + inst.K.dot(x);
}

LandscapeSummary analyze_landscape(const ProblemInstance& inst) {
  const int M = inst.size();
  if (M > kEnumerationGuard)
    throw std::domain_error("analyze_landscape: M exceeds the 2^M enumeration guard");

  LandscapeSummary out;
  const std::uint32_t n_corners = 1u << M;
  double eps0 = std::numeric_limits<double>::infinity();
  double eps1 = std::numeric_limits<double>::infinity();
  int deg0 = 0, deg1 = 0;
  std::uint32_t argmin = 0;
  for (std::uint32_t b = 0; b < n_corners; ++b) {
    const double e = corner_energy(inst, corner_from_index(b, M));
    if (e < eps0) {
      if (deg0 > 0 && eps0 < eps1) {
        eps1 = eps0;
        deg1 = deg0;
      }
      eps0 = e;
      deg0 = 1;
      argmin = b;
    } else if (e == eps0) {
      ++deg0;
    } else if (e < eps1) {
      eps1 = e;
      deg1 = 1;
    } else if (e == eps1) {
      ++deg1;
    }
  }
  out.sigma_star = corner_from_index(argmin, M);
  out.eps0 = eps0;
  out.eps1 = eps1;
  out.ground_degeneracy = deg0;
  out.first_excited_degeneracy = deg1;
  if (deg0 == 1 && M >= 1 && std::isfinite(eps1)) {
    const Eigen::VectorXd grad = ground_gradient(inst, out.sigma_star);
    out.delta = grad.minCoeff();
    const double d = eps1 - eps0;
    if (d > 0.0) {
      const double ratio = *out.delta / d;
      out.critical_size = static_cast<int>(std::floor(ratio + kTieEps)) + 1;
    }
  }
  return out;
}

double delta_gap(const ProblemInstance& inst) {
  const LandscapeSummary ls = analyze_landscape(inst);
  if (ls.ground_degeneracy != 1)
    throw std::domain_error("delta_gap: degenerate qubit ground state, delta undefined");
  return *ls.delta;
}

double corner_gap(const ProblemInstance& inst, int N) {
  const LandscapeSummary ls = analyze_landscape(inst);
  return static_cast<double>(N) * (ls.eps1 - ls.eps0);
}

std::optional<int> critical_ensemble_size(const ProblemInstance& inst) {
  return analyze_landscape(inst).critical_size;
}

Eigen::VectorXd ground_gradient(const ProblemInstance& inst,
                                const SpinConfiguration& sigma_star) {
  const int M = inst.size();
  if (sigma_star.size() != M)
    throw std::invalid_argument("ground_gradient: sigma length mismatch");
  const Eigen::VectorXd s = sigma_star.cast<double>();
  const Eigen::VectorXd Js = inst.J * s;  // column sums; J is symmetric
  Eigen::VectorXd g(M);
  for (int k = 0; k < M; ++k) g(k) = -2.0 * s(k) * (2.0 * Js(k) + inst.K(k));
  return g;
}

double corner_trajectory_energy(const ProblemInstance& inst,
                                const SpinConfiguration& sigma_star,
                                const Eigen::VectorXi& n, double eps) {
  const int M = inst.size();
  if (n.size() != M)
    throw std::invalid_argument("corner_trajectory_energy: n length mismatch");
  if (n.maxCoeff() <= 0)
    throw std::invalid_argument("corner_trajectory_energy: n must not be all zero");
  // f(eps) = -4 sum_{ij} J_ij s_i s_j (n_i eps - n_i n_j eps^2)
  //          -2 sum_i K_i s_i n_i eps
  double lin = 0.0, quad = 0.0;
  for (int i = 0; i < M; ++i) {
    const double si = sigma_star(i);
    lin += -2.0 * inst.K(i) * si * n(i);
    for (int j = 0; j < M; ++j) {
      const double w = inst.J(i, j) * si * sigma_star(j);
      lin += -4.0 * w * n(i);
      quad += 4.0 * w * n(i) * n(j);
    }
  }
  return lin * eps + quad * eps * eps;
}

double trajectory_energy(const ProblemInstance& inst,
                         const SpinConfiguration& sigma_star,
                         const Eigen::VectorXd& alpha, double eps) {
  const int M = inst.size();
  if (alpha.size() != M)
    throw std::invalid_argument("trajectory_energy: alpha length mismatch");
  if (alpha.minCoeff() < 0.0 || alpha.maxCoeff() > 1.0)
    throw std::invalid_argument("trajectory_energy: alpha out of [0,1]");
  if (std::abs(alpha.maxCoeff() - 1.0) > 1e-12)
    throw std::invalid_argument("trajectory_energy: sup alpha must be 1");
  double lin = 0.0, quad = 0.0;
  for (int i = 0; i < M; ++i) {
    const double si = sigma_star(i);
    lin += -2.0 * inst.K(i) * si * alpha(i);
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      const double w = inst.J(i, j) * si * sigma_star(j);
      lin += -4.0 * w * alpha(i);
      quad += 4.0 * w * alpha(i) * alpha(j);
    }
  }
  return lin * eps + quad * eps * eps;
}

double nc_fraction(int M, int N, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("nc_fraction: samples must be >= 1");
  long hits = 0;
  for (int s = 0; s < samples; ++s) {
    const ProblemInstance inst = random_instance(M, derived_seed(seed, s));
    const LandscapeSummary ls = analyze_landscape(inst);
    if (ls.ground_degeneracy != 1) continue;  // counted as Delta < delta false
    if (static_cast<double>(N) * (ls.eps1 - ls.eps0) < *ls.delta) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

}  // namespace eaqc
