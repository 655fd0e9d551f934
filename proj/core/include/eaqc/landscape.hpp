#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "eaqc/instance.hpp"

namespace eaqc {

// Classical analysis of the diagonal problem Hamiltonian over hypercube
// corners.  eps1 is the second-lowest *distinct* corner energy; delta and
// critical_size are absent when the ground corner is degenerate.
struct LandscapeSummary {
  SpinConfiguration sigma_star;
  double eps0 = 0.0;
  double eps1 = 0.0;
  int ground_degeneracy = 1;        // corners at eps0
  int first_excited_degeneracy = 1; // corners at eps1
  std::optional<double> delta;      // minimal single-flip excitation
  std::optional<int> critical_size; // smallest N with N*(eps1-eps0) > delta
};

// E(sigma) = sum_{i,j} J_ij s_i s_j + sum_i K_i s_i, double sum over all
// ordered pairs.
double corner_energy(const ProblemInstance& inst, const SpinConfiguration& sigma);

// Rescaled energy at an arbitrary point x of the hypercube [-1,1]^M.
double hypercube_energy(const ProblemInstance& inst, const Eigen::VectorXd& x);

// Exhaustive 2^M enumeration (guarded at M <= 24).  Ties in the minimizer are
// broken lexicographically with -1 < +1.
LandscapeSummary analyze_landscape(const ProblemInstance& inst);

// min_k -2 s_k (K_k + 2 sum_j J_kj s_j) at the unique ground corner.
// Throws std::domain_error when the ground corner is degenerate.
double delta_gap(const ProblemInstance& inst);

// Delta = N * (eps1 - eps0).
double corner_gap(const ProblemInstance& inst, int N);

// Smallest N with Delta strictly above delta; equality does not qualify.
// Empty when the ground corner is degenerate.
std::optional<int> critical_ensemble_size(const ProblemInstance& inst);

// Component k: -2 s_k (2 sum_i J_ik s_i + K_k); all >= 0 at the true ground.
Eigen::VectorXd ground_gradient(const ProblemInstance& inst,
                                const SpinConfiguration& sigma_star);

// f_n(eps) along the straight line from the ground corner towards the corner
// flagged by n_i in {0,1}: quadratic in eps, f(0) = 0 exactly.
double corner_trajectory_energy(const ProblemInstance& inst,
                                const SpinConfiguration& sigma_star,
                                const Eigen::VectorXi& n, double eps);

// F(eps) along the ray x_i = s_i (1 - 2 alpha_i eps) with alpha in [0,1]^M,
// sup alpha = 1.  Theorem under test elsewhere: F >= 0.
double trajectory_energy(const ProblemInstance& inst,
                         const SpinConfiguration& sigma_star,
                         const Eigen::VectorXd& alpha, double eps);

// Fraction of `samples` random instances with N*(eps1-eps0) < delta.
// Degenerate-ground samples count as false.  Deterministic in (M, N,
// samples, seed); sample i uses derived_seed(seed, i).
double nc_fraction(int M, int N, int samples, std::uint64_t seed);

}  // namespace eaqc
