#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "eaqc/instance.hpp"

namespace eaqc {

// Spin-coherent product ansatz parametrized by z_i = sigma_i <S_i^z>/N in
// [0,1]; z = 0 at lambda = 0, z = 1 at lambda = 1.
struct MeanFieldSolution {
  double lambda = 0.0;
  Eigen::VectorXd z;
  SpinConfiguration sigma_star;
  double energy_per_site = 0.0;  // E_MF / N
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  bool used_fallback = false;
};

struct MeanFieldOptions {
  double damping = 0.5;
  double tol = 1e-12;   // max-norm residual of the self-consistent equation
  int max_iter = 10000;
};

// Damped fixed-point iteration of
//   z_i = -s_i lambda (2 M_i + K_i) / sqrt((1-lambda)^2 + lambda^2 (2M_i+K_i)^2),
//   M_i = sum_j J_ij s_j z_j,
// initialized at z = 1.  Falls back to direct minimization when the
// iteration stalls; throws if both fail.
MeanFieldSolution solve_self_consistent(const ProblemInstance& inst, double lambda,
                                        const SpinConfiguration& sigma_star,
                                        const MeanFieldOptions& opts = {});

// E_MF = -N(1-l) sum_i sqrt(1-z_i^2)
//        + N l (sum_ij J_ij s_i s_j z_i z_j + sum_i K_i s_i z_i);
// exactly linear in N.
double mf_ground_energy(const ProblemInstance& inst, int N, double lambda,
                        const Eigen::VectorXd& z, const SpinConfiguration& sigma_star);

// M x M spin-wave matrix (ground energy already subtracted):
//   diag_k  = 2(1-l) sqrt(1-z_k^2) - 2 l K_k s_k z_k
//             - 4 l sum_{i != k} J_ik s_i s_k z_i z_k
//   off kk' = 2 l J_kk' sqrt(1-z_k^2) sqrt(1-z_k'^2).
Eigen::MatrixXd excitation_matrix(const ProblemInstance& inst, double lambda,
                                  const Eigen::VectorXd& z,
                                  const SpinConfiguration& sigma_star);

// Minimum eigenvalue of the excitation matrix; independent of N.
double mf_gap(const ProblemInstance& inst, double lambda, const Eigen::VectorXd& z,
              const SpinConfiguration& sigma_star);

struct MeanFieldPoint {
  double lambda = 0.0;
  Eigen::VectorXd z;
  double energy_per_site = 0.0;
  double gap = 0.0;
  bool converged = false;
};

std::vector<MeanFieldPoint> mf_curve(const ProblemInstance& inst,
                                     const std::vector<double>& grid);

// Multi-start coordinate descent with golden-section line searches on
// E_MF(z)/N over [0,1]^M; the independent route used to validate the
// fixed point.
Eigen::VectorXd minimize_ground_energy(const ProblemInstance& inst, double lambda,
                                       const SpinConfiguration& sigma_star,
                                       int starts = 8, std::uint64_t seed = 12345);

}  // namespace eaqc
