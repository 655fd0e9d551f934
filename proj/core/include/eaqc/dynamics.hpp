#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "eaqc/instance.hpp"
#include "eaqc/spectrum.hpp"

namespace eaqc {

// Linear annealing schedule lambda(t) = t / tau.
struct Schedule {
  double tau = 0.0;
};

// dt = min(0.01, tau / 1e4)  =>  steps = max(1e4, ceil(100 tau)).
long default_steps(double tau);

struct RunResult {
  int num_ensembles = 0;
  int ensemble_size = 0;
  bool mixed = false;
  Eigen::VectorXcd state;  // pure runs
  Eigen::MatrixXcd rho;    // mixed runs

  // Occupations of the lambda=1 eigenlevels (H_Z Fock states, energy
  // ascending) with their majority-vote tags.  For the individual-dephasing
  // mode these live in the full computational basis.
  Eigen::VectorXd level_probs;
  Eigen::VectorXd level_energies;
  std::vector<LevelTag> level_tags;

  double success = 0.0;
  double error = 1.0;
  long steps = 0;
  double norm_drift = 0.0;         // | ||psi|| - 1 |  or  | tr rho - 1 |
  double hermiticity_error = 0.0;  // max |rho - rho^dag| (mixed only)
  double min_eigenvalue = 0.0;     // of the final rho (mixed only)
};

// Schroedinger evolution of H(lambda(t)) from the H_X ground state (product
// of +x spin-coherent states, built analytically).  Classical fixed-step RK4;
// norm drift beyond 1e-6 raises a diagnostic error.
RunResult evolve_pure(const ProblemInstance& inst, int N, Schedule schedule,
                      long steps = 0);

// Collective-dephasing master equation
//   drho/dt = i[rho,H] - (Gz/2) sum_n [rho Szn^2 - 2 Szn rho Szn + Szn^2 rho]
//             - (Gx/2) (same with Sx),
// integrated by Strang splitting: the dephasing factors are applied as exact
// CPTP maps (elementwise in the S^z / rotated S^x eigenbasis) around an RK4
// one-step propagator applied as a congruence rho -> R rho R^dag, so trace,
// Hermiticity and positivity are preserved structurally and Gamma = 0
// reproduces evolve_pure exactly.
RunResult evolve_lindblad(const ProblemInstance& inst, int N, Schedule schedule,
                          double gamma_z, double gamma_x, long steps = 0,
                          const std::function<void(double /*t*/, const Eigen::MatrixXcd&)>&
                              observer = nullptr,
                          long observe_every = 0);

// Appendix-style per-qubit dephasing on the full 2^(NM) space:
//   drho/dt = i[rho,H] - Gz sum_{n,k} [rho - sz_{n,k} rho sz_{n,k}].
// Guarded at N*M <= 12 qubits.  Success is the majority vote over the
// per-ensemble total-spin measurement distribution.
RunResult evolve_individual_dephasing(const ProblemInstance& inst, int N,
                                      Schedule schedule, double gamma_z,
                                      long steps = 0);

// Isometric embedding of a symmetric-subspace state into the 2^(NM)
// computational basis (oracle hook for the individual-dephasing mode).
Eigen::VectorXcd embed_symmetric_state(const Eigen::VectorXcd& state, int M, int N);

struct LevelDistribution {
  Eigen::VectorXd energies;
  Eigen::VectorXd probabilities;
  std::vector<LevelTag> tags;
};

// Per-level occupation of the final state.  `display_normalized` rescales so
// the maximal probability is 1 (export convenience only; statistics always
// use raw probabilities).
LevelDistribution final_distribution(const RunResult& result,
                                     bool display_normalized = false);

double error_probability(const RunResult& result);

struct BatchCell {
  int instance_id = 0;
  int N = 0;
  double tau = 0.0, gamma_z = 0.0, gamma_x = 0.0;
  double success = 0.0, error = 1.0;
  long steps = 0;
  double norm_drift = 0.0;
  bool failed = false;
  std::string message;
};

// Mean-error sweep over (instance, N, tau) cells; a failing cell is recorded
// and does not abort the batch.
std::vector<BatchCell> batch_errors(const std::vector<ProblemInstance>& set,
                                    const std::vector<int>& ensemble_sizes,
                                    const std::vector<double>& taus,
                                    double gamma_z, double gamma_x,
                                    int threads = 1, long steps = 0);

}  // namespace eaqc
