#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eaqc/instance.hpp"
#include "eaqc/symspace.hpp"

namespace eaqc {

struct EigenResult {
  Eigen::VectorXd values;   // ascending, L entries
  Eigen::MatrixXd vectors;  // orthonormal columns
};

// L smallest eigenpairs.  Dense solver below `dense_cap`, Lanczos with full
// reorthogonalization above (L <= 30 there).  Throws on non-convergence.
EigenResult eigensystem(const EnsembleOperator& H, int L, int dense_cap = 4096);

// E1 - E0 of hamiltonian(inst, N, lambda).
double gap(const ProblemInstance& inst, int N, double lambda, int dense_cap = 4096);

struct MinGapResult {
  double lambda_star = 0.0;
  double gap_min = 0.0;
};

// Minimum of gap over the grid, ties toward smaller lambda.  With `refine`,
// golden-section refinement around the coarse minimum to 1e-4 in lambda.
MinGapResult min_gap(const ProblemInstance& inst, int N,
                     const std::vector<double>& grid, bool refine = false,
                     int dense_cap = 4096);

enum class LevelTag { Equivalent, Error, Unresolved };

// The L lowest H_Z eigenstates (Fock states) tagged by majority vote against
// the qubit ground configuration.
struct LevelClassification {
  Eigen::VectorXd energies;
  std::vector<LevelTag> tags;
  std::vector<long> flat_indices;
};

LevelClassification classify_levels(const ProblemInstance& inst, int N, int L);

// Fig-2(e/f)-style statistics of the minimum gap over an instance set.
// best/worst rows follow the instances with the largest and smallest change
// of gap_min between N = 1 and the largest N requested.
struct GapStatistics {
  std::vector<int> ensemble_sizes;
  std::vector<double> mean, best, worst;
  int best_instance = 0, worst_instance = 0;
};

GapStatistics min_gap_statistics(const std::vector<ProblemInstance>& set,
                                 const std::vector<int>& ensemble_sizes,
                                 const std::vector<double>& grid,
                                 int threads = 1);

// `points` uniform nodes on [0, 1].
std::vector<double> lambda_grid(int points);

}  // namespace eaqc
