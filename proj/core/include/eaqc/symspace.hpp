#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "eaqc/instance.hpp"

namespace eaqc {

// Basis label of the permutation-symmetric subspace: k_i qubits flipped in
// ensemble i, so S_i^z |k> = (N - 2 k_i) |k>.  Flat ordering is row-major
// with k_1 slowest; |k = 0> is the all-up state.
struct FockIndex {
  std::vector<int> k;
  int N = 0;
};

struct EnsembleOperator {
  Eigen::SparseMatrix<double> matrix;
  int num_ensembles = 0;  // M
  int ensemble_size = 0;  // N
  long dim() const { return matrix.rows(); }
};

// (N+1)^M with an overflow/size guard.
long symspace_dim(int M, int N);

long flat_index(const FockIndex& fock, int M);
FockIndex fock_from_flat(long idx, int M, int N);

enum class Axis { X, Z };

// Collective spin operator of one ensemble embedded by identity factors:
// S^z diagonal with entries N - 2k, S^x tridiagonal with
// <k+1|S^x|k> = sqrt((k+1)(N-k)).  `site` is 0-based.
EnsembleOperator collective_op(int M, int N, int site, Axis axis);

// H_Z = (1/N) sum_{ij} J_ij S_i^z S_j^z + sum_i K_i S_i^z  (diagonal).
EnsembleOperator assemble_hz(const ProblemInstance& inst, int N);
Eigen::VectorXd hz_diagonal(const ProblemInstance& inst, int N);

// H_X = - sum_i S_i^x.
EnsembleOperator assemble_hx(int M, int N);

// H(lambda) = (1-lambda) H_X + lambda H_Z, lambda in [0,1].
EnsembleOperator hamiltonian(const ProblemInstance& inst, int N, double lambda);

// Majority vote: sigma_i = sgn(N - 2 k_i); empty when any ensemble ties
// (k_i = N/2, even N only).
std::optional<SpinConfiguration> majority_label(const FockIndex& fock);

}  // namespace eaqc
