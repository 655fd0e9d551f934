#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eaqc/dynamics.hpp"
#include "eaqc/instance.hpp"

namespace eaqc {

// Transpose the indices of subsystem `which` (1 or 2) of a density matrix on
// a d1 x d2 tensor product.
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int d1, int d2,
                                   int which);

// log2 of the trace norm of the partial transpose, computed from the
// Hermitian eigendecomposition of rho^T2.  Values within -1e-10 of zero are
// clipped to 0.
double log_negativity(const Eigen::MatrixXcd& rho, int d1, int d2);

struct NegativitySample {
  double t = 0.0;
  double lambda = 0.0;
  double value = 0.0;
};

// Lindblad sweep of an M = 2 instance sampling the inter-ensemble
// logarithmic negativity at `samples` evenly spaced times.
std::vector<NegativitySample> negativity_trace(const ProblemInstance& inst, int N,
                                               Schedule schedule, double gamma_z,
                                               double gamma_x, int samples,
                                               long steps = 0);

}  // namespace eaqc
