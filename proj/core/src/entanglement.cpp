#include "eaqc/entanglement.hpp"

#include <cmath>
#include <stdexcept>

namespace eaqc {

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int d1, int d2,
                                   int which) {
  const long dim = static_cast<long>(d1) * d2;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("partial_transpose: dimension mismatch");
  if (which != 1 && which != 2)
    throw std::invalid_argument("partial_transpose: subsystem must be 1 or 2");
  Eigen::MatrixXcd out(dim, dim);
  // row = a1*d2 + a2, col = b1*d2 + b2
  for (int a1 = 0; a1 < d1; ++a1)
    for (int a2 = 0; a2 < d2; ++a2)
      for (int b1 = 0; b1 < d1; ++b1)
        for (int b2 = 0; b2 < d2; ++b2) {
          const long r = static_cast<long>(a1) * d2 + a2;
          const long c = static_cast<long>(b1) * d2 + b2;
          const long rs = which == 1 ? static_cast<long>(b1) * d2 + a2
                                     : static_cast<long>(a1) * d2 + b2;
          const long cs = which == 1 ? static_cast<long>(a1) * d2 + b2
                                     : static_cast<long>(b1) * d2 + a2;
          out(rs, cs) = rho(r, c);
        }
  return out;
}

double log_negativity(const Eigen::MatrixXcd& rho, int d1, int d2) {
  const Eigen::MatrixXcd pt = partial_transpose(rho, d1, d2, 2);
  // rho^T2 is Hermitian, so the trace norm is the sum of |eigenvalues|
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (pt + pt.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  double ln = std::log2(trace_norm);
  if (ln < 0.0 && ln > -1e-10) ln = 0.0;  // numerical noise floor
  return ln;
}

std::vector<NegativitySample> negativity_trace(const ProblemInstance& inst, int N,
                                               Schedule schedule, double gamma_z,
                                               double gamma_x, int samples,
                                               long steps) {
  if (inst.size() != 2)
    throw std::invalid_argument("negativity_trace: requires an M = 2 instance");
  if (samples < 2)
    throw std::invalid_argument("negativity_trace: need at least 2 samples");
  if (steps <= 0) steps = default_steps(schedule.tau);
  // sample on step boundaries, as evenly as the grid allows
  const long every = std::max(1L, steps / (samples - 1));
  const int n = N + 1;
  std::vector<NegativitySample> out;
  auto observer = [&](double t, const Eigen::MatrixXcd& rho) {
    NegativitySample s;
    s.t = t;
    s.lambda = std::clamp(t / schedule.tau, 0.0, 1.0);
    s.value = log_negativity(rho, n, n);
    out.push_back(s);
  };
  evolve_lindblad(inst, N, schedule, gamma_z, gamma_x, steps, observer, every);
  return out;
}

}  // namespace eaqc
