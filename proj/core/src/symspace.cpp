#include "eaqc/symspace.hpp"

#include <cmath>
#include <stdexcept>

namespace eaqc {

namespace {

constexpr long kDimGuard = 40'000'000;  // sparse assembly sanity limit

}  // namespace

long symspace_dim(int M, int N) {
  if (M < 1 || N < 1) throw std::invalid_argument("symspace_dim: need M >= 1, N >= 1");
  long dim = 1;
  for (int i = 0; i < M; ++i) {
    dim *= static_cast<long>(N + 1);
    if (dim > kDimGuard)
      throw std::domain_error("symspace_dim: (N+1)^M exceeds the size guard");
  }
  return dim;
}

long flat_index(const FockIndex& fock, int M) {
  if (static_cast<int>(fock.k.size()) != M)
    throw std::invalid_argument("flat_index: wrong component count");
  long idx = 0;
  for (int i = 0; i < M; ++i) {
    if (fock.k[i] < 0 || fock.k[i] > fock.N)
      throw std::invalid_argument("flat_index: component out of [0, N]");
    idx = idx * (fock.N + 1) + fock.k[i];  // k_1 slowest
  }
  return idx;
}

FockIndex fock_from_flat(long idx, int M, int N) {
  FockIndex fock;
  fock.N = N;
  fock.k.assign(M, 0);
  for (int i = M - 1; i >= 0; --i) {
    fock.k[i] = static_cast<int>(idx % (N + 1));
    idx /= (N + 1);
  }
  return fock;
}

EnsembleOperator collective_op(int M, int N, int site, Axis axis) {
  if (site < 0 || site >= M)
    throw std::invalid_argument("collective_op: site out of range");
  const long dim = symspace_dim(M, N);
  const int n = N + 1;
  long stride = 1;
  for (int i = site + 1; i < M; ++i) stride *= n;

  EnsembleOperator op;
  op.num_ensembles = M;
  op.ensemble_size = N;
  op.matrix.resize(dim, dim);
  std::vector<Eigen::Triplet<double>> trip;
  if (axis == Axis::Z) {
    trip.reserve(dim);
    for (long r = 0; r < dim; ++r) {
      const int k = static_cast<int>((r / stride) % n);
      trip.emplace_back(r, r, static_cast<double>(N - 2 * k));
    }
  } else {
    trip.reserve(2 * dim);
    for (long r = 0; r < dim; ++r) {
      const int k = static_cast<int>((r / stride) % n);
      if (k < N)  // <k+1|S^x|k> = sqrt((k+1)(N-k))
        trip.emplace_back(r + stride, r, std::sqrt(double(k + 1) * double(N - k)));
      if (k > 0)
        trip.emplace_back(r - stride, r, std::sqrt(double(k) * double(N - k + 1)));
    }
  }
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

Eigen::VectorXd hz_diagonal(const ProblemInstance& inst, int N) {
  const int M = inst.size();
  const long dim = symspace_dim(M, N);
  const int n = N + 1;
  Eigen::VectorXd diag(dim);
  std::vector<double> d(M);
  for (long r = 0; r < dim; ++r) {
    long rest = r;
    for (int i = M - 1; i >= 0; --i) {
      d[i] = static_cast<double>(N - 2 * static_cast<int>(rest % n));
      rest /= n;
    }
    // (1/N) sum_{ij} J_ij d_i d_j + sum_i K_i d_i, ordered pairs, J_ii = 0
    double v = 0.0;
    for (int i = 0; i < M; ++i) {
      double row = 0.0;
      for (int j = 0; j < M; ++j) row += inst.J(i, j) * d[j];
      v += d[i] * row / N + inst.K(i) * d[i];
    }
    diag(r) = v;
  }
  return diag;
}

EnsembleOperator assemble_hz(const ProblemInstance& inst, int N) {
  inst.validate();
  const Eigen::VectorXd diag = hz_diagonal(inst, N);
  EnsembleOperator op;
  op.num_ensembles = inst.size();
  op.ensemble_size = N;
  op.matrix.resize(diag.size(), diag.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(diag.size());
  for (long r = 0; r < diag.size(); ++r) trip.emplace_back(r, r, diag(r));
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

EnsembleOperator assemble_hx(int M, int N) {
  const long dim = symspace_dim(M, N);
  const int n = N + 1;
  EnsembleOperator op;
  op.num_ensembles = M;
  op.ensemble_size = N;
  op.matrix.resize(dim, dim);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * M * dim);
  long stride = dim;
  for (int site = 0; site < M; ++site) {
    stride /= n;
    for (long r = 0; r < dim; ++r) {
      const int k = static_cast<int>((r / stride) % n);
      if (k < N)
        trip.emplace_back(r + stride, r, -std::sqrt(double(k + 1) * double(N - k)));
      if (k > 0)
        trip.emplace_back(r - stride, r, -std::sqrt(double(k) * double(N - k + 1)));
    }
  }
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

EnsembleOperator hamiltonian(const ProblemInstance& inst, int N, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("hamiltonian: lambda must lie in [0, 1]");
  EnsembleOperator hz = assemble_hz(inst, N);
  const EnsembleOperator hx = assemble_hx(inst.size(), N);
  hz.matrix = (1.0 - lambda) * hx.matrix + lambda * hz.matrix;
  return hz;
}

std::optional<SpinConfiguration> majority_label(const FockIndex& fock) {
  const int M = static_cast<int>(fock.k.size());
  SpinConfiguration sigma(M);
  for (int i = 0; i < M; ++i) {
    const int d = fock.N - 2 * fock.k[i];
    if (d == 0) return std::nullopt;
    sigma(i) = d > 0 ? 1 : -1;
  }
  return sigma;
}

}  // namespace eaqc
