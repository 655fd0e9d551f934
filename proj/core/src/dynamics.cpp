#include "eaqc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "eaqc/landscape.hpp"
#include "eaqc/parallel.hpp"
#include "eaqc/symspace.hpp"

namespace eaqc {

namespace {

using cplx = std::complex<double>;

constexpr double kNormDriftLimit = 1e-6;
constexpr double kPositivityLimit = -1e-6;
constexpr long kQubitGuard = 12;   // individual-dephasing mode: N*M cap
constexpr long kShiftResync = 25;  // steps between spectral-shift updates

// Hamiltonian with Kronecker structure: a diagonal problem part plus a
// symmetric ladder coupling along every tensor axis,
//   H(lambda) = (1-lambda) * (-sum_ax S_ax) + lambda * diag(hz).
// Axes are the M ensembles (symmetric subspace, n = N+1) or the N*M
// individual qubits (full space, n = 2).
struct TensorModel {
  int num_ensembles = 0;
  int ensemble_size = 0;
  long dim = 0;
  std::vector<int> axis_n;
  std::vector<long> axis_stride;
  std::vector<Eigen::VectorXd> up;      // <k+1|s|k> per axis
  std::vector<Eigen::VectorXd> dvals;   // diagonal of s^z per axis position
  Eigen::VectorXd hz;
};

TensorModel collective_model(const ProblemInstance& inst, int N) {
  TensorModel md;
  md.num_ensembles = inst.size();
  md.ensemble_size = N;
  md.dim = symspace_dim(inst.size(), N);
  const int n = N + 1;
  long stride = md.dim;
  for (int i = 0; i < md.num_ensembles; ++i) {
    stride /= n;
    md.axis_n.push_back(n);
    md.axis_stride.push_back(stride);
    Eigen::VectorXd lad(n - 1);
    for (int k = 0; k + 1 < n; ++k) lad(k) = std::sqrt(double(k + 1) * double(N - k));
    md.up.push_back(lad);
    Eigen::VectorXd d(n);
    for (int k = 0; k < n; ++k) d(k) = N - 2 * k;
    md.dvals.push_back(d);
  }
  md.hz = hz_diagonal(inst, N);
  return md;
}

TensorModel individual_model(const ProblemInstance& inst, int N) {
  TensorModel md;
  md.num_ensembles = inst.size();
  md.ensemble_size = N;
  const long Q = static_cast<long>(inst.size()) * N;
  if (Q > kQubitGuard)
    throw std::domain_error("evolve_individual_dephasing: N*M exceeds the qubit guard");
  md.dim = 1L << Q;
  for (long q = 0; q < Q; ++q) {
    md.axis_n.push_back(2);
    md.axis_stride.push_back(1L << (Q - 1 - q));
    md.up.push_back(Eigen::VectorXd::Ones(1));
    Eigen::VectorXd d(2);
    d << 1.0, -1.0;
    md.dvals.push_back(d);
  }
  // hz over bitstrings; qubit q belongs to ensemble q / N, bit 0 = spin up
  md.hz.resize(md.dim);
  const int M = inst.size();
  std::vector<double> dz(M);
  for (long flat = 0; flat < md.dim; ++flat) {
    for (int i = 0; i < M; ++i) {
      int s = 0;
      for (int qq = 0; qq < N; ++qq) {
        const long q = static_cast<long>(i) * N + qq;
        s += ((flat >> (Q - 1 - q)) & 1L) ? -1 : 1;
      }
      dz[i] = s;
    }
    double v = 0.0;
    for (int i = 0; i < M; ++i) {
      double row = 0.0;
      for (int j = 0; j < M; ++j) row += inst.J(i, j) * dz[j];
      v += dz[i] * row / N + inst.K(i) * dz[i];
    }
    md.hz(flat) = v;
  }
  return md;
}

// Y = -i * [ (lam*hz - shift) o X - (1-lam) * sum_ax S_ax X ], column blocks.
void apply_stage_left(const TensorModel& md, const cplx* X, cplx* Y, long cols,
                      double lam, double shift) {
  const long dim = md.dim;
  const double cx = -(1.0 - lam);
  const double* hz = md.hz.data();
  for (long c = 0; c < cols; ++c) {
    const cplx* x = X + c * dim;
    cplx* y = Y + c * dim;
    for (long r = 0; r < dim; ++r) y[r] = (lam * hz[r] - shift) * x[r];
    for (std::size_t ax = 0; ax < md.axis_n.size(); ++ax) {
      const long st = md.axis_stride[ax];
      const int n = md.axis_n[ax];
      const double* lad = md.up[ax].data();
      const long block = st * n;
      for (long base = 0; base < dim; base += block) {
        for (int a = 0; a + 1 < n; ++a) {
          const double w = cx * lad[a];
          cplx* ylo = y + base + a * st;
          const cplx* xlo = x + base + a * st;
          for (long l = 0; l < st; ++l) {
            ylo[l] += w * xlo[l + st];
            ylo[l + st] += w * xlo[l];
          }
        }
      }
    }
    for (long r = 0; r < dim; ++r) y[r] = cplx(y[r].imag(), -y[r].real());
  }
}

// Y = X * (+i Htilde): the adjoint stage, acting on the column index.
void apply_stage_right(const TensorModel& md, const Eigen::MatrixXcd& X,
                       Eigen::MatrixXcd& Y, double lam, double shift) {
  const long dim = md.dim;
  const double cx = -(1.0 - lam);
  for (long c = 0; c < dim; ++c)
    Y.col(c) = (lam * md.hz(c) - shift) * X.col(c);
  for (std::size_t ax = 0; ax < md.axis_n.size(); ++ax) {
    const long st = md.axis_stride[ax];
    const int n = md.axis_n[ax];
    const Eigen::VectorXd& lad = md.up[ax];
    const long block = st * n;
    for (long base = 0; base < dim; base += block) {
      for (int a = 0; a + 1 < n; ++a) {
        const double w = cx * lad(a);
        for (long l = 0; l < st; ++l) {
          Y.col(base + a * st + l) += w * X.col(base + (a + 1) * st + l);
          Y.col(base + (a + 1) * st + l) += w * X.col(base + a * st + l);
        }
      }
    }
  }
  Y *= cplx(0.0, 1.0);
}

struct StageTimes {
  double l1, l2, l3;  // lambda at t, t+h/2, t+h (clamped)
};

StageTimes stage_lambdas(double t, double h, double tau) {
  auto lam = [tau](double tt) { return std::clamp(tt / tau, 0.0, 1.0); };
  return {lam(t), lam(t + 0.5 * h), lam(t + h)};
}

// One classical RK4 step of dX/dt = -i Htilde(t) X applied to the columns of
// X in place; propagates X -> R X.
void rk4_left(const TensorModel& md, Eigen::MatrixXcd& X, double t, double h,
              double tau, double shift, Eigen::MatrixXcd& k, Eigen::MatrixXcd& tmp,
              Eigen::MatrixXcd& acc) {
  const long cols = X.cols();
  const StageTimes st = stage_lambdas(t, h, tau);
  acc = X;
  apply_stage_left(md, X.data(), k.data(), cols, st.l1, shift);
  acc += (h / 6.0) * k;
  tmp = X + (h / 2.0) * k;
  apply_stage_left(md, tmp.data(), k.data(), cols, st.l2, shift);
  acc += (h / 3.0) * k;
  tmp = X + (h / 2.0) * k;
  apply_stage_left(md, tmp.data(), k.data(), cols, st.l2, shift);
  acc += (h / 3.0) * k;
  tmp = X + h * k;
  apply_stage_left(md, tmp.data(), k.data(), cols, st.l3, shift);
  acc += (h / 6.0) * k;
  X.swap(acc);
}

// Mirrored stages: X -> X R^dag, so that rk4_right(rk4_left(rho)) = R rho R^dag.
void rk4_right(const TensorModel& md, Eigen::MatrixXcd& X, double t, double h,
               double tau, double shift, Eigen::MatrixXcd& k, Eigen::MatrixXcd& tmp,
               Eigen::MatrixXcd& acc) {
  const StageTimes st = stage_lambdas(t, h, tau);
  acc = X;
  apply_stage_right(md, X, k, st.l1, shift);
  acc += (h / 6.0) * k;
  tmp = X + (h / 2.0) * k;
  apply_stage_right(md, tmp, k, st.l2, shift);
  acc += (h / 3.0) * k;
  tmp = X + (h / 2.0) * k;
  apply_stage_right(md, tmp, k, st.l2, shift);
  acc += (h / 3.0) * k;
  tmp = X + h * k;
  apply_stage_right(md, tmp, k, st.l3, shift);
  acc += (h / 6.0) * k;
  X.swap(acc);
}

// tr(H(lam) rho) without forming H rho; also valid for a pure column with
// rho = psi psi^dag via the vector overload below.
double mean_energy(const TensorModel& md, const Eigen::MatrixXcd& rho, double lam) {
  double e = 0.0;
  for (long r = 0; r < md.dim; ++r) e += lam * md.hz(r) * rho(r, r).real();
  for (std::size_t ax = 0; ax < md.axis_n.size(); ++ax) {
    const long st = md.axis_stride[ax];
    const int n = md.axis_n[ax];
    const Eigen::VectorXd& lad = md.up[ax];
    const long block = st * n;
    double sx = 0.0;
    for (long base = 0; base < md.dim; base += block)
      for (int a = 0; a + 1 < n; ++a)
        for (long l = 0; l < st; ++l) {
          const long r = base + a * st + l;
          sx += lad(a) * 2.0 * rho(r + st, r).real();
        }
    e += -(1.0 - lam) * sx;
  }
  double tr = 0.0;
  for (long r = 0; r < md.dim; ++r) tr += rho(r, r).real();
  return tr != 0.0 ? e / tr : 0.0;
}

double mean_energy_state(const TensorModel& md, const Eigen::VectorXcd& psi, double lam) {
  double e = 0.0, nrm = 0.0;
  for (long r = 0; r < md.dim; ++r) {
    e += lam * md.hz(r) * std::norm(psi(r));
    nrm += std::norm(psi(r));
  }
  for (std::size_t ax = 0; ax < md.axis_n.size(); ++ax) {
    const long st = md.axis_stride[ax];
    const int n = md.axis_n[ax];
    const Eigen::VectorXd& lad = md.up[ax];
    const long block = st * n;
    double sx = 0.0;
    for (long base = 0; base < md.dim; base += block)
      for (int a = 0; a + 1 < n; ++a)
        for (long l = 0; l < st; ++l) {
          const long r = base + a * st + l;
          sx += lad(a) * 2.0 * (std::conj(psi(r + st)) * psi(r)).real();
        }
    e += -(1.0 - lam) * sx;
  }
  return nrm != 0.0 ? e / nrm : 0.0;
}

// Dephasing decay exponents (Gamma/2) sum_ax (d_ax(a) - d_ax(b))^2; the same
// expression covers collective ensembles and individual qubits.
Eigen::MatrixXd dephasing_rate(const TensorModel& md,
                               const std::vector<Eigen::VectorXd>& axis_dvals) {
  const int na = static_cast<int>(md.axis_n.size());
  std::vector<Eigen::VectorXd> dflat(na, Eigen::VectorXd(md.dim));
  for (int ax = 0; ax < na; ++ax) {
    const long st = md.axis_stride[ax];
    const int n = md.axis_n[ax];
    for (long r = 0; r < md.dim; ++r)
      dflat[ax](r) = axis_dvals[ax]((r / st) % n);
  }
  Eigen::MatrixXd rate = Eigen::MatrixXd::Zero(md.dim, md.dim);
  for (int ax = 0; ax < na; ++ax) {
    const Eigen::VectorXd& d = dflat[ax];
    for (long b = 0; b < md.dim; ++b)
      for (long a = 0; a < md.dim; ++a) {
        const double diff = d(a) - d(b);
        rate(a, b) += 0.5 * diff * diff;
      }
  }
  return rate;
}

Eigen::VectorXcd initial_product_state(int M, int N) {
  const int n = N + 1;
  Eigen::VectorXd one(n);
  for (int k = 0; k < n; ++k) {
    double logc = std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0);
    one(k) = std::exp(0.5 * (logc - N * std::log(2.0)));
  }
  long dim = 1;
  for (int i = 0; i < M; ++i) dim *= n;
  Eigen::VectorXcd psi(dim);
  for (long flat = 0; flat < dim; ++flat) {
    long rest = flat;
    double amp = 1.0;
    for (int i = 0; i < M; ++i) {
      amp *= one(rest % n);
      rest /= n;
    }
    psi(flat) = amp;
  }
  return psi;
}

// Majority-vote tag of every basis state of a model, against sigma*.
std::vector<LevelTag> basis_tags(const TensorModel& md, const ProblemInstance& inst,
                                 bool individual) {
  const LandscapeSummary ls = analyze_landscape(inst);
  const int M = inst.size();
  const int N = md.ensemble_size;
  std::vector<LevelTag> tags(md.dim);
  for (long flat = 0; flat < md.dim; ++flat) {
    bool unresolved = false, equivalent = true;
    for (int i = 0; i < M; ++i) {
      double dz;
      if (individual) {
        const long Q = static_cast<long>(M) * N;
        int s = 0;
        for (int qq = 0; qq < N; ++qq) {
          const long q = static_cast<long>(i) * N + qq;
          s += ((flat >> (Q - 1 - q)) & 1L) ? -1 : 1;
        }
        dz = s;
      } else {
        dz = md.dvals[i](static_cast<long>(flat / md.axis_stride[i]) % md.axis_n[i]);
      }
      if (dz == 0.0) {
        unresolved = true;
        break;
      }
      if ((dz > 0 ? 1 : -1) != ls.sigma_star(i)) equivalent = false;
    }
    tags[flat] = unresolved ? LevelTag::Unresolved
                            : (equivalent ? LevelTag::Equivalent : LevelTag::Error);
  }
  return tags;
}

void finalize_levels(RunResult& out, const TensorModel& md, const ProblemInstance& inst,
                     bool individual) {
  const std::vector<LevelTag> tags = basis_tags(md, inst, individual);
  std::vector<long> order(md.dim);
  std::iota(order.begin(), order.end(), 0L);
  std::stable_sort(order.begin(), order.end(),
                   [&](long a, long b) { return md.hz(a) < md.hz(b); });
  out.level_probs.resize(md.dim);
  out.level_energies.resize(md.dim);
  out.level_tags.resize(md.dim);
  double success = 0.0;
  for (long l = 0; l < md.dim; ++l) {
    const long flat = order[l];
    const double p = out.mixed ? out.rho(flat, flat).real() : std::norm(out.state(flat));
    out.level_probs(l) = p;
    out.level_energies(l) = md.hz(flat);
    out.level_tags[l] = tags[flat];
    if (tags[flat] == LevelTag::Equivalent) success += p;
  }
  out.success = success;
  out.error = 1.0 - success;
}

void check_density_integrity(RunResult& out) {
  const long dim = out.rho.rows();
  out.norm_drift = std::abs(out.rho.trace().real() - 1.0);
  double herm = 0.0;
  for (long c = 0; c < dim; ++c)
    for (long r = 0; r <= c; ++r)
      herm = std::max(herm, std::abs(out.rho(r, c) - std::conj(out.rho(c, r))));
  out.hermiticity_error = herm;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (out.rho + out.rho.adjoint()), Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues()(0);
  if (out.norm_drift > kNormDriftLimit)
    throw std::runtime_error("evolve: trace drift exceeds 1e-6, step size too coarse");
  if (out.min_eigenvalue < kPositivityLimit)
    throw std::runtime_error("evolve: positivity violated beyond -1e-6");
}

void axis_transform(Eigen::MatrixXcd& X, const Eigen::MatrixXd& G, long st, int n,
                    bool left, bool transposed) {
  // left:  X[base+a*st+l, c] <- sum_a' G'(a,a') X[base+a'*st+l, c]
  // right: same on the column index; G' = G^T when `transposed`
  const long dim = left ? X.rows() : X.cols();
  const long block = st * n;
  Eigen::VectorXcd buf(n);
  if (left) {
    const long cols = X.cols();
    for (long c = 0; c < cols; ++c)
      for (long base = 0; base < dim; base += block)
        for (long l = 0; l < st; ++l) {
          for (int a = 0; a < n; ++a) buf(a) = X(base + a * st + l, c);
          for (int a = 0; a < n; ++a) {
            cplx v = 0.0;
            for (int ap = 0; ap < n; ++ap)
              v += (transposed ? G(ap, a) : G(a, ap)) * buf(ap);
            X(base + a * st + l, c) = v;
          }
        }
  } else {
    const long rows = X.rows();
    Eigen::MatrixXcd cb(rows, n);
    for (long base = 0; base < dim; base += block)
      for (long l = 0; l < st; ++l) {
        for (int a = 0; a < n; ++a) cb.col(a) = X.col(base + a * st + l);
        for (int a = 0; a < n; ++a) {
          Eigen::VectorXcd v = Eigen::VectorXcd::Zero(rows);
          for (int ap = 0; ap < n; ++ap)
            v += (transposed ? G(ap, a) : G(a, ap)) * cb.col(ap);
          X.col(base + a * st + l) = v;
        }
      }
  }
}

struct XDephasing {
  Eigen::MatrixXd G;     // S^x = G diag(ev) G^T on one ensemble
  Eigen::MatrixXd W;     // decay factor in the rotated basis
};

}  // namespace

long default_steps(double tau) {
  if (tau <= 0.0) throw std::invalid_argument("schedule: tau must be positive");
  return static_cast<long>(std::max(10000.0, std::ceil(100.0 * tau)));
}

RunResult evolve_pure(const ProblemInstance& inst, int N, Schedule schedule, long steps) {
  inst.validate();
  const TensorModel md = collective_model(inst, N);
  if (steps <= 0) steps = default_steps(schedule.tau);
  const double h = schedule.tau / steps;

  Eigen::MatrixXcd psi = initial_product_state(inst.size(), N);
  Eigen::MatrixXcd k(md.dim, 1), tmp(md.dim, 1), acc(md.dim, 1);
  double shift = -static_cast<double>(N) * inst.size();
  for (long i = 0; i < steps; ++i) {
    const double t = i * h;
    if (i % kShiftResync == 0)
      shift = mean_energy_state(md, psi.col(0),
                                std::clamp((t + 0.5 * h) / schedule.tau, 0.0, 1.0));
    rk4_left(md, psi, t, h, schedule.tau, shift, k, tmp, acc);
  }

  RunResult out;
  out.num_ensembles = inst.size();
  out.ensemble_size = N;
  out.mixed = false;
  out.state = psi.col(0);
  out.steps = steps;
  out.norm_drift = std::abs(out.state.norm() - 1.0);
  if (out.norm_drift > kNormDriftLimit)
    throw std::runtime_error("evolve_pure: norm drift exceeds 1e-6, step size too coarse");
  finalize_levels(out, md, inst, false);
  return out;
}

RunResult evolve_lindblad(const ProblemInstance& inst, int N, Schedule schedule,
                          double gamma_z, double gamma_x, long steps,
                          const std::function<void(double, const Eigen::MatrixXcd&)>& observer,
                          long observe_every) {
  inst.validate();
  if (gamma_z < 0.0 || gamma_x < 0.0)
    throw std::invalid_argument("evolve_lindblad: dephasing rates must be >= 0");
  const TensorModel md = collective_model(inst, N);
  if (steps <= 0) steps = default_steps(schedule.tau);
  const double h = schedule.tau / steps;

  const Eigen::VectorXcd psi0 = initial_product_state(inst.size(), N);
  Eigen::MatrixXcd rho = psi0 * psi0.adjoint();
  Eigen::MatrixXcd k(md.dim, md.dim), tmp(md.dim, md.dim), acc(md.dim, md.dim);

  // exact dephasing factors for a half step
  Eigen::MatrixXd Wz, Wx;
  XDephasing xd;
  if (gamma_z > 0.0) {
    Wz = (-gamma_z * (h / 2.0) * dephasing_rate(md, md.dvals).array()).exp();
  }
  if (gamma_x > 0.0) {
    const int n = N + 1;
    Eigen::MatrixXd sx = Eigen::MatrixXd::Zero(n, n);
    for (int kk = 0; kk + 1 < n; ++kk)
      sx(kk + 1, kk) = sx(kk, kk + 1) = std::sqrt(double(kk + 1) * double(N - kk));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sx);
    xd.G = es.eigenvectors();
    std::vector<Eigen::VectorXd> dx(md.axis_n.size(), es.eigenvalues());
    Wx = (-gamma_x * (h / 2.0) * dephasing_rate(md, dx).array()).exp();
  }

  auto dephase_half = [&](bool x_first) {
    auto apply_z = [&] {
      if (gamma_z > 0.0) rho.array() *= Wz.array();
    };
    auto apply_x = [&] {
      if (gamma_x <= 0.0) return;
      for (std::size_t ax = 0; ax < md.axis_n.size(); ++ax) {
        axis_transform(rho, xd.G, md.axis_stride[ax], md.axis_n[ax], true, true);
        axis_transform(rho, xd.G, md.axis_stride[ax], md.axis_n[ax], false, false);
      }
      rho.array() *= Wx.array();
      for (std::size_t ax = 0; ax < md.axis_n.size(); ++ax) {
        axis_transform(rho, xd.G, md.axis_stride[ax], md.axis_n[ax], true, false);
        axis_transform(rho, xd.G, md.axis_stride[ax], md.axis_n[ax], false, true);
      }
    };
    if (x_first) {
      apply_x();
      apply_z();
    } else {
      apply_z();
      apply_x();
    }
  };

  double shift = -static_cast<double>(N) * inst.size();
  if (observer) observer(0.0, rho);
  for (long i = 0; i < steps; ++i) {
    const double t = i * h;
    if (i % kShiftResync == 0)
      shift = mean_energy(md, rho, std::clamp((t + 0.5 * h) / schedule.tau, 0.0, 1.0));
    dephase_half(false);
    rk4_left(md, rho, t, h, schedule.tau, shift, k, tmp, acc);
    rk4_right(md, rho, t, h, schedule.tau, shift, k, tmp, acc);
    dephase_half(true);
    if (observer && observe_every > 0 && (i + 1) % observe_every == 0)
      observer((i + 1) * h, rho);
  }

  RunResult out;
  out.num_ensembles = inst.size();
  out.ensemble_size = N;
  out.mixed = true;
  out.rho = std::move(rho);
  out.steps = steps;
  check_density_integrity(out);
  finalize_levels(out, md, inst, false);
  return out;
}

RunResult evolve_individual_dephasing(const ProblemInstance& inst, int N,
                                      Schedule schedule, double gamma_z, long steps) {
  inst.validate();
  if (gamma_z < 0.0)
    throw std::invalid_argument("evolve_individual_dephasing: gamma must be >= 0");
  const TensorModel md = individual_model(inst, N);
  if (steps <= 0) steps = default_steps(schedule.tau);
  const double h = schedule.tau / steps;

  const Eigen::VectorXcd sym0 = initial_product_state(inst.size(), N);
  const Eigen::VectorXcd psi0 = embed_symmetric_state(sym0, inst.size(), N);
  Eigen::MatrixXcd rho = psi0 * psi0.adjoint();
  Eigen::MatrixXcd k(md.dim, md.dim), tmp(md.dim, md.dim), acc(md.dim, md.dim);

  Eigen::MatrixXd Wz;
  if (gamma_z > 0.0) {
    // rate_ab = 2 Gz hamming(a,b) == (Gz/2) sum_q (s_q(a)-s_q(b))^2
    Wz = (-gamma_z * (h / 2.0) * dephasing_rate(md, md.dvals).array()).exp();
  }

  double shift = -static_cast<double>(N) * inst.size();
  for (long i = 0; i < steps; ++i) {
    const double t = i * h;
    if (i % kShiftResync == 0)
      shift = mean_energy(md, rho, std::clamp((t + 0.5 * h) / schedule.tau, 0.0, 1.0));
    if (gamma_z > 0.0) rho.array() *= Wz.array();
    rk4_left(md, rho, t, h, schedule.tau, shift, k, tmp, acc);
    rk4_right(md, rho, t, h, schedule.tau, shift, k, tmp, acc);
    if (gamma_z > 0.0) rho.array() *= Wz.array();
  }

  RunResult out;
  out.num_ensembles = inst.size();
  out.ensemble_size = N;
  out.mixed = true;
  out.rho = std::move(rho);
  out.steps = steps;
  check_density_integrity(out);
  finalize_levels(out, md, inst, true);
  return out;
}

Eigen::VectorXcd embed_symmetric_state(const Eigen::VectorXcd& state, int M, int N) {
  const long Q = static_cast<long>(M) * N;
  if (Q > kQubitGuard)
    throw std::domain_error("embed_symmetric_state: N*M exceeds the qubit guard");
  const long dim_full = 1L << Q;
  const int n = N + 1;
  Eigen::VectorXd logc(n);
  for (int kk = 0; kk < n; ++kk)
    logc(kk) = std::lgamma(N + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(N - kk + 1.0);
  Eigen::VectorXcd full(dim_full);
  for (long flat = 0; flat < dim_full; ++flat) {
    long sym = 0;
    double lognorm = 0.0;
    for (int i = 0; i < M; ++i) {
      int k = 0;
      for (int qq = 0; qq < N; ++qq) {
        const long q = static_cast<long>(i) * N + qq;
        k += (flat >> (Q - 1 - q)) & 1L;
      }
      sym = sym * n + k;
      lognorm += logc(k);
    }
    full(flat) = state(sym) * std::exp(-0.5 * lognorm);
  }
  return full;
}

LevelDistribution final_distribution(const RunResult& result, bool display_normalized) {
  LevelDistribution out;
  out.energies = result.level_energies;
  out.probabilities = result.level_probs;
  out.tags = result.level_tags;
  if (display_normalized) {
    const double mx = out.probabilities.maxCoeff();
    if (mx > 0.0) out.probabilities /= mx;
  }
  return out;
}

double error_probability(const RunResult& result) { return result.error; }

std::vector<BatchCell> batch_errors(const std::vector<ProblemInstance>& set,
                                    const std::vector<int>& ensemble_sizes,
                                    const std::vector<double>& taus, double gamma_z,
                                    double gamma_x, int threads, long steps) {
  std::vector<BatchCell> cells;
  for (int i = 0; i < static_cast<int>(set.size()); ++i)
    for (int N : ensemble_sizes)
      for (double tau : taus) {
        BatchCell c;
        c.instance_id = i;
        c.N = N;
        c.tau = tau;
        c.gamma_z = gamma_z;
        c.gamma_x = gamma_x;
        cells.push_back(c);
      }
  parallel_for(static_cast<int>(cells.size()), threads, [&](int ci) {
    BatchCell& c = cells[ci];
    try {
      const Schedule sched{c.tau};
      const RunResult r =
          (gamma_z == 0.0 && gamma_x == 0.0)
              ? evolve_pure(set[c.instance_id], c.N, sched, steps)
              : evolve_lindblad(set[c.instance_id], c.N, sched, gamma_z, gamma_x, steps);
      c.success = r.success;
      c.error = r.error;
      c.steps = r.steps;
      c.norm_drift = r.norm_drift;
    } catch (const std::exception& e) {
      c.failed = true;
      c.message = e.what();
    }
  });
  return cells;
}

}  // namespace eaqc
