#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace eaqc {

// Spin configuration on the hypercube, entries strictly in {-1, +1}.
using SpinConfiguration = Eigen::VectorXi;

// Ising problem coefficients: symmetric zero-diagonal coupling matrix J and
// bias vector K over M logical sites.  Energies are dimensionless (hbar = 1),
// times carry inverse energy units.  Instances are immutable after
// construction and safe to share across threads.
struct ProblemInstance {
  Eigen::MatrixXd J;
  Eigen::VectorXd K;

  int size() const { return static_cast<int>(K.size()); }

  // Throws std::invalid_argument if J is not square of dimension |K|,
  // not symmetric, has a nonzero diagonal, or holds non-finite entries.
  void validate() const;
};

// J upper triangle (row-major, i<j) then K, all i.i.d. uniform on [-1, 1).
// Pure function of (M, seed).
ProblemInstance random_instance(int M, std::uint64_t seed);

// J_ij = -1 off the diagonal, K_i = K.  Requires M >= 2.
ProblemInstance ferromagnetic_instance(int M, double K);

// The M=3 instance J12 = J23 = 0.5, J13 = 0, K = (-1,-1,-1); its qubit
// ground state is unique.
ProblemInstance exact_cover_instance();

// JSON document with keys "M", "J" (full MxM array), "K" (length-M array).
// Round trips exactly; parse rejects malformed or invariant-violating input
// with a distinct diagnostic per failure mode.
std::string serialize_instance(const ProblemInstance& inst);
ProblemInstance parse_instance(const std::string& text);

ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

bool check_spins(const SpinConfiguration& sigma);

}  // namespace eaqc
