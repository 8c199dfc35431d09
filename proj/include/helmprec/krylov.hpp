#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "helmprec/grid.hpp"
#include "helmprec/operators.hpp"

namespace helmprec {

struct GmresConfig {
  int restart = 10;
  int maxOuter = 10;  ///< restart * maxOuter = 100 iterations by default
  double relTol = 1e-8;
  bool recordResiduals = true;

  int max_iterations() const { return restart * maxOuter; }
  void validate() const;
};

struct SolveReport {
  /// Relative residual ||b - A x_k|| / ||b|| after k iterations: the
  /// Givens least-squares estimate inside a cycle, replaced by the true
  /// residual at the last iteration of every cycle. Entry 0 is x_0 = 0.
  std::vector<double> residualHistory;
  std::vector<double> restartEstimates;      ///< estimate at the end of each cycle
  std::vector<double> restartTrueResiduals;  ///< true residual at the end of each cycle
  int iterations = 0;
  bool converged = false;
  bool breakdown = false;  ///< happy breakdown or stagnation flagged
  double wallSeconds = 0.0;
  std::map<std::string, std::string> paramEcho;

  double final_residual() const;
  /// Residual after `k` iterations, or the last recorded one if the solve
  /// stopped earlier.
  double residual_at(int k) const;
};

struct GmresResult {
  ComplexField solution;
  SolveReport report;
};

/// Restarted GMRES(m) with modified Gram-Schmidt and Givens rotations,
/// starting from x_0 = 0. Throws OperatorFailure if applyA returns a
/// non-finite value.
GmresResult gmres(const LinearMap& applyA, const ComplexField& b, const GmresConfig& cfg);

/// Largest grid dimension accepted by the dense oracle.
inline constexpr int kDenseGuardN = 80;

/// Column j is applyA(e_j). Requires N <= kDenseGuardN.
Eigen::MatrixXcd assemble_dense(const LinearMap& applyA, const Grid2D& grid);

Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXcd& matrix);

/// max |lambda| / min |lambda| of the assembled operator. Throws
/// SingularOperator when min |lambda| < 1e-300.
double spectral_cond_dense(const LinearMap& applyA, const Grid2D& grid);
double spectral_cond(const Eigen::VectorXcd& eigenvalues);

struct ArnoldiConfig {
  int krylovDim = 40;
  double tol = 1e-10;
  int maxRestarts = 200;
  std::uint64_t seed = 12345;
};

struct ArnoldiResult {
  Complex eigenvalue{0.0, 0.0};
  bool converged = false;
  int restarts = 0;
};

/// Largest-modulus eigenvalue by explicitly restarted Arnoldi (restart
/// vector = dominant Ritz vector). Converged once two successive Ritz
/// estimates agree to `tol` relative, or the Ritz residual does.
ArnoldiResult arnoldi_extremal(const LinearMap& applyA, const Grid2D& grid,
                               const ArnoldiConfig& cfg = {});

}  // namespace helmprec
