#include "helmprec/krylov.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "helmprec/errors.hpp"

namespace helmprec {

void GmresConfig::validate() const {
  if (restart < 1) throw std::invalid_argument("gmres: restart must be >= 1");
  if (maxOuter < 1) throw std::invalid_argument("gmres: maxOuter must be >= 1");
  if (!(relTol > 0.0)) throw std::invalid_argument("gmres: relTol must be positive");
}

double SolveReport::final_residual() const {
  return residualHistory.empty() ? 0.0 : residualHistory.back();
}

double SolveReport::residual_at(int k) const {
  if (residualHistory.empty()) return 0.0;
  const std::size_t idx = std::min(static_cast<std::size_t>(std::max(k, 0)), residualHistory.size() - 1);
  return residualHistory[idx];
}

namespace {

ComplexField apply_checked(const LinearMap& applyA, const ComplexField& x) {
  ComplexField y = applyA(x);
  if (!y.all_finite()) throw OperatorFailure("gmres: operator produced non-finite values");
  return y;
}

// Rotation (c, s) with c real so that [c, s; -conj(s), c] [a; b] = [r; 0].
void make_givens(Complex a, Complex b, double& c, Complex& s) {
  const double absA = std::abs(a);
  const double absB = std::abs(b);
  if (absB == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (absA == 0.0) {
    c = 0.0;
    s = std::conj(b) / absB;
    return;
  }
  const double norm = std::hypot(absA, absB);
  c = absA / norm;
  s = (a / absA) * std::conj(b) / norm;
}

}  // namespace

GmresResult gmres(const LinearMap& applyA, const ComplexField& b, const GmresConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const Grid2D& grid = b.grid();
  if (!b.all_finite()) throw std::invalid_argument("gmres: right-hand side is not finite");

  GmresResult result{ComplexField(grid, Complex(0.0, 0.0)), {}};
  SolveReport& rep = result.report;
  rep.paramEcho = {{"restart", std::to_string(cfg.restart)},
                   {"maxOuter", std::to_string(cfg.maxOuter)},
                   {"relTol", format_double(cfg.relTol)}};

  const double bnorm = norm2(b);
  auto finish = [&] {
    rep.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  if (bnorm == 0.0) {
    rep.residualHistory = {0.0};
    rep.converged = true;
    finish();
    return result;
  }

  const int m = cfg.restart;
  const int budget = cfg.max_iterations();
  const double breakdownTol = 1e-14 * bnorm;
  ComplexField& x = result.solution;
  ComplexField r = b;
  double beta = bnorm;
  rep.residualHistory.push_back(1.0);

  std::vector<ComplexField> basis;
  basis.reserve(static_cast<std::size_t>(m) + 1);
  Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<Complex> sn(static_cast<std::size_t>(m));
  std::vector<Complex> g(static_cast<std::size_t>(m) + 1);

  for (int outer = 0; outer < cfg.maxOuter && rep.iterations < budget; ++outer) {
    basis.clear();
    basis.push_back((1.0 / beta) * r);
    hess.setZero();
    std::fill(g.begin(), g.end(), Complex(0.0, 0.0));
    g[0] = beta;

    int steps = 0;
    bool stop = false;
    for (int j = 0; j < m && rep.iterations < budget; ++j) {
      ComplexField w = apply_checked(applyA, basis[j]);
      for (int i = 0; i <= j; ++i) {
        const Complex h = dot(basis[i], w);
        hess(i, j) = h;
        axpy(-h, basis[i], w);
      }
      const double subdiag = norm2(w);
      hess(j + 1, j) = subdiag;

      for (int i = 0; i < j; ++i) {
        const Complex t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
        hess(i + 1, j) = -std::conj(sn[i]) * hess(i, j) + cs[i] * hess(i + 1, j);
        hess(i, j) = t;
      }
      make_givens(hess(j, j), hess(j + 1, j), cs[j], sn[j]);
      hess(j, j) = cs[j] * hess(j, j) + sn[j] * hess(j + 1, j);
      hess(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];

      ++steps;
      ++rep.iterations;
      const double estimate = std::abs(g[j + 1]) / bnorm;
      if (cfg.recordResiduals) rep.residualHistory.push_back(estimate);

      if (subdiag < breakdownTol) {
        rep.breakdown = true;
        stop = true;
        break;
      }
      if (estimate <= cfg.relTol) {
        stop = true;
        break;
      }
      basis.push_back((1.0 / subdiag) * w);
    }

    // Back substitution on the rotated upper-triangular system.
    std::vector<Complex> y(static_cast<std::size_t>(steps));
    for (int i = steps - 1; i >= 0; --i) {
      Complex acc = g[i];
      for (int k = i + 1; k < steps; ++k) acc -= hess(i, k) * y[k];
      y[i] = acc / hess(i, i);
    }
    for (int i = 0; i < steps; ++i) axpy(y[i], basis[i], x);

    r = b - apply_checked(applyA, x);
    beta = norm2(r);
    const double trueRel = beta / bnorm;
    rep.restartEstimates.push_back(std::abs(g[steps]) / bnorm);
    rep.restartTrueResiduals.push_back(trueRel);
    if (cfg.recordResiduals) rep.residualHistory.back() = trueRel;

    if (trueRel <= cfg.relTol) {
      rep.converged = true;
      break;
    }
    if (stop && rep.breakdown) break;
    if (beta == 0.0) break;
  }
  if (!cfg.recordResiduals) rep.residualHistory.push_back(beta / bnorm);
  finish();
  return result;
}

Eigen::MatrixXcd assemble_dense(const LinearMap& applyA, const Grid2D& grid) {
  if (grid.n() > kDenseGuardN) {
    throw std::invalid_argument("assemble_dense: dense guard requires N <= " +
                                std::to_string(kDenseGuardN) + ", got N = " + std::to_string(grid.n()));
  }
  const auto dim = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd a(dim, dim);
  ComplexField unit(grid, Complex(0.0, 0.0));
  for (Eigen::Index j = 0; j < dim; ++j) {
    unit[static_cast<std::size_t>(j)] = 1.0;
    const ComplexField col = applyA(unit);
    require_same_grid(grid, col.grid(), "assemble_dense");
    for (Eigen::Index i = 0; i < dim; ++i) a(i, j) = col[static_cast<std::size_t>(i)];
    unit[static_cast<std::size_t>(j)] = 0.0;
  }
  return a;
}

Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXcd& matrix) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectral_cond_dense: eigensolver failed");
  return solver.eigenvalues();
}

double spectral_cond(const Eigen::VectorXcd& eigenvalues) {
  const Eigen::VectorXd moduli = eigenvalues.cwiseAbs();
  const double lo = moduli.minCoeff();
  if (lo < 1e-300) throw SingularOperator("spectral_cond_dense: operator is singular");
  return moduli.maxCoeff() / lo;
}

double spectral_cond_dense(const LinearMap& applyA, const Grid2D& grid) {
  return spectral_cond(dense_eigenvalues(assemble_dense(applyA, grid)));
}

ArnoldiResult arnoldi_extremal(const LinearMap& applyA, const Grid2D& grid, const ArnoldiConfig& cfg) {
  if (cfg.krylovDim < 1 || cfg.krylovDim > 200) {
    throw std::invalid_argument("arnoldi_extremal: Krylov dimension must be in [1, 200]");
  }
  const int m = std::min<int>(cfg.krylovDim, static_cast<int>(grid.size()));

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  ComplexField v(grid);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = Complex(normal(rng), normal(rng));
  scale(v, 1.0 / norm2(v));

  ArnoldiResult res;
  bool havePrev = false;
  Complex prev{0.0, 0.0};
  std::vector<ComplexField> basis;
  for (int restart = 0; restart <= cfg.maxRestarts; ++restart) {
    res.restarts = restart;
    basis.clear();
    basis.push_back(v);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
    int steps = 0;
    for (int j = 0; j < m; ++j) {
      ComplexField w = applyA(basis[j]);
      if (!w.all_finite()) throw OperatorFailure("arnoldi_extremal: operator produced non-finite values");
      for (int i = 0; i <= j; ++i) {
        const Complex hij = dot(basis[i], w);
        h(i, j) = hij;
        axpy(-hij, basis[i], w);
      }
      const double sub = norm2(w);
      h(j + 1, j) = sub;
      ++steps;
      if (sub <= 1e-14 * std::max(1.0, h.topLeftCorner(j + 1, j + 1).norm())) break;
      basis.push_back((1.0 / sub) * w);
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h.topLeftCorner(steps, steps));
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&best);
    const Complex theta = es.eigenvalues()(best);
    const Eigen::VectorXcd y = es.eigenvectors().col(best);
    const double ritzResidual = std::abs(h(steps, steps - 1)) * std::abs(y(steps - 1)) / y.norm();

    res.eigenvalue = theta;
    const bool invariant = steps < m;
    if (invariant || ritzResidual <= cfg.tol * std::abs(theta) ||
        (havePrev && std::abs(theta - prev) <= cfg.tol * std::abs(theta))) {
      res.converged = true;
      return res;
    }
    prev = theta;
    havePrev = true;

    ComplexField next(grid, Complex(0.0, 0.0));
    for (int i = 0; i < steps; ++i) axpy(y(i), basis[i], next);
    scale(next, 1.0 / norm2(next));
    v = std::move(next);
  }
  return res;
}

}  // namespace helmprec
