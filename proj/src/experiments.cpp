#include "helmprec/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "helmprec/operators.hpp"
#include "helmprec/symbol_interp.hpp"

namespace helmprec {

namespace {

constexpr double kPi = std::numbers::pi;

std::ofstream open_text(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

PrecondPlan plan_for(const MediaModel& media, double omega, int m, int mTilde) {
  if (m == 1) return build_single_node_plan(media, omega);
  return build_plan(media.grid, media, omega, m, mTilde);
}

}  // namespace

void ExperimentSpec::validate() const {
  if (ppw && !ns.empty()) throw std::invalid_argument("experiment: give either ppw or N, not both");
  if (ppw && !(*ppw > 0.0)) throw std::invalid_argument("experiment: ppw must be positive");
  for (double w : omegas) {
    if (!(w > 0.0)) throw std::invalid_argument("experiment: omega must be positive");
  }
  for (int m : ms) {
    if (m < 1) throw std::invalid_argument("experiment: M must be >= 1");
  }
  if (mTilde && *mTilde < 1) throw std::invalid_argument("experiment: Mtilde must be >= 1");
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (restart < 1 || maxIter < 1) throw std::invalid_argument("experiment: restart and maxiter must be >= 1");
}

int grid_size_for_ppw(double ppw, double omega, double c_o, double side) {
  const double exact = ppw * side * omega / (2.0 * kPi * c_o);
  return 2 * static_cast<int>(std::lround(exact / 2.0));
}

double ppw_for_grid(int n, double omega, double c_o, double side) {
  return 2.0 * kPi * c_o * n / (side * omega);
}

std::vector<int> resolve_grid_sizes(const ExperimentSpec& spec, double omega) {
  if (spec.ppw) return {grid_size_for_ppw(*spec.ppw, omega)};
  if (spec.ns.empty()) throw std::invalid_argument("experiment: one of ppw or N is required");
  return spec.ns;
}

double fit_complexity_order(const std::vector<BenchRow>& rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(std::log(static_cast<double>(r.n) * r.n));
    y.push_back(std::log(r.medianSeconds / (r.m * std::log(static_cast<double>(r.n)))));
  }
  return ls_slope(x, y);
}

BenchResult bench_complexity(const std::vector<int>& ns, const std::vector<int>& ms, int trials,
                             double omega) {
  if (ns.size() < 3) throw std::invalid_argument("bench_complexity: need at least 3 grid sizes");
  if (!std::is_sorted(ns.begin(), ns.end())) throw std::invalid_argument("bench_complexity: N must ascend");
  if (trials < 1) throw std::invalid_argument("bench_complexity: trials must be >= 1");
  // Timings are not part of the reproducible output, so the bench uses
  // measured FFT plans; the previous mode is restored for later work.
  const FftPlanning previous = fft_planning();
  set_fft_planning(FftPlanning::Measure);
  struct Restore {
    FftPlanning mode;
    ~Restore() { set_fft_planning(mode); }
  } restore{previous};

  BenchResult result;
  for (int n : ns) {
    const Grid2D grid(n, 1.0);
    // Wide transition so all speed nodes are hit on coarse grids too.
    const MediaModel media = make_circular_inclusion(grid, 1.0, 4.0, 0.02, 0.05, 20.0);
    ComplexField v(grid);
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] = Complex(std::cos(0.37 * static_cast<double>(k)), std::sin(0.11 * static_cast<double>(k)));
    }
    for (int m : ms) {
      const PrecondPlan plan = plan_for(media, omega, m, 1);
      (void)plan.apply(v);
      std::vector<double> times;
      for (int t = 0; t < trials; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        const ComplexField out = plan.apply(v);
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
      result.rows.push_back({n, m, median(times), 0.0});
    }
  }
  const double base = result.rows.front().medianSeconds;
  for (auto& r : result.rows) r.normalized = r.medianSeconds / base;
  for (int m : ms) {
    std::vector<BenchRow> subset;
    std::copy_if(result.rows.begin(), result.rows.end(), std::back_inserter(subset),
                 [m](const BenchRow& r) { return r.m == m; });
    result.betaByM[m] = fit_complexity_order(subset);
  }
  result.beta = fit_complexity_order(result.rows);
  return result;
}

std::vector<CondRow> cond_sweep(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.omegas.empty()) throw std::invalid_argument("cond_sweep: omega is required");
  std::vector<CondRow> rows;
  for (double omega : spec.omegas) {
    for (int n : resolve_grid_sizes(spec, omega)) {
      if (n > kDenseGuardN) {
        throw std::invalid_argument("cond_sweep: dense guard requires N <= " + std::to_string(kDenseGuardN) +
                                    ", got N = " + std::to_string(n));
      }
      const Grid2D grid(n, 1.0);
      const MediaModel media = make_circular_inclusion(grid, 1.0, spec.delta, spec.eta, 0.05, spec.damping);
      const auto params = make_params(omega, media);
      const HelmholtzOperator op(params);
      const Eigen::MatrixXcd pDense = assemble_dense(op, grid);
      const double condP = spectral_cond(dense_eigenvalues(pDense));
      for (int m : spec.ms) {
        const PrecondPlan plan = plan_for(media, omega, m, 1);
        // Q P column by column: apply Q to each column of the assembled P.
        Eigen::MatrixXcd qp(pDense.rows(), pDense.cols());
        ComplexField col(grid);
        for (Eigen::Index j = 0; j < pDense.cols(); ++j) {
          for (Eigen::Index i = 0; i < pDense.rows(); ++i) col[static_cast<std::size_t>(i)] = pDense(i, j);
          const ComplexField qcol = plan.apply(col);
          for (Eigen::Index i = 0; i < pDense.rows(); ++i) qp(i, j) = qcol[static_cast<std::size_t>(i)];
        }
        const double condQP = spectral_cond(dense_eigenvalues(qp));
        rows.push_back({omega, ppw_for_grid(n, omega), n, m, spec.delta, spec.eta, spec.damping, condP, condQP});
      }
    }
  }
  return rows;
}

MediaModel case_media(const ExperimentSpec& spec, const Grid2D& grid) {
  if (spec.caseId == "inclusion") {
    return make_circular_inclusion(grid, 1.0, spec.delta, spec.eta, 0.05, spec.damping);
  }
  if (spec.caseId == "phantom") {
    PhantomTissues tissues;
    tissues.eta = spec.eta;
    return make_phantom(grid, tissues);
  }
  throw std::invalid_argument("solve_case: unknown case '" + spec.caseId + "' (expected inclusion or phantom)");
}

SolveCaseResult solve_case(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.omegas.size() != 1) throw std::invalid_argument("solve_case: exactly one omega is required");
  if (spec.ms.size() != 1) throw std::invalid_argument("solve_case: exactly one M is required");
  const double omega = spec.omegas.front();
  const std::vector<int> sizes = resolve_grid_sizes(spec, omega);
  if (sizes.size() != 1) throw std::invalid_argument("solve_case: exactly one N is required");
  const Grid2D grid(sizes.front(), 1.0);

  const bool phantom = spec.caseId == "phantom";
  MediaModel media = case_media(spec, grid);
  const auto params = make_params(omega, media, phantom);
  const HelmholtzOperator op(params);

  ComplexField f(grid);
  if (phantom) {
    GaussianBeamParams beam;
    beam.omega = omega;
    beam.c_o = media.c_o;
    beam.a_o = media.a_o;
    f = scattering_source(media, omega, gaussian_beam(grid, beam));
  } else {
    f = plane_wave_source(grid, omega, media.c_o);
  }

  const int m = spec.ms.front();
  const int mTilde = spec.mTilde.value_or(default_layer_nodes(m));
  const PrecondPlan plan = plan_for(media, omega, m, mTilde);

  GmresConfig cfg;
  cfg.restart = spec.restart;
  cfg.maxOuter = (spec.maxIter + spec.restart - 1) / spec.restart;
  cfg.relTol = spec.tol;

  GmresResult plain = gmres(op, f, cfg);
  const LinearMap qp = [&](const ComplexField& u) { return plan.apply(op.apply(u)); };
  GmresResult pre = gmres(qp, plan.apply(f), cfg);

  auto echo = [&](SolveReport& r, bool preconditioned) {
    r.paramEcho["case"] = spec.caseId;
    r.paramEcho["omega"] = format_double(omega);
    r.paramEcho["N"] = std::to_string(grid.n());
    r.paramEcho["M"] = std::to_string(m);
    r.paramEcho["Mtilde"] = std::to_string(mTilde);
    r.paramEcho["preconditioned"] = preconditioned ? "1" : "0";
  };
  echo(plain.report, false);
  echo(pre.report, true);

  SolveCaseResult out{std::move(plain.report), std::move(pre.report), std::move(pre.solution),
                      std::move(media), grid.n(), omega, plan.table_count(), plan.stored_entries()};
  return out;
}

EnergySplit energy_split(const ComplexField& u, const RealField& zeta) {
  require_same_grid(u.grid(), zeta.grid(), "energy_split");
  EnergySplit e;
  for (std::size_t k = 0; k < u.size(); ++k) {
    (zeta[k] > 0.0 ? e.layer : e.interior) += std::norm(u[k]);
  }
  e.interior = std::sqrt(e.interior);
  e.layer = std::sqrt(e.layer);
  return e;
}

SymbolErrorResult symbol_error_study(const std::vector<int>& ms, double omega, double cMin,
                                     double cMax, double damping, int xiN) {
  if (ms.size() < 2) throw std::invalid_argument("symbol_error_study: need at least two M values");
  const Grid2D grid(xiN, 1.0);
  const WavenumberGrid xi = wavenumbers(grid);
  std::vector<double> samples(xi.xiSq.begin(), xi.xiSq.end());
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

  SymbolErrorSetup setup{cMin, cMax, damping, omega};
  SymbolErrorResult result;
  std::vector<double> logH, logE;
  for (int m : ms) {
    if (m < 2) throw std::invalid_argument("symbol_error_study: M must be >= 2");
    const double step = (cMax - cMin) / (m - 1);
    const double err = interp_symbol_error(setup, m, samples);
    result.rows.push_back({m, step, err});
    logH.push_back(std::log(step));
    logE.push_back(std::log(err));
  }
  result.order = ls_slope(logH, logE);
  return result;
}

std::string format_csv_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_bench_csv(const std::string& path, const BenchResult& result) {
  auto out = open_text(path);
  out << "N,M,median_seconds,normalized\n";
  for (const auto& r : result.rows) {
    out << r.n << ',' << r.m << ',' << format_csv_number(r.medianSeconds) << ','
        << format_csv_number(r.normalized) << '\n';
  }
}

void write_cond_csv(const std::string& path, const std::vector<CondRow>& rows) {
  auto out = open_text(path);
  out << "omega,ppw,N,M,delta,eta,damping,cond_P,cond_QP\n";
  for (const auto& r : rows) {
    out << format_csv_number(r.omega) << ',' << format_csv_number(r.ppw) << ',' << r.n << ',' << r.m << ','
        << format_csv_number(r.delta) << ',' << format_csv_number(r.eta) << ','
        << format_csv_number(r.damping) << ',' << format_csv_number(r.condP) << ','
        << format_csv_number(r.condQP) << '\n';
  }
}

void write_residual_csv(const std::string& path, const SolveReport& report) {
  auto out = open_text(path);
  out << "iter,relres\n";
  for (std::size_t k = 0; k < report.residualHistory.size(); ++k) {
    out << k << ',' << format_csv_number(report.residualHistory[k]) << '\n';
  }
}

void write_symbol_error_csv(const std::string& path, const SymbolErrorResult& result) {
  auto out = open_text(path);
  out << "M,h,sup_error,order\n";
  for (const auto& r : result.rows) {
    out << r.m << ',' << format_csv_number(r.step) << ',' << format_csv_number(r.supError) << ','
        << format_csv_number(result.order) << '\n';
  }
}

void write_pgm(const std::string& path, const ComplexField& u, bool logScale) {
  const Grid2D& g = u.grid();
  const int n = g.n();
  const double peak = max_abs(u);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << "P5\n" << n << ' ' << n << "\n255\n";
  const double top = peak > 0.0 ? std::log10(peak) : 0.0;
  for (int j = n - 1; j >= 0; --j) {
    for (int i = 0; i < n; ++i) {
      const double mag = std::abs(u(i, j));
      double level = 0.0;
      if (peak > 0.0) {
        if (logScale) {
          level = mag > 0.0 ? (std::log10(mag) - (top - 8.0)) / 8.0 : 0.0;
        } else {
          level = mag / peak;
        }
      }
      level = std::clamp(level, 0.0, 1.0);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * level))));
    }
  }
}

}  // namespace helmprec
