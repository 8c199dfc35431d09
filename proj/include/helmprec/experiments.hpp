#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helmprec/grid.hpp"
#include "helmprec/krylov.hpp"
#include "helmprec/media.hpp"

namespace helmprec {

enum class ExperimentKind { Bench, Cond, Solve, SymbolError };

/// Parameters shared by all experiment drivers. Grid size is given either
/// as points per wavelength (`ppw`) or explicitly (`ns`), never both.
struct ExperimentSpec {
  std::vector<double> omegas;
  std::optional<double> ppw;
  std::vector<int> ns;
  std::vector<int> ms{1, 2, 4, 8};
  std::optional<int> mTilde;
  double delta = 4.0;
  double eta = 1.0 / 800.0;
  double damping = 20.0;
  std::string caseId = "inclusion";
  int trials = 5;
  std::uint64_t seed = 1;
  int restart = 10;
  int maxIter = 100;
  double tol = 1e-8;
  double cMin = 1.0;  ///< symbol-error speed range
  double cMax = 5.0;
  int xiN = 64;  ///< wavenumber grid used as xi samples by symbol-error

  void validate() const;
};

/// Grid size for a target PPW = 2 pi c_o N / (L omega), rounded to the
/// nearest even integer.
int grid_size_for_ppw(double ppw, double omega, double c_o = 1.0, double side = 1.0);
double ppw_for_grid(int n, double omega, double c_o = 1.0, double side = 1.0);

/// Grid sizes an ExperimentSpec resolves to for one frequency.
std::vector<int> resolve_grid_sizes(const ExperimentSpec& spec, double omega);

// ---------------------------------------------------------------- bench

struct BenchRow {
  int n = 0;
  int m = 0;
  double medianSeconds = 0.0;
  double normalized = 0.0;  ///< relative to the first (N, M) row
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::map<int, double> betaByM;
  double beta = 0.0;  ///< pooled fit over every row
};

/// Least-squares slope of log(T / (M log N)) against log(N^2).
double fit_complexity_order(const std::vector<BenchRow>& rows);

/// Median wall time of apply_precond over `trials` applications per
/// (N, M), after one untimed warm-up apply, with measured FFT plans. The
/// medium is a smooth radial speed bump so every interpolation table
/// carries weight.
BenchResult bench_complexity(const std::vector<int>& ns, const std::vector<int>& ms, int trials,
                             double omega = 40.0 * 3.141592653589793);

// ---------------------------------------------------------------- cond

struct CondRow {
  double omega = 0.0;
  double ppw = 0.0;
  int n = 0;
  int m = 0;
  double delta = 0.0;
  double eta = 0.0;
  double damping = 0.0;
  double condP = 0.0;
  double condQP = 0.0;
};

/// Dense spectral condition numbers of P_N and Q_{N,M} P_N on the circular
/// inclusion for every (omega, N, M). M = 1 is the background one-node
/// preconditioner. Throws std::invalid_argument when N exceeds the dense guard.
std::vector<CondRow> cond_sweep(const ExperimentSpec& spec);

// ---------------------------------------------------------------- solve

struct SolveCaseResult {
  SolveReport unpreconditioned;
  SolveReport preconditioned;
  ComplexField solution;  ///< from the preconditioned run
  MediaModel media;
  int n = 0;
  double omega = 0.0;
  std::size_t planTables = 0;
  std::size_t planEntries = 0;
};

/// GMRES on P u = f and on (Q P) u = Q f with identical budgets.
/// caseId "inclusion": smooth inclusion, plane-wave source, no layer.
/// caseId "phantom": synthetic head, absorbing layer, Gaussian-beam
/// scattering source.
SolveCaseResult solve_case(const ExperimentSpec& spec);

/// Build the media for a case at grid size n.
MediaModel case_media(const ExperimentSpec& spec, const Grid2D& grid);

/// l2 energy of u inside the layer-free region and inside the layer.
struct EnergySplit {
  double interior = 0.0;
  double layer = 0.0;
};
EnergySplit energy_split(const ComplexField& u, const RealField& zeta);

// ---------------------------------------------------------- symbol-error

struct SymbolErrorRow {
  int m = 0;
  double step = 0.0;
  double supError = 0.0;
};

struct SymbolErrorResult {
  std::vector<SymbolErrorRow> rows;
  double order = 0.0;  ///< slope of log(error) against log(step)
};

SymbolErrorResult symbol_error_study(const std::vector<int>& ms, double omega, double cMin,
                                     double cMax, double damping, int xiN);

// ---------------------------------------------------------------- output

std::string format_csv_number(double value);  ///< 17 significant digits

void write_bench_csv(const std::string& path, const BenchResult& result);
void write_cond_csv(const std::string& path, const std::vector<CondRow>& rows);
void write_residual_csv(const std::string& path, const SolveReport& report);
void write_symbol_error_csv(const std::string& path, const SymbolErrorResult& result);

/// Binary PGM (P5) of |u|. Columns follow x1, rows follow x2 with the top
/// row at the largest x2. Linear scale maps [0, max] to [0, 255]; log
/// scale maps [log10 max - 8, log10 max].
void write_pgm(const std::string& path, const ComplexField& u, bool logScale);

}  // namespace helmprec
