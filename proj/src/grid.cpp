#include "helmprec/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>


namespace helmprec {

Grid2D::Grid2D(int n, double side) : n_(n), side_(side) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("make_grid: N must be even and >= 4, got " + std::to_string(n));
  }
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw std::invalid_argument("make_grid: L must be positive and finite");
  }
}

Grid2D make_grid(int n, double side) { return Grid2D(n, side); }

ComplexField::ComplexField(const Grid2D& grid) : grid_(grid), values_(grid.size()) {}

ComplexField::ComplexField(const Grid2D& grid, Complex fill)
    : grid_(grid), values_(grid.size(), fill) {}

bool ComplexField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

RealField::RealField(const Grid2D& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

double RealField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double RealField::max() const { return *std::max_element(values_.begin(), values_.end()); }

int signed_frequency(int k, int n) { return k < n / 2 ? k : k - n; }

WavenumberGrid wavenumbers(const Grid2D& grid) {
  const int n = grid.n();
  const double unit = 2.0 * std::numbers::pi / grid.side();
  WavenumberGrid w;
  w.xi1.resize(n);
  w.xi2.resize(n);
  for (int k = 0; k < n; ++k) {
    w.xi1[k] = unit * signed_frequency(k, n);
    w.xi2[k] = w.xi1[k];
  }
  w.xiSq.resize(grid.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      w.xiSq[grid.index(i, j)] = w.xi1[i] * w.xi1[i] + w.xi2[j] * w.xi2[j];
    }
  }
  return w;
}

namespace {

// One forward/backward plan pair per N. Planning goes through the mutex
// because the FFTW planner is not thread-safe; execution with the
// new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  std::pair<fftw_plan, fftw_plan> plans(int n) {
    const FftPlanning mode = planning_.load();
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find({n, mode});
    if (it != plans_.end()) return it->second;
    const unsigned flags = mode == FftPlanning::Measure ? FFTW_MEASURE : FFTW_ESTIMATE;
    const std::size_t count = static_cast<std::size_t>(n) * n;
    auto* in = fftw_alloc_complex(count);
    auto* out = fftw_alloc_complex(count);
    fftw_plan fwd = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags);
    fftw_plan bwd = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
    if (fwd == nullptr || bwd == nullptr) throw std::runtime_error("fft2: FFTW planning failed");
    return plans_.emplace(std::make_pair(n, mode), std::make_pair(fwd, bwd)).first->second;
  }

  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.first);
      fftw_destroy_plan(p.second);
    }
  }

  void set_planning(FftPlanning mode) { planning_.store(mode); }
  FftPlanning planning() const { return planning_.load(); }

 private:
  std::mutex mutex_;
  std::atomic<FftPlanning> planning_{FftPlanning::Estimate};
  std::map<std::pair<int, FftPlanning>, std::pair<fftw_plan, fftw_plan>> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const Complex* p) {
  // FFTW's execute interface is not const-qualified; out-of-place
  // transforms never write to the input.
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

}  // namespace

void set_fft_planning(FftPlanning mode) { PlanCache::instance().set_planning(mode); }
FftPlanning fft_planning() { return PlanCache::instance().planning(); }

void fft2_raw(int n, const Complex* in, Complex* out) {
  fftw_execute_dft(PlanCache::instance().plans(n).first, as_fftw(in), as_fftw(out));
}

void ifft2_raw_unscaled(int n, const Complex* in, Complex* out) {
  fftw_execute_dft(PlanCache::instance().plans(n).second, as_fftw(in), as_fftw(out));
}

ComplexField fft2(const ComplexField& field) {
  ComplexField out(field.grid());
  fft2_raw(field.grid().n(), field.data(), out.data());
  return out;
}

ComplexField ifft2(const ComplexField& field) {
  ComplexField out(field.grid());
  ifft2_raw_unscaled(field.grid().n(), field.data(), out.data());
  scale(out, 1.0 / static_cast<double>(field.size()));
  return out;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* op) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(op) + ": grid mismatch (N=" + std::to_string(a.n()) +
                                " vs N=" + std::to_string(b.n()) + ")");
  }
}

Complex dot(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid(), v.grid(), "dot");
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < u.size(); ++k) acc += std::conj(u[k]) * v[k];
  return acc;
}

double norm2(const ComplexField& u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) acc += std::norm(u[k]);
  return std::sqrt(acc);
}

double max_abs(const ComplexField& u) {
  double m = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, std::abs(u[k]));
  return m;
}

void axpy(Complex alpha, const ComplexField& x, ComplexField& y) {
  require_same_grid(x.grid(), y.grid(), "axpy");
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

void scale(ComplexField& u, Complex alpha) {
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= alpha;
}

ComplexField operator-(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid(), v.grid(), "subtract");
  ComplexField out(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] - v[k];
  return out;
}

ComplexField operator+(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid(), v.grid(), "add");
  ComplexField out(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] + v[k];
  return out;
}

ComplexField operator*(Complex alpha, const ComplexField& u) {
  ComplexField out(u);
  scale(out, alpha);
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

void put_le_double(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  out.write(bytes, 8);
}

double get_le_double(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw std::runtime_error("read_hpf1: truncated payload");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

void write_header(std::ostream& out, const Grid2D& grid) {
  out << "HPF1 N=" << grid.n() << " L=" << format_double(grid.side()) << '\n';
}

std::ofstream open_binary(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_hpf1: cannot open " + path);
  return out;
}

}  // namespace

void write_hpf1(std::ostream& out, const ComplexField& field) {
  write_header(out, field.grid());
  for (std::size_t k = 0; k < field.size(); ++k) {
    put_le_double(out, field[k].real());
    put_le_double(out, field[k].imag());
  }
}

void write_hpf1(const std::string& path, const ComplexField& field) {
  auto out = open_binary(path);
  write_hpf1(out, field);
}

void write_hpf1(const std::string& path, const RealField& field) {
  auto out = open_binary(path);
  write_header(out, field.grid());
  for (std::size_t k = 0; k < field.size(); ++k) {
    put_le_double(out, field[k]);
    put_le_double(out, 0.0);
  }
}

ComplexField read_hpf1(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_hpf1: missing header");
  std::istringstream header(line);
  std::string magic, ntok, ltok;
  header >> magic >> ntok >> ltok;
  if (magic != "HPF1" || ntok.rfind("N=", 0) != 0 || ltok.rfind("L=", 0) != 0) {
    throw std::runtime_error("read_hpf1: malformed header '" + line + "'");
  }
  const int n = std::stoi(ntok.substr(2));
  double side = 0.0;
  const std::string lval = ltok.substr(2);
  auto [ptr, ec] = std::from_chars(lval.data(), lval.data() + lval.size(), side);
  if (ec != std::errc()) throw std::runtime_error("read_hpf1: bad L value");
  ComplexField field(Grid2D(n, side));
  for (std::size_t k = 0; k < field.size(); ++k) {
    const double re = get_le_double(in);
    const double im = get_le_double(in);
    field[k] = Complex(re, im);
  }
  return field;
}

ComplexField read_hpf1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_hpf1: cannot open " + path);
  return read_hpf1(in);
}

}  // namespace helmprec
