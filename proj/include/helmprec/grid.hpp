#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <new>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace helmprec {

using Complex = std::complex<double>;

/// 64-byte aligned allocator so every field buffer satisfies the SIMD
/// alignment the FFT plans were created with.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;
using RealBuffer = std::vector<double, AlignedAllocator<double>>;

/// Square periodic grid of side L with N points per direction, centred at
/// the origin. Node (i, j) sits at (-L/2 + i h, -L/2 + j h) with h = L / N.
class Grid2D {
 public:
  /// Throws std::invalid_argument unless N >= 4 is even and L > 0.
  Grid2D(int n, double side);

  int n() const { return n_; }
  double side() const { return side_; }
  double spacing() const { return side_ / n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

  double x1(int i) const { return -0.5 * side_ + i * spacing(); }
  double x2(int j) const { return -0.5 * side_ + j * spacing(); }

  /// Row-major flat index; the first index runs along x1.
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j);
  }

  bool operator==(const Grid2D& other) const {
    return n_ == other.n_ && side_ == other.side_;
  }

 private:
  int n_;
  double side_;
};

Grid2D make_grid(int n, double side);

/// N x N complex samples on a grid, row-major.
class ComplexField {
 public:
  explicit ComplexField(const Grid2D& grid);
  ComplexField(const Grid2D& grid, Complex fill);

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  Complex& operator[](std::size_t k) { return values_[k]; }
  const Complex& operator[](std::size_t k) const { return values_[k]; }
  Complex& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  const Complex& operator()(int i, int j) const { return values_[grid_.index(i, j)]; }

  Complex* data() { return values_.data(); }
  const Complex* data() const { return values_.data(); }
  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }

  bool all_finite() const;

 private:
  Grid2D grid_;
  ComplexBuffer values_;
};

/// N x N real samples on a grid (media coefficients, weights).
class RealField {
 public:
  explicit RealField(const Grid2D& grid, double fill = 0.0);

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t k) { return values_[k]; }
  const double& operator[](std::size_t k) const { return values_[k]; }
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  const double& operator()(int i, int j) const { return values_[grid_.index(i, j)]; }

  const double* data() const { return values_.data(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;

 private:
  Grid2D grid_;
  RealBuffer values_;
};

/// Discrete wavenumbers in standard FFT ordering: index k maps to
/// 2 pi k~ / L with k~ = k for k < N/2 and k - N otherwise (Nyquist is -N/2).
struct WavenumberGrid {
  std::vector<double> xi1;
  std::vector<double> xi2;
  RealBuffer xiSq;  ///< |xi|^2, row-major like the fields
};

/// Signed integer frequency for FFT index k on an N-point axis.
int signed_frequency(int k, int n);

WavenumberGrid wavenumbers(const Grid2D& grid);

/// Unnormalised forward DFT. ifft2 divides by N^2, so ifft2(fft2(v)) == v
/// and ||fft2(v)||_2 = N ||v||_2.
ComplexField fft2(const ComplexField& field);
ComplexField ifft2(const ComplexField& field);

/// Estimate plans are fixed by FFTW's heuristics, so transforms are
/// bit-reproducible across runs. Measure plans are timed at planning time
/// and faster, but the chosen algorithm (and its round-off) may differ
/// between runs. Applies to plans created after the call.
enum class FftPlanning { Estimate, Measure };
void set_fft_planning(FftPlanning mode);
FftPlanning fft_planning();

// Raw transforms on N*N contiguous, 64-byte aligned buffers. `in` and `out`
// must not alias. The inverse is left unscaled; callers fold 1/N^2 in.
void fft2_raw(int n, const Complex* in, Complex* out);
void ifft2_raw_unscaled(int n, const Complex* in, Complex* out);

// Vector-space helpers over all N^2 entries (unweighted complex dot).
Complex dot(const ComplexField& u, const ComplexField& v);  ///< sum conj(u) v
double norm2(const ComplexField& u);
double max_abs(const ComplexField& u);
void axpy(Complex alpha, const ComplexField& x, ComplexField& y);  ///< y += alpha x
void scale(ComplexField& u, Complex alpha);
ComplexField operator-(const ComplexField& u, const ComplexField& v);
ComplexField operator+(const ComplexField& u, const ComplexField& v);
ComplexField operator*(Complex alpha, const ComplexField& u);

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* op);

// HPF1 dump: one text line "HPF1 N=<N> L=<L>\n" followed by N^2
// little-endian (re, im) IEEE-754 double pairs in row-major order.
void write_hpf1(std::ostream& out, const ComplexField& field);
void write_hpf1(const std::string& path, const ComplexField& field);
void write_hpf1(const std::string& path, const RealField& field);
ComplexField read_hpf1(std::istream& in);
ComplexField read_hpf1(const std::string& path);

/// Shortest round-trip decimal text for a double.
std::string format_double(double value);

}  // namespace helmprec
