#ifndef FRACWAVE_GRID_HPP
#define FRACWAVE_GRID_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace fwave {

class Field;
class Spectrum;

// Periodic tensor-product grid for d = 1, 2, 3.  Spatial indices are
// row-major with axis 0 slowest.  Frequency bin p on an axis of size J maps
// to the wave number k = p for p < J/2 and k = p - J otherwise, i.e. the
// standard FFT layout with the Nyquist mode at k = -J/2.
class Grid {
 public:
  Grid() = default;
  Grid(const std::vector<std::pair<double, double>>& bounds,
       const std::vector<int>& sizes);

  int dim() const;
  int size(int axis) const;
  double lo(int axis) const;
  double hi(int axis) const;
  double step(int axis) const;
  std::size_t total() const;
  double cell_volume() const;  // product of steps

  // Coordinate of spatial point with flattened index j.
  std::array<double, 3> point(std::size_t j) const;

  // (mu_k1, ..., mu_kd) for a multi-index with k_m in [-J_m/2, J_m/2 - 1].
  std::vector<double> frequency(const std::vector<int>& k) const;

  // |mu_k|^2 per flattened spectral index (same row-major layout).
  const std::vector<double>& mu_abs2() const;

  // Forward transform carries the 1/N factor; inverse is the plain
  // synthesis sum with the real part taken.  The discarded imaginary
  // residue (sup norm) is reported through imag_residue when non-null.
  Spectrum forward(const Field& field) const;
  Field inverse(const Spectrum& spec, double* imag_residue = nullptr) const;

  // Unnormalized c2c transforms on caller buffers (length N).  Used by the
  // operator kernels; thread-safe on distinct buffers.
  void dft(std::complex<double>* data, int sign) const;

  bool same_as(const Grid& other) const;
  bool valid() const { return impl_ != nullptr; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

Grid build_grid(const std::vector<std::pair<double, double>>& bounds,
                const std::vector<int>& sizes);

// Real-space values over the grid, row-major.
class Field {
 public:
  Field() = default;
  Field(Grid grid, double fill = 0.0);
  Field(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

// Fourier coefficients over the grid, standard FFT layout.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(Grid grid, std::vector<std::complex<double>> coeffs);

  const Grid& grid() const { return grid_; }
  std::vector<std::complex<double>>& coeffs() { return coeffs_; }
  const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

 private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

Spectrum forward(const Field& field);
Field inverse(const Spectrum& spec, double* imag_residue = nullptr);

}  // namespace fwave

#endif
