#include "fracwave/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "fracwave/errors.hpp"

namespace fwave {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Grid::Impl {
  int dim = 0;
  std::array<double, 3> a{}, b{}, h{};
  std::array<int, 3> J{};
  std::size_t N = 0;
  std::vector<double> mu_abs2;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

Grid::Grid(const std::vector<std::pair<double, double>>& bounds,
           const std::vector<int>& sizes) {
  if (bounds.size() != sizes.size())
    throw DimOutOfRange("bounds and sizes length mismatch");
  const int d = static_cast<int>(bounds.size());
  if (d < 1 || d > 3)
    throw DimOutOfRange("dimension must be 1, 2 or 3, got " + std::to_string(d));

  auto impl = std::make_shared<Impl>();
  impl->dim = d;
  impl->N = 1;
  for (int m = 0; m < d; ++m) {
    const int J = sizes[m];
    if (J < 4 || J % 2 != 0)
      throw OddSize("axis " + std::to_string(m) + ": point count " +
                    std::to_string(J) + " must be even and >= 4");
    if (!(bounds[m].second > bounds[m].first))
      throw EmptyInterval("axis " + std::to_string(m) + ": empty interval");
    impl->a[m] = bounds[m].first;
    impl->b[m] = bounds[m].second;
    impl->J[m] = J;
    impl->h[m] = (bounds[m].second - bounds[m].first) / J;
    impl->N *= static_cast<std::size_t>(J);
  }

  // |mu_k|^2 table, row-major over spectral bins.
  impl->mu_abs2.assign(impl->N, 0.0);
  std::array<std::vector<double>, 3> axis_mu2;
  for (int m = 0; m < d; ++m) {
    axis_mu2[m].resize(impl->J[m]);
    const double base = 2.0 * M_PI / (impl->b[m] - impl->a[m]);
    for (int p = 0; p < impl->J[m]; ++p) {
      const int k = (p < impl->J[m] / 2) ? p : p - impl->J[m];
      axis_mu2[m][p] = (base * k) * (base * k);
    }
  }
  for (std::size_t idx = 0; idx < impl->N; ++idx) {
    std::size_t rem = idx;
    double v = 0.0;
    for (int m = d - 1; m >= 0; --m) {
      const int p = static_cast<int>(rem % impl->J[m]);
      rem /= impl->J[m];
      v += axis_mu2[m][p];
    }
    impl->mu_abs2[idx] = v;
  }

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    std::vector<std::complex<double>> buf(impl->N);
    fftw_complex* p = reinterpret_cast<fftw_complex*>(buf.data());
    int n[3] = {impl->J[0], impl->J[1], impl->J[2]};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    impl->fwd = fftw_plan_dft(d, n, p, p, FFTW_FORWARD, flags);
    impl->bwd = fftw_plan_dft(d, n, p, p, FFTW_BACKWARD, flags);
  }
  impl_ = std::move(impl);
}

int Grid::dim() const { return impl_->dim; }
int Grid::size(int axis) const { return impl_->J[axis]; }
double Grid::lo(int axis) const { return impl_->a[axis]; }
double Grid::hi(int axis) const { return impl_->b[axis]; }
double Grid::step(int axis) const { return impl_->h[axis]; }
std::size_t Grid::total() const { return impl_->N; }

double Grid::cell_volume() const {
  double v = 1.0;
  for (int m = 0; m < impl_->dim; ++m) v *= impl_->h[m];
  return v;
}

std::array<double, 3> Grid::point(std::size_t j) const {
  std::array<double, 3> x{};
  std::size_t rem = j;
  for (int m = impl_->dim - 1; m >= 0; --m) {
    const std::size_t jm = rem % impl_->J[m];
    rem /= impl_->J[m];
    x[m] = impl_->a[m] + jm * impl_->h[m];
  }
  return x;
}

std::vector<double> Grid::frequency(const std::vector<int>& k) const {
  if (static_cast<int>(k.size()) != impl_->dim)
    throw IndexOutOfRange("multi-index dimension mismatch");
  std::vector<double> mu(impl_->dim);
  for (int m = 0; m < impl_->dim; ++m) {
    const int J = impl_->J[m];
    if (k[m] < -J / 2 || k[m] > J / 2 - 1)
      throw IndexOutOfRange("k[" + std::to_string(m) + "] = " +
                            std::to_string(k[m]) + " outside [-J/2, J/2-1]");
    mu[m] = 2.0 * M_PI * k[m] / (impl_->b[m] - impl_->a[m]);
  }
  return mu;
}

const std::vector<double>& Grid::mu_abs2() const { return impl_->mu_abs2; }

void Grid::dft(std::complex<double>* data, int sign) const {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(sign == FFTW_FORWARD ? impl_->fwd : impl_->bwd, p, p);
}

bool Grid::same_as(const Grid& other) const {
  if (impl_ == other.impl_) return true;
  if (!impl_ || !other.impl_) return false;
  if (impl_->dim != other.impl_->dim) return false;
  for (int m = 0; m < impl_->dim; ++m) {
    if (impl_->J[m] != other.impl_->J[m]) return false;
    if (impl_->a[m] != other.impl_->a[m]) return false;
    if (impl_->b[m] != other.impl_->b[m]) return false;
  }
  return true;
}

Grid build_grid(const std::vector<std::pair<double, double>>& bounds,
                const std::vector<int>& sizes) {
  return Grid(bounds, sizes);
}

Field::Field(Grid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.total(), fill) {}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.total())
    throw GridMismatch("field length does not match grid point count");
}

Spectrum::Spectrum(Grid grid, std::vector<std::complex<double>> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.total())
    throw GridMismatch("spectrum length does not match grid point count");
}

Spectrum Grid::forward(const Field& field) const {
  if (!field.grid().same_as(*this))
    throw GridMismatch("field defined on a different grid");
  const std::size_t N = impl_->N;
  std::vector<std::complex<double>> buf(N);
  for (std::size_t i = 0; i < N; ++i) buf[i] = field[i];
  dft(buf.data(), FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(N);
  for (auto& c : buf) c *= inv;
  return Spectrum(*this, std::move(buf));
}

Field Grid::inverse(const Spectrum& spec, double* imag_residue) const {
  if (!spec.grid().same_as(*this))
    throw GridMismatch("spectrum defined on a different grid");
  const std::size_t N = impl_->N;
  std::vector<std::complex<double>> buf = spec.coeffs();
  dft(buf.data(), FFTW_BACKWARD);
  std::vector<double> out(N);
  double res = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = buf[i].real();
    res = std::max(res, std::abs(buf[i].imag()));
  }
  if (imag_residue) *imag_residue = res;
  return Field(*this, std::move(out));
}

Spectrum forward(const Field& field) { return field.grid().forward(field); }

Field inverse(const Spectrum& spec, double* imag_residue) {
  return spec.grid().inverse(spec, imag_residue);
}

}  // namespace fwave
