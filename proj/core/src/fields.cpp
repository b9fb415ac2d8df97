#include "mvlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "mvlab/errors.hpp"
#include "numfmt.hpp"

namespace mvlab {

void PhysicalParams::validate() const {
  require(std::isfinite(hbar) && hbar > 0.0, ErrorKind::domain,
          "hbar must be positive");
  require(std::isfinite(mass) && mass > 0.0, ErrorKind::domain,
          "mass must be positive");
}

const char* to_string(Boundary b) noexcept {
  return b == Boundary::periodic ? "periodic" : "dirichlet";
}

SpatialGrid::SpatialGrid(double x_min, double x_max, std::size_t n_points,
                         Boundary boundary)
    : x_min_(x_min), x_max_(x_max), n_(n_points), boundary_(boundary) {
  require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min,
          ErrorKind::domain, "grid requires x_max > x_min");
  require(n_points >= kMinPoints, ErrorKind::domain,
          "grid requires at least 8 points");
}

std::vector<double> SpatialGrid::coordinates() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

std::size_t SpatialGrid::nearest_index(double xv) const noexcept {
  const double s = std::round((xv - x_min_) / dx());
  if (!(s > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(s), n_ - 1);
}

GridWavefunction::GridWavefunction(SpatialGrid grid,
                                   std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() == grid_.size(), ErrorKind::domain,
          "amplitude count does not match grid size");
  for (const auto& a : amplitudes_) {
    require(std::isfinite(a.real()) && std::isfinite(a.imag()),
            ErrorKind::domain, "wavefunction has non-finite amplitude");
  }
}

PotentialField::PotentialField(SpatialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.size(), ErrorKind::domain,
          "potential length does not match grid size");
  for (double v : values_) {
    require(std::isfinite(v), ErrorKind::domain,
            "potential has non-finite value");
  }
}

double PotentialField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridWavefunction make_gaussian_packet(const SpatialGrid& grid, double x0,
                                      double sigma, double k0,
                                      const PhysicalParams& params) {
  params.validate();
  require(std::isfinite(x0) && x0 > grid.x_min() && x0 < grid.x_max(),
          ErrorKind::domain, "packet centre outside grid interior");
  require(std::isfinite(sigma) && sigma >= 4.0 * grid.dx(),
          ErrorKind::resolution, "sigma must be at least 4*dx");
  require(std::isfinite(k0), ErrorKind::domain, "k0 must be finite");

  std::vector<Complex> amps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    const double u = x - x0;
    amps[j] = std::polar(std::exp(-u * u / (4.0 * sigma * sigma)), k0 * x);
  }
  return normalize(GridWavefunction(grid, std::move(amps)));
}

GridWavefunction make_plane_wave(const SpatialGrid& grid, double k,
                                 double amplitude) {
  require(grid.periodic(), ErrorKind::domain,
          "plane waves require a periodic grid");
  require(std::isfinite(amplitude) && amplitude > 0.0, ErrorKind::domain,
          "plane-wave amplitude must be positive");
  const double cycles = k * grid.length() / (2.0 * std::numbers::pi);
  require(std::isfinite(cycles) &&
              std::abs(cycles - std::round(cycles)) <= 1e-9 * std::max(1.0, std::abs(cycles)),
          ErrorKind::commensurability,
          "k must fit an integer number of wavelengths in the domain");

  std::vector<Complex> amps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    amps[j] = std::polar(amplitude, k * grid.x(j));
  }
  return GridWavefunction(grid, std::move(amps));
}

GridWavefunction make_harmonic_eigenstate(const SpatialGrid& grid, int level,
                                          double omega,
                                          const PhysicalParams& params) {
  params.validate();
  require(level == 0 || level == 1, ErrorKind::domain,
          "only levels 0 and 1 are provided");
  require(std::isfinite(omega) && omega > 0.0, ErrorKind::domain,
          "omega must be positive");
  const double alpha = params.mass * omega / params.hbar;
  const double width = 1.0 / std::sqrt(2.0 * alpha);
  require(width >= 4.0 * grid.dx(), ErrorKind::resolution,
          "oscillator length under-resolved by the grid");

  std::vector<Complex> amps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    const double g = std::exp(-0.5 * alpha * x * x);
    amps[j] = Complex(level == 0 ? g : x * g, 0.0);
  }
  return normalize(GridWavefunction(grid, std::move(amps)));
}

GridWavefunction superpose(const GridWavefunction& a, Complex ca,
                           const GridWavefunction& b, Complex cb) {
  require(a.grid() == b.grid(), ErrorKind::domain,
          "superposition of wavefunctions on different grids");
  std::vector<Complex> amps(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) amps[j] = ca * a[j] + cb * b[j];
  return normalize(GridWavefunction(a.grid(), std::move(amps)));
}

double norm_squared(const GridWavefunction& wf) {
  double s = 0.0;
  for (const auto& a : wf.amplitudes()) s += std::norm(a);
  return s * wf.grid().dx();
}

GridWavefunction normalize(const GridWavefunction& wf) {
  const double n2 = norm_squared(wf);
  require(n2 > 0.0, ErrorKind::degenerate_input,
          "cannot normalize an all-zero wavefunction");
  const double scale = 1.0 / std::sqrt(n2);
  std::vector<Complex> amps(wf.amplitudes().begin(), wf.amplitudes().end());
  for (auto& a : amps) a *= scale;
  return GridWavefunction(wf.grid(), std::move(amps));
}

PotentialField make_free_potential(const SpatialGrid& grid) {
  return PotentialField(grid, std::vector<double>(grid.size(), 0.0));
}

PotentialField make_harmonic_potential(const SpatialGrid& grid, double omega,
                                       const PhysicalParams& params) {
  params.validate();
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    v[j] = 0.5 * params.mass * omega * omega * x * x;
  }
  return PotentialField(grid, std::move(v));
}

void write_wavefunction_csv(std::ostream& out, const GridWavefunction& wf) {
  using detail::num;
  out << "index,x,re,im\n";
  for (std::size_t j = 0; j < wf.size(); ++j) {
    out << j << ',' << num(wf.grid().x(j)) << ',' << num(wf[j].real()) << ','
        << num(wf[j].imag()) << '\n';
  }
}

}  // namespace mvlab
