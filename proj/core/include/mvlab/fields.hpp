#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace mvlab {

using Complex = std::complex<double>;

struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;

  // Throws ErrorKind::domain unless hbar > 0 and mass > 0.
  void validate() const;
};

enum class Boundary { periodic, dirichlet };

const char* to_string(Boundary b) noexcept;

/// Uniform 1D grid with spacing dx = (x_max - x_min) / n_points and nodes
/// x_j = x_min + j*dx, j = 0..n_points-1.
///
/// On a periodic grid x_max is identified with x_min. On a dirichlet grid the
/// wavefunction is taken to vanish at the ghost nodes j = -1 and j = n_points.
class SpatialGrid {
 public:
  static constexpr std::size_t kMinPoints = 8;

  SpatialGrid(double x_min, double x_max, std::size_t n_points,
              Boundary boundary);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_; }
  Boundary boundary() const noexcept { return boundary_; }
  bool periodic() const noexcept { return boundary_ == Boundary::periodic; }

  double length() const noexcept { return x_max_ - x_min_; }
  double dx() const noexcept { return length() / static_cast<double>(n_); }
  double x(std::size_t j) const noexcept {
    return x_min_ + static_cast<double>(j) * dx();
  }
  std::vector<double> coordinates() const;

  // Index of the grid node closest to x (clamped to the grid).
  std::size_t nearest_index(double x) const noexcept;

  bool operator==(const SpatialGrid&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  Boundary boundary_;
};

class GridWavefunction {
 public:
  GridWavefunction(SpatialGrid grid, std::vector<Complex> amplitudes);

  const SpatialGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }
  const Complex& operator[](std::size_t j) const { return amplitudes_[j]; }

 private:
  SpatialGrid grid_;
  std::vector<Complex> amplitudes_;
};

class PotentialField {
 public:
  PotentialField(SpatialGrid grid, std::vector<double> values);

  const SpatialGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  double max_abs() const noexcept;

 private:
  SpatialGrid grid_;
  std::vector<double> values_;
};

GridWavefunction make_gaussian_packet(const SpatialGrid& grid, double x0,
                                      double sigma, double k0,
                                      const PhysicalParams& params);

// Requires a periodic grid and k * L / 2pi integral.
GridWavefunction make_plane_wave(const SpatialGrid& grid, double k,
                                 double amplitude);

// Normalized n-th eigenstate (n = 0 or 1) of V = m w^2 x^2 / 2 centred at 0.
GridWavefunction make_harmonic_eigenstate(const SpatialGrid& grid, int level,
                                          double omega,
                                          const PhysicalParams& params);

// c_a * psi_a + c_b * psi_b, renormalized.
GridWavefunction superpose(const GridWavefunction& a, Complex ca,
                           const GridWavefunction& b, Complex cb);

/// Riemann sum sum_j |psi_j|^2 dx. Every quadrature in the library uses the
/// same weight so residuals and norms are directly comparable.
double norm_squared(const GridWavefunction& wf);

GridWavefunction normalize(const GridWavefunction& wf);

PotentialField make_free_potential(const SpatialGrid& grid);
PotentialField make_harmonic_potential(const SpatialGrid& grid, double omega,
                                       const PhysicalParams& params);

// CSV: index,x,re,im
void write_wavefunction_csv(std::ostream& out, const GridWavefunction& wf);

}  // namespace mvlab
