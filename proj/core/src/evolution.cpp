#include "mvlab/evolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <ostream>

#include "mvlab/errors.hpp"
#include "numfmt.hpp"
#include "stencil.hpp"

namespace mvlab {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPair {
 public:
  explicit FftPair(std::vector<Complex>& buffer) : n_(buffer.size()) {
    auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
    const int n = static_cast<int>(n_);
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  std::size_t n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

class SplitStepPropagator {
 public:
  SplitStepPropagator(const PotentialField& v, const PhysicalParams& p,
                      double dt)
      : n_(v.grid().size()), buffer_(n_), fft_(buffer_), half_potential_(n_),
        kinetic_(n_) {
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      half_potential_[j] = std::polar(1.0, -v[j] * dt / (2.0 * p.hbar));
    }
    const double dk = 2.0 * std::numbers::pi / v.grid().length();
    for (std::size_t q = 0; q < n_; ++q) {
      const double freq = q <= n_ / 2 ? static_cast<double>(q)
                                      : static_cast<double>(q) - static_cast<double>(n_);
      const double k = freq * dk;
      // 1/n normalisation of the inverse transform folded in here.
      kinetic_[q] = std::polar(inv_n, -p.hbar * k * k * dt / (2.0 * p.mass));
    }
  }

  void step(std::vector<Complex>& psi) {
    for (std::size_t j = 0; j < n_; ++j) buffer_[j] = psi[j] * half_potential_[j];
    fft_.forward();
    for (std::size_t q = 0; q < n_; ++q) buffer_[q] *= kinetic_[q];
    fft_.backward();
    for (std::size_t j = 0; j < n_; ++j) psi[j] = buffer_[j] * half_potential_[j];
  }

 private:
  std::size_t n_;
  std::vector<Complex> buffer_;
  FftPair fft_;
  std::vector<Complex> half_potential_;
  std::vector<Complex> kinetic_;
};

// (1 + i dt H / 2 hbar) psi' = (1 - i dt H / 2 hbar) psi with the 3-point
// Laplacian and zero ghost values. The implicit matrix is factorised once.
class CrankNicolsonPropagator {
 public:
  CrankNicolsonPropagator(const PotentialField& v, const PhysicalParams& p,
                          double dt)
      : n_(v.grid().size()), rhs_(n_), c_prime_(n_), inv_denom_(n_),
        diag_explicit_(n_) {
    const double dx = v.grid().dx();
    const double a = p.hbar * p.hbar / (2.0 * p.mass * dx * dx);
    const Complex s(0.0, dt / (2.0 * p.hbar));
    off_implicit_ = -s * a;
    off_explicit_ = s * a;
    std::vector<Complex> diag_implicit(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      diag_implicit[j] = 1.0 + s * (2.0 * a + v[j]);
      diag_explicit_[j] = 1.0 - s * (2.0 * a + v[j]);
    }
    // Forward sweep coefficients of the Thomas algorithm.
    inv_denom_[0] = 1.0 / diag_implicit[0];
    c_prime_[0] = off_implicit_ * inv_denom_[0];
    for (std::size_t j = 1; j < n_; ++j) {
      const Complex denom = diag_implicit[j] - off_implicit_ * c_prime_[j - 1];
      inv_denom_[j] = 1.0 / denom;
      c_prime_[j] = off_implicit_ * inv_denom_[j];
    }
  }

  void step(std::vector<Complex>& psi) {
    for (std::size_t j = 0; j < n_; ++j) {
      Complex r = diag_explicit_[j] * psi[j];
      if (j > 0) r += off_explicit_ * psi[j - 1];
      if (j + 1 < n_) r += off_explicit_ * psi[j + 1];
      rhs_[j] = r;
    }
    rhs_[0] *= inv_denom_[0];
    for (std::size_t j = 1; j < n_; ++j) {
      rhs_[j] = (rhs_[j] - off_implicit_ * rhs_[j - 1]) * inv_denom_[j];
    }
    psi[n_ - 1] = rhs_[n_ - 1];
    for (std::size_t j = n_ - 1; j-- > 0;) {
      psi[j] = rhs_[j] - c_prime_[j] * psi[j + 1];
    }
  }

 private:
  std::size_t n_;
  Complex off_implicit_;
  Complex off_explicit_;
  std::vector<Complex> rhs_;
  std::vector<Complex> c_prime_;
  std::vector<Complex> inv_denom_;
  std::vector<Complex> diag_explicit_;
};

template <class Propagator>
void run(Propagator& prop, std::vector<Complex> psi, const SpatialGrid& grid,
         double dt, std::size_t n_steps, EvolutionRecord& rec) {
  for (std::size_t s = 1; s <= n_steps; ++s) {
    prop.step(psi);
    if (s % rec.stride == 0) {
      rec.snapshots.push_back({static_cast<double>(s) * dt, GridWavefunction(grid, psi)});
    }
  }
}

}  // namespace

std::size_t default_snapshot_stride(std::size_t n_steps) noexcept {
  constexpr std::size_t kMaxIntervals = 511;
  return std::max<std::size_t>(1, (n_steps + kMaxIntervals - 1) / kMaxIntervals);
}

EvolutionRecord evolve_schrodinger(const GridWavefunction& wf0,
                                   const PotentialField& potential,
                                   const PhysicalParams& params, double dt,
                                   std::size_t n_steps,
                                   std::size_t snapshot_stride) {
  params.validate();
  require(wf0.grid() == potential.grid(), ErrorKind::domain,
          "wavefunction and potential live on different grids");
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::domain,
          "dt must be positive");
  require(dt * potential.max_abs() / params.hbar < 0.5, ErrorKind::step_size,
          "dt*max|V|/hbar must stay below 0.5");

  const std::size_t stride =
      snapshot_stride == 0 ? default_snapshot_stride(n_steps) : snapshot_stride;
  EvolutionRecord rec{params, potential, dt, stride, {}};
  rec.snapshots.reserve(n_steps / stride + 1);
  rec.snapshots.push_back({0.0, wf0});
  if (n_steps == 0) return rec;

  std::vector<Complex> psi(wf0.amplitudes().begin(), wf0.amplitudes().end());
  const auto& grid = wf0.grid();
  if (grid.periodic()) {
    SplitStepPropagator prop(potential, params, dt);
    run(prop, std::move(psi), grid, dt, n_steps, rec);
  } else {
    CrankNicolsonPropagator prop(potential, params, dt);
    run(prop, std::move(psi), grid, dt, n_steps, rec);
  }
  return rec;
}

namespace {

std::vector<double> force_field(const PotentialField& v) {
  auto f = detail::gradient(v.values(), v.grid());
  for (auto& x : f) x = -x;
  return f;
}

}  // namespace

ClassicalEnsembleRecord classical_ensemble_evolve(
    std::span<const double> initial_positions,
    std::span<const double> initial_velocities,
    const PotentialField& potential, const PhysicalParams& params, double dt,
    std::size_t n_steps) {
  params.validate();
  require(initial_positions.size() == initial_velocities.size(),
          ErrorKind::domain, "positions and velocities differ in length");
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::domain,
          "dt must be positive");
  const auto& grid = potential.grid();
  const auto force = force_field(potential);
  const double inv_m = 1.0 / params.mass;

  const std::size_t m = initial_positions.size();
  TrajectoryEnsemble e;
  e.kind = TrajectoryKind::classical;
  e.times.resize(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) e.times[k] = static_cast<double>(k) * dt;
  e.positions.assign(m, std::vector<double>(n_steps + 1));
  e.velocities.assign(m, std::vector<double>(n_steps + 1));
  e.flags.assign(m, TrajectoryFlag::none);
  e.stop_index.assign(m, std::nullopt);

  auto accel = [&](double x, double& a) {
    detail::CellPosition c{};
    if (!detail::locate(x, grid, c)) return false;
    a = detail::interpolate(force, c) * inv_m;
    return true;
  };

  for (std::size_t i = 0; i < m; ++i) {
    double x = initial_positions[i];
    double v = initial_velocities[i];
    require(std::isfinite(x) && std::isfinite(v), ErrorKind::domain,
            "initial conditions must be finite");
    detail::CellPosition c0{};
    require(detail::locate(x, grid, c0), ErrorKind::domain,
            "initial position outside the grid");
    auto& xs = e.positions[i];
    auto& vs = e.velocities[i];
    xs[0] = x;
    vs[0] = v;
    for (std::size_t k = 1; k <= n_steps; ++k) {
      double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
      bool ok = accel(x, a1);
      const double x2 = x + 0.5 * dt * v, v2 = v + 0.5 * dt * a1;
      ok = ok && accel(x2, a2);
      const double x3 = x + 0.5 * dt * v2, v3 = v + 0.5 * dt * a2;
      ok = ok && accel(x3, a3);
      const double x4 = x + dt * v3, v4 = v + dt * a3;
      ok = ok && accel(x4, a4);
      double a_end = 0.0;
      const double xn = x + dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
      const double vn = v + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
      ok = ok && accel(xn, a_end);
      if (!ok) {
        e.flags[i] = TrajectoryFlag::escaped;
        e.stop_index[i] = k;
        std::fill(xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end(), x);
        std::fill(vs.begin() + static_cast<std::ptrdiff_t>(k), vs.end(), v);
        break;
      }
      x = xn;
      v = vn;
      xs[k] = x;
      vs[k] = v;
    }
  }
  return {params, potential, std::move(e)};
}

void write_evolution_csv(std::ostream& out, const EvolutionRecord& record) {
  using detail::num;
  out << "t,x,re,im,R2\n";
  const auto& grid = record.grid();
  for (const auto& snap : record.snapshots) {
    const std::string t = num(snap.t);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Complex a = snap.wf[j];
      out << t << ',' << num(grid.x(j)) << ',' << num(a.real()) << ','
          << num(a.imag()) << ',' << num(std::norm(a)) << '\n';
    }
  }
}

void write_classical_csv(std::ostream& out,
                         const ClassicalEnsembleRecord& record) {
  using detail::num;
  const auto& e = record.trajectories;
  out << "t,particle_id,x,v\n";
  for (std::size_t k = 0; k < e.time_count(); ++k) {
    const std::string t = num(e.times[k]);
    for (std::size_t i = 0; i < e.trajectory_count(); ++i) {
      out << t << ',' << i << ',' << num(e.positions[i][k]) << ','
          << num(e.velocities[i][k]) << '\n';
    }
  }
}

}  // namespace mvlab
