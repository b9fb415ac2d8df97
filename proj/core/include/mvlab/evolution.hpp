#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mvlab/fields.hpp"
#include "mvlab/trajectory.hpp"

namespace mvlab {

struct Snapshot {
  double t;
  GridWavefunction wf;
};

struct EvolutionRecord {
  PhysicalParams params;
  PotentialField potential;
  double dt;
  std::size_t stride;
  std::vector<Snapshot> snapshots;

  const SpatialGrid& grid() const { return potential.grid(); }
  double snapshot_interval() const noexcept {
    return dt * static_cast<double>(stride);
  }
};

// Largest-resolution stride that keeps at most 512 snapshots (n_steps / stride + 1).
std::size_t default_snapshot_stride(std::size_t n_steps) noexcept;

/// Integrates i*hbar dpsi/dt = -(hbar^2/2m) psi'' + V psi.
///
/// Periodic grids use second-order Strang split-step with FFT kinetic
/// propagation; dirichlet grids use Crank-Nicolson with the 3-point Laplacian
/// solved by the Thomas algorithm. Snapshots are stored every
/// `snapshot_stride` steps (0 selects default_snapshot_stride), starting with
/// wf0 at t = 0.
///
/// Throws domain on grid mismatch, step_size when dt*max|V|/hbar >= 0.5.
EvolutionRecord evolve_schrodinger(const GridWavefunction& wf0,
                                   const PotentialField& potential,
                                   const PhysicalParams& params, double dt,
                                   std::size_t n_steps,
                                   std::size_t snapshot_stride = 0);

struct ClassicalEnsembleRecord {
  PhysicalParams params;
  PotentialField potential;
  TrajectoryEnsemble trajectories;  // kind == classical, velocities filled
};

/// Newtonian characteristics m x'' = -dV/dx, RK4 with the force taken from
/// centred differences of V and interpolated linearly between nodes. Every
/// step is recorded. Leaving a dirichlet domain flags the trajectory as
/// escaped; on periodic grids positions are kept unwrapped.
ClassicalEnsembleRecord classical_ensemble_evolve(
    std::span<const double> initial_positions,
    std::span<const double> initial_velocities,
    const PotentialField& potential, const PhysicalParams& params, double dt,
    std::size_t n_steps);

// CSV: t,x,re,im,R2 (long format, one row per snapshot and node)
void write_evolution_csv(std::ostream& out, const EvolutionRecord& record);

// CSV: t,particle_id,x,v
void write_classical_csv(std::ostream& out,
                         const ClassicalEnsembleRecord& record);

}  // namespace mvlab
