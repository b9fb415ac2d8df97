#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mvlab/evolution.hpp"
#include "mvlab/madelung.hpp"
#include "mvlab/trajectory.hpp"

namespace mvlab {

struct VelocityField {
  SpatialGrid grid;
  std::vector<double> v;        // 0 where masked
  std::vector<bool> node_mask;  // copied from the polar field
};

// v = (dphi/dx) / m.
VelocityField velocity_field(const PolarField& polar,
                             const PhysicalParams& params);

// Marks every point within `cells` grid cells of a masked point.
std::vector<bool> dilate_mask(const std::vector<bool>& mask,
                              const SpatialGrid& grid, std::size_t cells);

struct UniverseOptions {
  double node_epsilon = kDefaultNodeEpsilon;
  std::size_t node_dilation = 2;
  std::size_t substeps = 4;  // RK4 steps per snapshot interval
};

/// Deterministic stratified draw of M positions from R^2 |psi|: the inverse
/// CDF of the cell-wise constant density (cell j = [x_j - dx/2, x_j + dx/2])
/// evaluated at the stratum midpoints (i + 1/2)/M. Dilated node
/// neighbourhoods, and the two end cells of a dirichlet grid, carry no weight.
std::vector<double> stratified_positions(const GridWavefunction& wf,
                                         std::size_t count,
                                         const PhysicalParams& params,
                                         const UniverseOptions& options = {});

/// Integrates dx/dt = v(x, t) through the record with RK4, v interpolated
/// linearly in space and in time between neighbouring snapshots. Positions
/// are sampled at the snapshot times. A trajectory whose stencil reaches a
/// dilated node neighbourhood is flagged node_frozen and held in place.
///
/// Throws domain if an initial position is off-grid or inside a node
/// neighbourhood of the first snapshot.
TrajectoryEnsemble integrate_universes(const EvolutionRecord& record,
                                       std::span<const double> initial_positions,
                                       const PhysicalParams& params,
                                       const UniverseOptions& options = {});

/// Number of adjacent-pair order inversions summed over all recorded steps.
/// Between samples k-1 and k the active trajectories are ordered by their
/// positions at k-1; an adjacent pair counts once when its gap at k has
/// closed to within `coincidence` (a collision is a crossing).
std::size_t crossing_count(const TrajectoryEnsemble& ensemble,
                           double coincidence = 1e-9);

// True when the initial ordering is strictly preserved at every sample.
bool is_order_preserving(const TrajectoryEnsemble& ensemble);

/// Probability mass of the cell-wise constant density inside (a, b),
/// normalised by the total mass. On periodic grids the interval is read in
/// the window [x_min - dx/2, x_min - dx/2 + L).
double interval_probability(std::span<const double> density,
                            const SpatialGrid& grid, double a, double b);

struct TransportRow {
  double t;
  double fraction_in_interval;  // trajectories inside (a, b) at t
  double density_probability;   // integral of R^2(t) over (a, b)
  double image_a;               // flow image of a
  double image_b;
  double image_fraction;        // trajectories between the two images
  double initial_probability;   // integral of R^2(t0) over (a, b)
  double deviation;             // larger of the two discrepancies
};

struct DensityTransportReport {
  double a;
  double b;
  std::size_t trajectories;
  double bound;  // 3 / sqrt(M)
  double max_deviation;
  std::vector<TransportRow> rows;
};

DensityTransportReport density_transport_check(
    const EvolutionRecord& record, const TrajectoryEnsemble& ensemble,
    double a, double b, const PhysicalParams& params,
    const UniverseOptions& options = {});

// CSV: t,fraction_in_interval,density_probability,image_a,image_b,image_fraction,initial_probability,deviation
void write_transport_csv(std::ostream& out, const DensityTransportReport& r);

}  // namespace mvlab
