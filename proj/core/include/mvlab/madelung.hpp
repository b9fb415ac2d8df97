#pragma once

#include <iosfwd>
#include <vector>

#include "mvlab/evolution.hpp"
#include "mvlab/fields.hpp"

namespace mvlab {

inline constexpr double kDefaultNodeEpsilon = 1e-6;

/// Modulus/phase form psi = R exp(i phi / hbar) of a grid wavefunction.
///
/// phi is in action units and unwrapped: within every maximal run of
/// non-node points adjacent values differ by less than pi*hbar. Each run is
/// anchored at its own largest-R point, where phi lies in (-pi hbar, pi hbar].
/// At node points phi carries the raw principal value and is meaningless.
struct PolarField {
  SpatialGrid grid;
  std::vector<double> R;
  std::vector<double> phi;
  std::vector<bool> node_mask;
  double hbar = 1.0;
};

struct QuantumPotentialField {
  SpatialGrid grid;
  std::vector<double> U_quantum;  // 0 where masked
  std::vector<bool> node_mask;    // true where U is not defined
};

// node_epsilon in (0, 0.1]; nodes are points with R < node_epsilon * max R.
PolarField decompose(const GridWavefunction& wf, const PhysicalParams& params,
                     double node_epsilon = kDefaultNodeEpsilon);

GridWavefunction recompose(const PolarField& polar,
                           const PhysicalParams& params);

/// Phase gradient dphi/dx (action per length) by centred differences of
/// the phase taken modulo 2*pi*hbar, so it is insensitive to where the
/// unwrapping anchor sits and to the periodic seam.
std::vector<double> phase_gradient(const PolarField& polar);

/// lap(R)/R evaluated as (ln R)'' + ((ln R)')^2 with centred differences.
/// Points whose stencil touches a node, and dirichlet end points, are
/// reported through `defined` = false.
std::vector<double> laplacian_over_R(const PolarField& polar,
                                     std::vector<bool>& defined);

// U = -(hbar^2 / 2m) lap(R)/R.
QuantumPotentialField quantum_potential(const PolarField& polar,
                                        const PhysicalParams& params);

// R_j^2.
std::vector<double> universe_density(const PolarField& polar);

/// Pointwise residual over interior snapshots plus its scalar summary.
///
/// `l2` is the root mean over interior snapshots of the dx-weighted L2 norm
/// over unmasked points; `reference_l2` is the same norm of the time
/// derivative term, and `relative` their ratio.
struct ResidualReport {
  std::vector<double> times;               // interior snapshot times
  std::vector<std::vector<double>> field;  // [snapshot][point]
  std::vector<std::vector<bool>> mask;     // true where not evaluated
  double l2 = 0.0;
  double reference_l2 = 0.0;
  double relative = 0.0;
};

// d(R^2)/dt + d/dx(R^2 (dphi/dx) / m). Requires >= 3 snapshots.
ResidualReport continuity_residual(const EvolutionRecord& record,
                                   const PhysicalParams& params,
                                   double node_epsilon = kDefaultNodeEpsilon);

// dphi/dt + (dphi/dx)^2/2m + V - (hbar^2/2m) lap(R)/R. Requires >= 3 snapshots.
ResidualReport hamilton_jacobi_residual(
    const EvolutionRecord& record, const PotentialField& potential,
    const PhysicalParams& params, double node_epsilon = kDefaultNodeEpsilon);

// CSV: x,R,phi,mask
void write_polar_csv(std::ostream& out, const PolarField& polar);
// CSV: x,U,mask
void write_quantum_potential_csv(std::ostream& out,
                                 const QuantumPotentialField& field);

}  // namespace mvlab
