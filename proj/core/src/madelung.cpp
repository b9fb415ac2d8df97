#include "mvlab/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "mvlab/errors.hpp"
#include "numfmt.hpp"
#include "stencil.hpp"

namespace mvlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Representative of d modulo `period` in [-period/2, period/2].
double wrap(double d, double period) { return std::remainder(d, period); }

void unwrap_segment(std::span<const double> theta, std::span<const double> R,
                    double hbar, std::size_t begin, std::size_t end,
                    std::vector<double>& phi) {
  std::size_t anchor = begin;
  for (std::size_t j = begin; j < end; ++j) {
    if (R[j] > R[anchor]) anchor = j;
  }
  phi[anchor] = hbar * theta[anchor];
  for (std::size_t j = anchor + 1; j < end; ++j) {
    phi[j] = phi[j - 1] + hbar * wrap(theta[j] - theta[j - 1], kTwoPi);
  }
  for (std::size_t j = anchor; j-- > begin;) {
    phi[j] = phi[j + 1] + hbar * wrap(theta[j] - theta[j + 1], kTwoPi);
  }
}

}  // namespace

PolarField decompose(const GridWavefunction& wf, const PhysicalParams& params,
                     double node_epsilon) {
  params.validate();
  require(node_epsilon > 0.0 && node_epsilon <= 0.1, ErrorKind::domain,
          "node_epsilon must lie in (0, 0.1]");
  const std::size_t n = wf.size();
  PolarField out{wf.grid(), std::vector<double>(n), std::vector<double>(n),
                 std::vector<bool>(n), params.hbar};
  std::vector<double> theta(n);
  double r_max = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.R[j] = std::abs(wf[j]);
    theta[j] = std::arg(wf[j]);
    r_max = std::max(r_max, out.R[j]);
  }
  require(r_max > 0.0, ErrorKind::degenerate_input,
          "cannot decompose an all-zero wavefunction");

  const double threshold = node_epsilon * r_max;
  for (std::size_t j = 0; j < n; ++j) {
    out.node_mask[j] = out.R[j] < threshold;
    out.phi[j] = params.hbar * theta[j];
  }
  std::size_t j = 0;
  while (j < n) {
    if (out.node_mask[j]) {
      ++j;
      continue;
    }
    std::size_t end = j;
    while (end < n && !out.node_mask[end]) ++end;
    unwrap_segment(theta, out.R, params.hbar, j, end, out.phi);
    j = end;
  }
  return out;
}

GridWavefunction recompose(const PolarField& polar,
                           const PhysicalParams& params) {
  params.validate();
  std::vector<Complex> amps(polar.R.size());
  for (std::size_t j = 0; j < amps.size(); ++j) {
    amps[j] = std::polar(polar.R[j], polar.phi[j] / params.hbar);
  }
  return GridWavefunction(polar.grid, std::move(amps));
}

std::vector<double> phase_gradient(const PolarField& polar) {
  const auto& g = polar.grid;
  const std::size_t n = g.size();
  const double period = kTwoPi * polar.hbar;
  const double inv2dx = 1.0 / (2.0 * g.dx());
  const auto& phi = polar.phi;
  // forward[j] = phi_{j+1} - phi_j modulo the phase period
  std::vector<double> forward(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) forward[j] = wrap(phi[j + 1] - phi[j], period);
  if (g.periodic()) forward[n - 1] = wrap(phi[0] - phi[n - 1], period);

  std::vector<double> d(n);
  if (g.periodic()) {
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = (forward[j] + forward[detail::prev(j, n)]) * inv2dx;
    }
    return d;
  }
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (forward[j] + forward[j - 1]) * inv2dx;
  d[0] = (3.0 * forward[0] - forward[1]) * inv2dx;
  d[n - 1] = (3.0 * forward[n - 2] - forward[n - 3]) * inv2dx;
  return d;
}

std::vector<double> laplacian_over_R(const PolarField& polar,
                                     std::vector<bool>& defined) {
  const auto& g = polar.grid;
  const std::size_t n = g.size();
  const double dx = g.dx();
  std::vector<double> out(n, 0.0);
  defined.assign(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (!detail::interior(j, g)) continue;
    const std::size_t l = detail::prev(j, n), r = detail::next(j, n);
    if (polar.node_mask[l] || polar.node_mask[j] || polar.node_mask[r]) continue;
    // Logs of ratios, so R -> cR leaves the result unchanged.
    const double up = std::log(polar.R[r] / polar.R[j]);
    const double down = std::log(polar.R[j] / polar.R[l]);
    const double d1 = (up + down) / (2.0 * dx);
    const double d2 = (up - down) / (dx * dx);
    out[j] = d2 + d1 * d1;
    defined[j] = true;
  }
  return out;
}

QuantumPotentialField quantum_potential(const PolarField& polar,
                                        const PhysicalParams& params) {
  params.validate();
  std::vector<bool> defined;
  auto lap = laplacian_over_R(polar, defined);
  const double pref = -params.hbar * params.hbar / (2.0 * params.mass);
  QuantumPotentialField out{polar.grid, std::vector<double>(lap.size(), 0.0),
                            std::vector<bool>(lap.size(), true)};
  for (std::size_t j = 0; j < lap.size(); ++j) {
    if (!defined[j]) continue;
    out.U_quantum[j] = pref * lap[j];
    out.node_mask[j] = false;
  }
  return out;
}

std::vector<double> universe_density(const PolarField& polar) {
  std::vector<double> d(polar.R.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = polar.R[j] * polar.R[j];
  return d;
}

namespace {

std::vector<PolarField> decompose_all(const EvolutionRecord& record,
                                      const PhysicalParams& params,
                                      double node_epsilon) {
  require(record.snapshots.size() >= 3, ErrorKind::arity,
          "residuals need at least 3 snapshots");
  std::vector<PolarField> polars;
  polars.reserve(record.snapshots.size());
  for (const auto& s : record.snapshots) {
    polars.push_back(decompose(s.wf, params, node_epsilon));
  }
  return polars;
}

// Fixed index order for the sums keeps the scalar bit-reproducible.
void summarize(ResidualReport& rep, const std::vector<std::vector<double>>& ref,
               double dx) {
  double acc = 0.0, acc_ref = 0.0;
  for (std::size_t s = 0; s < rep.field.size(); ++s) {
    for (std::size_t j = 0; j < rep.field[s].size(); ++j) {
      if (rep.mask[s][j]) continue;
      acc += rep.field[s][j] * rep.field[s][j];
      acc_ref += ref[s][j] * ref[s][j];
    }
  }
  const double count = static_cast<double>(rep.field.size());
  rep.l2 = std::sqrt(acc * dx / count);
  rep.reference_l2 = std::sqrt(acc_ref * dx / count);
  rep.relative = rep.reference_l2 > 0.0 ? rep.l2 / rep.reference_l2 : rep.l2;
}

// Masks point j when it is a node at any of the three stencil times, when a
// node lies within `radius` cells of it at the central time, or when it sits
// on a dirichlet end.
std::vector<bool> base_mask(const std::vector<PolarField>& polars, std::size_t s,
                            std::size_t radius) {
  const auto& g = polars[s].grid;
  const std::size_t n = g.size();
  std::vector<bool> mask(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (!g.periodic() && (j < radius || j + radius >= n)) {
      mask[j] = true;
      continue;
    }
    for (std::size_t t : {s - 1, s, s + 1}) {
      if (polars[t].node_mask[j]) mask[j] = true;
    }
    std::size_t l = j, r = j;
    for (std::size_t k = 0; k < radius; ++k) {
      l = detail::prev(l, n);
      r = detail::next(r, n);
      if (polars[s].node_mask[l] || polars[s].node_mask[r]) mask[j] = true;
    }
  }
  return mask;
}

}  // namespace

ResidualReport continuity_residual(const EvolutionRecord& record,
                                   const PhysicalParams& params,
                                   double node_epsilon) {
  params.validate();
  const auto polars = decompose_all(record, params, node_epsilon);
  const auto& g = record.grid();
  const std::size_t n = g.size();
  const double inv2dt = 1.0 / (2.0 * record.snapshot_interval());

  ResidualReport rep;
  std::vector<std::vector<double>> ref;
  for (std::size_t s = 1; s + 1 < polars.size(); ++s) {
    const auto grad = phase_gradient(polars[s]);
    std::vector<double> flux(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double r = polars[s].R[j];
      flux[j] = r * r * grad[j] / params.mass;
    }
    const auto div = detail::gradient(flux, g);
    auto mask = base_mask(polars, s, 2);
    std::vector<double> res(n, 0.0), dt_term(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (mask[j]) continue;
      const double ra = polars[s + 1].R[j], rb = polars[s - 1].R[j];
      dt_term[j] = (ra * ra - rb * rb) * inv2dt;
      res[j] = dt_term[j] + div[j];
    }
    rep.times.push_back(record.snapshots[s].t);
    rep.field.push_back(std::move(res));
    rep.mask.push_back(std::move(mask));
    ref.push_back(std::move(dt_term));
  }
  summarize(rep, ref, g.dx());
  return rep;
}

ResidualReport hamilton_jacobi_residual(const EvolutionRecord& record,
                                        const PotentialField& potential,
                                        const PhysicalParams& params,
                                        double node_epsilon) {
  params.validate();
  require(potential.grid() == record.grid(), ErrorKind::domain,
          "potential and record live on different grids");
  const auto polars = decompose_all(record, params, node_epsilon);
  const auto& g = record.grid();
  const std::size_t n = g.size();
  const double inv2dt = 1.0 / (2.0 * record.snapshot_interval());
  const double period = kTwoPi * params.hbar;
  const double qpref = params.hbar * params.hbar / (2.0 * params.mass);

  ResidualReport rep;
  std::vector<std::vector<double>> ref;
  for (std::size_t s = 1; s + 1 < polars.size(); ++s) {
    const auto grad = phase_gradient(polars[s]);
    std::vector<bool> defined;
    const auto lap = laplacian_over_R(polars[s], defined);
    auto mask = base_mask(polars, s, 1);
    std::vector<double> res(n, 0.0), dt_term(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (!defined[j]) mask[j] = true;
      if (mask[j]) continue;
      dt_term[j] = wrap(polars[s + 1].phi[j] - polars[s - 1].phi[j], period) * inv2dt;
      res[j] = dt_term[j] + grad[j] * grad[j] / (2.0 * params.mass) + potential[j] -
               qpref * lap[j];
    }
    rep.times.push_back(record.snapshots[s].t);
    rep.field.push_back(std::move(res));
    rep.mask.push_back(std::move(mask));
    ref.push_back(std::move(dt_term));
  }
  summarize(rep, ref, g.dx());
  return rep;
}

void write_polar_csv(std::ostream& out, const PolarField& polar) {
  using detail::num;
  out << "x,R,phi,mask\n";
  for (std::size_t j = 0; j < polar.R.size(); ++j) {
    out << num(polar.grid.x(j)) << ',' << num(polar.R[j]) << ','
        << num(polar.phi[j]) << ',' << (polar.node_mask[j] ? 1 : 0) << '\n';
  }
}

void write_quantum_potential_csv(std::ostream& out,
                                 const QuantumPotentialField& field) {
  using detail::num;
  out << "x,U,mask\n";
  for (std::size_t j = 0; j < field.U_quantum.size(); ++j) {
    out << num(field.grid.x(j)) << ',' << num(field.U_quantum[j]) << ','
        << (field.node_mask[j] ? 1 : 0) << '\n';
  }
}

}  // namespace mvlab
