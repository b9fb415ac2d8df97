#include "mvlab/universes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "mvlab/errors.hpp"
#include "numfmt.hpp"
#include "stencil.hpp"

namespace mvlab {

VelocityField velocity_field(const PolarField& polar,
                             const PhysicalParams& params) {
  params.validate();
  auto grad = phase_gradient(polar);
  for (std::size_t j = 0; j < grad.size(); ++j) {
    grad[j] = polar.node_mask[j] ? 0.0 : grad[j] / params.mass;
  }
  return {polar.grid, std::move(grad), polar.node_mask};
}

std::vector<bool> dilate_mask(const std::vector<bool>& mask,
                              const SpatialGrid& grid, std::size_t cells) {
  const std::size_t n = mask.size();
  std::vector<bool> out(mask);
  for (std::size_t j = 0; j < n; ++j) {
    if (!mask[j]) continue;
    std::size_t l = j, r = j;
    for (std::size_t k = 0; k < cells; ++k) {
      if (grid.periodic() || l > 0) {
        l = detail::prev(l, n);
        out[l] = true;
      }
      if (grid.periodic() || r + 1 < n) {
        r = detail::next(r, n);
        out[r] = true;
      }
    }
  }
  return out;
}

std::vector<double> stratified_positions(const GridWavefunction& wf,
                                         std::size_t count,
                                         const PhysicalParams& params,
                                         const UniverseOptions& options) {
  require(count >= 1, ErrorKind::domain, "need at least one trajectory");
  const auto polar = decompose(wf, params, options.node_epsilon);
  const auto& g = wf.grid();
  const std::size_t n = g.size();
  const auto excluded = dilate_mask(polar.node_mask, g, options.node_dilation);

  std::vector<double> weight(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const bool end_cell = !g.periodic() && (j == 0 || j + 1 == n);
    if (!excluded[j] && !end_cell) weight[j] = polar.R[j] * polar.R[j];
  }
  std::vector<double> cumulative(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) cumulative[j + 1] = cumulative[j] + weight[j];
  const double total = cumulative[n];
  require(total > 0.0, ErrorKind::degenerate_input,
          "no admissible density to sample from");

  const double dx = g.dx();
  std::vector<double> xs(count);
  std::size_t cell = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(count) * total;
    while (cell + 1 < n && (cumulative[cell + 1] <= u || weight[cell] == 0.0)) ++cell;
    const double frac = (u - cumulative[cell]) / weight[cell];
    xs[i] = g.x(cell) - 0.5 * dx + dx * std::clamp(frac, 0.0, 1.0);
  }
  return xs;
}

namespace {

struct SnapshotFlow {
  std::vector<double> v;
  std::vector<bool> blocked;
};

enum class Probe { ok, blocked, outside };

class FlowInterpolator {
 public:
  FlowInterpolator(const EvolutionRecord& record, const PhysicalParams& params,
                   const UniverseOptions& options)
      : grid_(record.grid()) {
    flows_.reserve(record.snapshots.size());
    for (const auto& snap : record.snapshots) {
      const auto polar = decompose(snap.wf, params, options.node_epsilon);
      auto vel = velocity_field(polar, params);
      flows_.push_back({std::move(vel.v),
                        dilate_mask(polar.node_mask, grid_, options.node_dilation)});
    }
  }

  // Velocity at x inside interval s at fraction tau in [0, 1].
  Probe velocity(double x, std::size_t s, double tau, double& v) const {
    detail::CellPosition c{};
    if (!detail::locate(x, grid_, c)) return Probe::outside;
    const auto& a = flows_[s];
    if (a.blocked[c.lo] || a.blocked[c.hi]) return Probe::blocked;
    v = detail::interpolate(a.v, c);
    if (tau > 0.0) {
      const auto& b = flows_[s + 1];
      if (b.blocked[c.lo] || b.blocked[c.hi]) return Probe::blocked;
      v += tau * (detail::interpolate(b.v, c) - v);
    }
    return Probe::ok;
  }

 private:
  SpatialGrid grid_;
  std::vector<SnapshotFlow> flows_;
};

}  // namespace

TrajectoryEnsemble integrate_universes(const EvolutionRecord& record,
                                       std::span<const double> initial_positions,
                                       const PhysicalParams& params,
                                       const UniverseOptions& options) {
  params.validate();
  require(options.substeps >= 1, ErrorKind::domain, "substeps must be >= 1");
  const FlowInterpolator flow(record, params, options);
  const std::size_t n_t = record.snapshots.size();
  const std::size_t m = initial_positions.size();
  const double h = record.snapshot_interval() / static_cast<double>(options.substeps);
  const double dtau = 1.0 / static_cast<double>(options.substeps);

  TrajectoryEnsemble e;
  e.kind = TrajectoryKind::bohmian;
  for (const auto& s : record.snapshots) e.times.push_back(s.t);
  e.positions.assign(m, std::vector<double>(n_t));
  e.flags.assign(m, TrajectoryFlag::none);
  e.stop_index.assign(m, std::nullopt);

  for (std::size_t i = 0; i < m; ++i) {
    double x = initial_positions[i];
    double probe_v = 0.0;
    require(std::isfinite(x) && flow.velocity(x, 0, 0.0, probe_v) == Probe::ok,
            ErrorKind::domain,
            "initial position off-grid or inside a node neighbourhood");
    auto& xs = e.positions[i];
    xs[0] = x;
    for (std::size_t s = 0; s + 1 < n_t; ++s) {
      Probe status = Probe::ok;
      for (std::size_t q = 0; q < options.substeps && status == Probe::ok; ++q) {
        const double tau = static_cast<double>(q) * dtau;
        double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
        status = flow.velocity(x, s, tau, k1);
        if (status == Probe::ok) status = flow.velocity(x + 0.5 * h * k1, s, tau + 0.5 * dtau, k2);
        if (status == Probe::ok) status = flow.velocity(x + 0.5 * h * k2, s, tau + 0.5 * dtau, k3);
        if (status == Probe::ok) status = flow.velocity(x + h * k3, s, std::min(1.0, tau + dtau), k4);
        if (status == Probe::ok) x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      if (status != Probe::ok) {
        e.flags[i] = status == Probe::outside ? TrajectoryFlag::escaped
                                              : TrajectoryFlag::node_frozen;
        e.stop_index[i] = s + 1;
        std::fill(xs.begin() + static_cast<std::ptrdiff_t>(s + 1), xs.end(), xs[s]);
        break;
      }
      xs[s + 1] = x;
    }
  }
  return e;
}

std::size_t crossing_count(const TrajectoryEnsemble& ensemble,
                           double coincidence) {
  std::size_t crossings = 0;
  std::vector<std::size_t> order;
  for (std::size_t k = 1; k < ensemble.time_count(); ++k) {
    order.clear();
    for (std::size_t i = 0; i < ensemble.trajectory_count(); ++i) {
      if (ensemble.active(i, k)) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ensemble.positions[a][k - 1] < ensemble.positions[b][k - 1];
    });
    for (std::size_t q = 0; q + 1 < order.size(); ++q) {
      const double before = ensemble.positions[order[q + 1]][k - 1] -
                            ensemble.positions[order[q]][k - 1];
      const double after = ensemble.positions[order[q + 1]][k] -
                           ensemble.positions[order[q]][k];
      if (before > coincidence && after <= coincidence) ++crossings;
    }
  }
  return crossings;
}

bool is_order_preserving(const TrajectoryEnsemble& ensemble) {
  const std::size_t m = ensemble.trajectory_count();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ensemble.positions[a][0] < ensemble.positions[b][0];
  });
  for (std::size_t k = 0; k < ensemble.time_count(); ++k) {
    for (std::size_t q = 0; q + 1 < m; ++q) {
      if (!(ensemble.positions[order[q]][k] < ensemble.positions[order[q + 1]][k])) {
        return false;
      }
    }
  }
  return true;
}

double interval_probability(std::span<const double> density,
                            const SpatialGrid& grid, double a, double b) {
  require(density.size() == grid.size(), ErrorKind::domain,
          "density length does not match grid");
  require(b > a, ErrorKind::domain, "interval requires b > a");
  const double dx = grid.dx();
  double inside = 0.0, total = 0.0;
  for (std::size_t j = 0; j < density.size(); ++j) {
    const double lo = grid.x(j) - 0.5 * dx, hi = lo + dx;
    const double overlap = std::max(0.0, std::min(b, hi) - std::max(a, lo));
    inside += density[j] * overlap;
    total += density[j] * dx;
  }
  require(total > 0.0, ErrorKind::degenerate_input, "density has zero mass");
  return inside / total;
}

namespace {

double wrap_into_window(double x, const SpatialGrid& g) {
  if (!g.periodic()) return x;
  const double start = g.x_min() - 0.5 * g.dx();
  double u = std::fmod(x - start, g.length());
  if (u < 0.0) u += g.length();
  return start + u;
}

}  // namespace

DensityTransportReport density_transport_check(
    const EvolutionRecord& record, const TrajectoryEnsemble& ensemble,
    double a, double b, const PhysicalParams& params,
    const UniverseOptions& options) {
  require(ensemble.kind == TrajectoryKind::bohmian, ErrorKind::domain,
          "density transport needs a bohmian ensemble");
  require(ensemble.time_count() == record.snapshots.size(), ErrorKind::domain,
          "ensemble and record have different sample counts");
  for (std::size_t k = 0; k < ensemble.time_count(); ++k) {
    require(std::abs(ensemble.times[k] - record.snapshots[k].t) <= 1e-12 * (1.0 + std::abs(ensemble.times[k])),
            ErrorKind::domain, "ensemble and record sample different times");
  }
  require(ensemble.trajectory_count() >= 1, ErrorKind::domain,
          "empty ensemble");
  require(b > a, ErrorKind::domain, "interval requires b > a");

  const double edges[2] = {a, b};
  const auto images = integrate_universes(record, edges, params, options);
  const auto& g = record.grid();
  const double m = static_cast<double>(ensemble.trajectory_count());

  DensityTransportReport rep{a, b, ensemble.trajectory_count(), 3.0 / std::sqrt(m), 0.0, {}};
  double initial_probability = 0.0;
  for (std::size_t k = 0; k < ensemble.time_count(); ++k) {
    const auto polar = decompose(record.snapshots[k].wf, params, options.node_epsilon);
    const auto density = universe_density(polar);
    const double p_now = interval_probability(density, g, a, b);
    if (k == 0) initial_probability = p_now;
    const double ia = images.positions[0][k], ib = images.positions[1][k];
    std::size_t in_fixed = 0, in_image = 0;
    for (std::size_t i = 0; i < ensemble.trajectory_count(); ++i) {
      const double x = ensemble.positions[i][k];
      const double w = wrap_into_window(x, g);
      if (w > a && w < b) ++in_fixed;
      if (x > ia && x < ib) ++in_image;
    }
    TransportRow row{ensemble.times[k], static_cast<double>(in_fixed) / m, p_now, ia, ib,
                     static_cast<double>(in_image) / m, initial_probability, 0.0};
    row.deviation = std::max(std::abs(row.fraction_in_interval - row.density_probability),
                             std::abs(row.image_fraction - row.initial_probability));
    rep.max_deviation = std::max(rep.max_deviation, row.deviation);
    rep.rows.push_back(row);
  }
  return rep;
}

void write_transport_csv(std::ostream& out, const DensityTransportReport& r) {
  using detail::num;
  out << "t,fraction_in_interval,density_probability,image_a,image_b,"
         "image_fraction,initial_probability,deviation\n";
  for (const auto& row : r.rows) {
    out << num(row.t) << ',' << num(row.fraction_in_interval) << ','
        << num(row.density_probability) << ',' << num(row.image_a) << ','
        << num(row.image_b) << ',' << num(row.image_fraction) << ','
        << num(row.initial_probability) << ',' << num(row.deviation) << '\n';
  }
}

}  // namespace mvlab
