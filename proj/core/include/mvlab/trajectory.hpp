#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mvlab {

enum class TrajectoryKind { bohmian, classical };

const char* to_string(TrajectoryKind kind) noexcept;

enum class TrajectoryFlag {
  none,
  escaped,      // left a dirichlet domain (classical)
  node_frozen,  // entered a node neighbourhood of the wave (bohmian)
};

const char* to_string(TrajectoryFlag flag) noexcept;

/// Positions of M trajectories at T shared times.
///
/// A flagged trajectory keeps its last regular position from `stop_index`
/// onwards and is excluded from ordering diagnostics from that sample on.
struct TrajectoryEnsemble {
  TrajectoryKind kind = TrajectoryKind::bohmian;
  std::vector<double> times;
  std::vector<std::vector<double>> positions;   // [trajectory][time]
  std::vector<std::vector<double>> velocities;  // empty, or same shape
  std::vector<TrajectoryFlag> flags;            // per trajectory
  std::vector<std::optional<std::size_t>> stop_index;

  std::size_t trajectory_count() const noexcept { return positions.size(); }
  std::size_t time_count() const noexcept { return times.size(); }

  // True while trajectory i is still integrated at time sample k.
  bool active(std::size_t i, std::size_t k) const noexcept {
    return !stop_index[i] || k < *stop_index[i];
  }
};

// CSV: t,trajectory_id,x,kind,flags (long format)
void write_trajectories_csv(std::ostream& out, const TrajectoryEnsemble& e);

}  // namespace mvlab
