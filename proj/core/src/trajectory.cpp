#include "mvlab/trajectory.hpp"

#include <ostream>

#include "numfmt.hpp"

namespace mvlab {

const char* to_string(TrajectoryKind kind) noexcept {
  return kind == TrajectoryKind::bohmian ? "bohmian" : "classical";
}

const char* to_string(TrajectoryFlag flag) noexcept {
  switch (flag) {
    case TrajectoryFlag::none: return "none";
    case TrajectoryFlag::escaped: return "escaped";
    case TrajectoryFlag::node_frozen: return "node_frozen";
  }
  return "none";
}

void write_trajectories_csv(std::ostream& out, const TrajectoryEnsemble& e) {
  using detail::num;
  out << "t,trajectory_id,x,kind,flags\n";
  const char* kind = to_string(e.kind);
  for (std::size_t k = 0; k < e.time_count(); ++k) {
    const std::string t = num(e.times[k]);
    for (std::size_t i = 0; i < e.trajectory_count(); ++i) {
      const char* flag = e.active(i, k) ? "none" : to_string(e.flags[i]);
      out << t << ',' << i << ',' << num(e.positions[i][k]) << ',' << kind
          << ',' << flag << '\n';
    }
  }
}

}  // namespace mvlab
