// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: acceptance <mvlab-binary> <config-dir> <golden-dir> <scratch-dir>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mvlab/errors.hpp"
#include "mvlab/evolution.hpp"
#include "mvlab/frequency.hpp"
#include "mvlab/madelung.hpp"
#include "mvlab/spin.hpp"
#include "mvlab/universes.hpp"

namespace fs = std::filesystem;
using namespace mvlab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Paths {
  std::string binary;
  fs::path configs;
  fs::path golden;
  fs::path scratch;
};

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// ---- 1. residual convergence ------------------------------------------------

constexpr double kResidualThreshold = 1e-4;
constexpr double kRefinementRatio = 3.5;
constexpr double kResidualNodeEpsilon = 1e-3;

std::pair<double, double> free_gaussian_residuals(std::size_t n, double dt) {
  const SpatialGrid g(-10.0, 10.0, n, Boundary::periodic);
  const PhysicalParams p{};
  const auto v = make_free_potential(g);
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / dt));
  const auto rec = evolve_schrodinger(make_gaussian_packet(g, 0.0, 1.0, 0.0, p), v, p, dt, steps, 20);
  return {continuity_residual(rec, p, kResidualNodeEpsilon).relative,
          hamilton_jacobi_residual(rec, v, p, kResidualNodeEpsilon).relative};
}

Verdict decomposition_equivalence(const Paths&) {
  const auto [c1, h1] = free_gaussian_residuals(2048, 1e-4);
  const auto [c2, h2] = free_gaussian_residuals(4096, 5e-5);
  const bool ok = c1 < kResidualThreshold && h1 < kResidualThreshold && c1 / c2 >= kRefinementRatio &&
                  h1 / h2 >= kRefinementRatio;
  return {ok, "continuity " + fmt(c1) + " -> " + fmt(c2) + " (x" + fmt(c1 / c2) + "), HJ " + fmt(h1) +
                  " -> " + fmt(h2) + " (x" + fmt(h1 / h2) + "); need < 1e-4 and x >= 3.5"};
}

// ---- 2. quantum potential ---------------------------------------------------

Verdict quantum_potential_exactness(const Paths&) {
  const PhysicalParams p{};
  const SpatialGrid ring(0.0, 2.0 * kPi, 256, Boundary::periodic);
  double plane = 0.0;
  for (double u : quantum_potential(decompose(make_plane_wave(ring, 4.0, 1.0), p), p).U_quantum) {
    plane = std::max(plane, std::abs(u));
  }
  const SpatialGrid g(-10.0, 10.0, 2048, Boundary::periodic);
  const auto qp = quantum_potential(decompose(make_gaussian_packet(g, 0.0, 1.0, 0.0, p), p), p);
  double gauss = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (qp.node_mask[j]) continue;
    const double x = g.x(j);
    gauss = std::max(gauss, std::abs(qp.U_quantum[j] + 0.5 * (x * x / 4.0 - 0.5)));
  }
  return {plane < 1e-12 && gauss < 1e-6,
          "plane-wave max|U| " + fmt(plane) + " (< 1e-12), Gaussian max error " + fmt(gauss) + " (< 1e-6)"};
}

// ---- 3. unitarity -----------------------------------------------------------

Verdict unitarity(const Paths&) {
  const PhysicalParams p{};
  const SpatialGrid g(-10.0, 10.0, 1024, Boundary::periodic);
  const SpatialGrid ring(0.0, 2.0 * kPi, 256, Boundary::periodic);
  const auto free = make_free_potential(g);
  const auto well = make_harmonic_potential(g, 1.0, p);
  struct Case {
    GridWavefunction wf;
    PotentialField v;
  };
  const auto a = make_gaussian_packet(g, -3.0, 1.0, 1.0, p);
  const auto b = make_gaussian_packet(g, 3.0, 0.7, -2.0, p);
  std::vector<Case> corpus{
      {make_gaussian_packet(g, 0.0, 1.0, 0.0, p), free},
      {make_gaussian_packet(g, 1.0, 0.8, 2.0, p), well},
      {make_plane_wave(ring, 3.0, 1.0), make_free_potential(ring)},
      {make_harmonic_eigenstate(g, 0, 1.0, p), well},
      {make_harmonic_eigenstate(g, 1, 1.0, p), well},
      {normalize(superpose(a, Complex(1.0), b, Complex(0.0, 1.0))), free},
  };
  double worst = 0.0;
  for (const auto& c : corpus) {
    const auto rec = evolve_schrodinger(c.wf, c.v, p, 1e-3, 10000);
    const double n0 = norm_squared(c.wf);
    for (const auto& s : rec.snapshots) worst = std::max(worst, std::abs(norm_squared(s.wf) - n0) / n0);
  }
  return {worst < 1e-8, "max relative norm drift " + fmt(worst) + " over 1e4 steps, " +
                            std::to_string(corpus.size()) + " states (< 1e-8)"};
}

// ---- 4. caustic contrast ----------------------------------------------------

Verdict caustic_contrast(const Paths&) {
  const PhysicalParams p{};
  const SpatialGrid g(-10.0, 10.0, 1024, Boundary::periodic);
  const auto v = make_free_potential(g);
  const double T = 2.0, dt = 1e-3;
  const std::size_t steps = 2000, m = 64;
  std::vector<double> x0, v0;
  for (std::size_t i = 0; i < m; ++i) {
    x0.push_back(-5.0 + 10.0 * static_cast<double>(i) / (m - 1));
    v0.push_back(-x0.back() / T);
  }
  const auto classical = classical_ensemble_evolve(x0, v0, v, p, dt, steps);
  const std::size_t classical_crossings = crossing_count(classical.trajectories);

  const auto wf0 = make_gaussian_packet(g, 0.0, 1.0, 0.0, p);
  const auto rec = evolve_schrodinger(wf0, v, p, dt, steps);
  const auto bohm = integrate_universes(rec, stratified_positions(wf0, 20, p), p);
  const std::size_t bohm_crossings = crossing_count(bohm);
  double worst = 0.0;
  bool all_active = true;
  for (std::size_t i = 0; i < bohm.trajectory_count(); ++i) {
    all_active = all_active && bohm.flags[i] == TrajectoryFlag::none;
    for (std::size_t k = 0; k < bohm.time_count(); ++k) {
      const double t = bohm.times[k];
      const double expected = bohm.positions[i][0] * std::sqrt(1.0 + t * t / 4.0);
      worst = std::max(worst, std::abs(bohm.positions[i][k] - expected) / std::abs(expected));
    }
  }
  const bool ok = classical_crossings >= m - 1 && bohm_crossings == 0 && all_active && worst < 1e-4;
  return {ok, "classical crossings " + std::to_string(classical_crossings) + " (>= 63), Bohmian crossings " +
                  std::to_string(bohm_crossings) + " (= 0), scaling-map error " + fmt(worst) + " (< 1e-4)"};
}

// ---- 5. density transport ---------------------------------------------------

Verdict density_transport(const Paths&) {
  const PhysicalParams p{};
  const SpatialGrid g(-10.0, 10.0, 1024, Boundary::periodic);
  const auto wf0 = make_gaussian_packet(g, 0.0, 1.0, 0.0, p);
  const auto rec = evolve_schrodinger(wf0, make_free_potential(g), p, 1e-3, 2000, 10);
  auto report = [&](std::size_t m) {
    const auto ens = integrate_universes(rec, stratified_positions(wf0, m, p), p);
    return density_transport_check(rec, ens, -1.0, 1.0, p);
  };
  const auto big = report(10000);
  const auto small = report(2500);
  bool every_row = true;
  for (const auto& row : big.rows) every_row = every_row && row.deviation < big.bound;
  const bool ok = every_row && small.max_deviation < small.bound &&
                  std::abs(small.bound / big.bound - 2.0) < 1e-12;
  return {ok, "M=1e4 max deviation " + fmt(big.max_deviation) + " (< " + fmt(big.bound) + " at all " +
                  std::to_string(big.rows.size()) + " snapshots); M=2500 " + fmt(small.max_deviation) +
                  " (< " + fmt(small.bound) + "); bound ratio " + fmt(small.bound / big.bound)};
}

// ---- 6. four-world split ----------------------------------------------------

std::pair<PointerLabel, PointerLabel> fresh() { return {PointerLabel(1), PointerLabel(2)}; }

BranchList rotated_singlet(double theta) {
  return apply_measurement(rotate_second_basis(singlet(Direction(theta)), Direction::vertical()), fresh());
}

Verdict four_world_split_check(const Paths&) {
  double worst = 0.0;
  for (int i = 0; i < 32; ++i) {
    const double theta = kPi * i / 31.0;
    const double s2 = std::pow(std::sin(theta / 2.0), 2), c2 = std::pow(std::cos(theta / 2.0), 2);
    const std::array<double, 4> oracle{s2 / 2, c2 / 2, c2 / 2, s2 / 2};
    const auto w = four_world_split(theta);
    std::array<double, 4> from_branches{};
    for (const auto& b : rotated_singlet(theta)) {
      from_branches[component_index(b.spins.first, b.spins.second)] = b.weight();
    }
    for (std::size_t k = 0; k < 4; ++k) {
      worst = std::max({worst, std::abs(w[k] - oracle[k]), std::abs(from_branches[k] - oracle[k])});
    }
  }
  const bool quarter = four_world_split(kPi / 2.0) == std::array<double, 4>{0.25, 0.25, 0.25, 0.25};
  const auto two = apply_measurement(singlet(Direction::vertical()), fresh());
  const bool two_world = four_world_split(0.0) == std::array<double, 4>{0.0, 0.5, 0.5, 0.0} &&
                         two.size() == 2 && std::abs(two[0].weight() - 0.5) < 1e-15 &&
                         std::abs(two[1].weight() - 0.5) < 1e-15;
  return {worst < 1e-12 && quarter && two_world,
          "max weight error " + fmt(worst) + " over 32 angles (< 1e-12), pi/2 exact quarters " +
              (quarter ? "yes" : "no") + ", theta=0 two worlds " + (two_world ? "yes" : "no")};
}

// ---- 7. distributivity ------------------------------------------------------

Verdict distributivity(const Paths&) {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> gauss;
  int checked = 0, equal = 0;
  auto check = [&](const TwoSpinState& s) {
    std::vector<BranchList> parts;
    for (const auto& term : expand_terms(s.amplitudes)) parts.push_back(measure_components(term, fresh()));
    ++checked;
    if (sum_branches(parts) == apply_measurement(s, fresh())) ++equal;
  };
  check(singlet(Direction::vertical()));
  while (checked < 101) {
    SpinAmplitudes a;
    double norm = 0.0;
    for (auto& c : a) {
      c = Complex(gauss(rng), gauss(rng));
      norm += std::norm(c);
    }
    for (auto& c : a) c /= std::sqrt(norm);
    check({Direction::vertical(), Direction(1.0), a});
  }
  return {equal == checked, std::to_string(equal) + "/" + std::to_string(checked) +
                                " states identical branch-for-branch (singlet + 100 random)"};
}

// ---- 8. Born statistics -----------------------------------------------------

Verdict born_statistics(const Paths&) {
  double worst_mean = 0.0, worst_var = 0.0;
  const std::vector<double> ps{0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
  for (int n = 1; n <= 12; ++n) {
    for (double p : ps) {
      const auto tree = enumerate_branch_tree(n, p);
      worst_mean = std::max(worst_mean, std::abs(tree.expectation([](double f) { return f; }) - p));
      const double var = tree.expectation([&](double f) { return (f - p) * (f - p); });
      worst_var = std::max(worst_var, std::abs(var - p * (1 - p) / n));
    }
  }
  const std::vector<int> ns{10, 20, 40, 80};
  bool scaling = true;
  for (double p : ps) scaling = scaling && moment_scaling_report(4, ns, p).all_within;
  return {worst_mean < 1e-12 && worst_var < 1e-12 && scaling,
          "max |<f>-p| " + fmt(worst_mean) + ", max |var-pq/N| " + fmt(worst_var) +
              " (< 1e-12); C_m/N bound m<=4 " + (scaling ? "holds" : "violated")};
}

// ---- 9. correlation and CHSH ------------------------------------------------

Verdict correlation_chsh(const Paths&) {
  double worst = 0.0;
  for (int i = 0; i < 32; ++i) {
    const double theta = kPi * i / 31.0;
    const double oracle = -std::cos(theta);
    worst = std::max({worst, std::abs(correlation(theta) - oracle),
                      std::abs(correlation_from_branches(rotated_singlet(theta)) - oracle)});
  }
  const double s = std::abs(chsh(0.0, kPi / 2.0, kPi / 4.0, 3.0 * kPi / 4.0));
  const double det = deterministic_chsh_max();
  return {worst < 1e-12 && std::abs(s - 2.0 * std::sqrt(2.0)) < 1e-12 && det <= 2.0,
          "max E error " + fmt(worst) + " (< 1e-12), |S| = " + fmt(s) + ", deterministic max " + fmt(det)};
}

// ---- 10. CLI reproducibility ------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict cli_reproducibility(const Paths& paths) {
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(paths.configs)) {
    if (e.path().extension() == ".json") configs.push_back(e.path());
  }
  std::sort(configs.begin(), configs.end());
  std::string problems;
  std::size_t files = 0;
  for (const auto& cfg : configs) {
    const std::string name = cfg.stem().string();
    const auto golden = paths.golden / name;
    std::vector<fs::path> runs{paths.scratch / name / "a", paths.scratch / name / "b"};
    for (const auto& dir : runs) {
      fs::remove_all(dir);
      const std::string cmd = paths.binary + " " + name + " --config " + cfg.string() + " --quiet --out-dir " +
                              dir.string();
      const int raw = std::system(cmd.c_str());
      if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) problems += " " + name + ":exit";
    }
    if (!fs::is_directory(golden)) {
      problems += " " + name + ":no-golden";
      continue;
    }
    for (const auto& g : fs::directory_iterator(golden)) {
      const auto file = g.path().filename();
      const auto expected = slurp(g.path());
      ++files;
      for (const auto& dir : runs) {
        if (!fs::exists(dir / file) || slurp(dir / file) != expected) {
          problems += " " + name + "/" + file.string();
          break;
        }
      }
    }
  }
  const bool ok = problems.empty() && !configs.empty() && files > 0;
  return {ok, std::to_string(configs.size()) + " configs, " + std::to_string(files) +
                  " golden files compared over two runs" + (problems.empty() ? "" : "; mismatches:" + problems)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 5) {
    std::fprintf(stderr, "usage: %s <mvlab> <config-dir> <golden-dir> <scratch-dir>\n", argv[0]);
    return 2;
  }
  const Paths paths{argv[1], argv[2], argv[3], argv[4]};
  const std::vector<std::pair<const char*, std::function<Verdict(const Paths&)>>> criteria{
      {"decomposition equivalence", decomposition_equivalence},
      {"quantum potential exactness", quantum_potential_exactness},
      {"unitarity", unitarity},
      {"caustic contrast", caustic_contrast},
      {"universe-density transport", density_transport},
      {"four-world split", four_world_split_check},
      {"distributivity equivalence", distributivity},
      {"Born statistics", born_statistics},
      {"correlation and CHSH", correlation_chsh},
      {"CLI reproducibility", cli_reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v{false, ""};
    try {
      v = criteria[i].second(paths);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s [%zu] %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
