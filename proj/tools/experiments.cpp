#include "experiments.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mvlab/errors.hpp"
#include "mvlab/evolution.hpp"
#include "mvlab/fields.hpp"
#include "mvlab/frequency.hpp"
#include "mvlab/madelung.hpp"
#include "mvlab/spin.hpp"
#include "mvlab/universes.hpp"

#ifndef MVLAB_VERSION
#define MVLAB_VERSION "0.0.0"
#endif

namespace mvlab::cli {
namespace {

constexpr int kOutputFormat = 1;

template <class Writer>
OutputFile render(std::string name, Writer&& w) {
  std::ostringstream os;
  w(os);
  return {std::move(name), os.str()};
}

OutputFile render_json(std::string name, const Json& j) {
  return {std::move(name), j.dump(2) + "\n"};
}

PhysicalParams physical(const ExperimentConfig& c) {
  return {c.number("hbar"), c.number("mass")};
}

SpatialGrid grid_from(const ExperimentConfig& c, Boundary b) {
  return SpatialGrid(c.number("x_min"), c.number("x_max"),
                     static_cast<std::size_t>(c.integer("n_points")), b);
}

SpatialGrid grid_from(const ExperimentConfig& c) {
  return grid_from(c, c.text("boundary") == "periodic" ? Boundary::periodic
                                                       : Boundary::dirichlet);
}

PotentialField potential_from(const ExperimentConfig& c, const SpatialGrid& g) {
  if (c.text("potential") == "harmonic") {
    return make_harmonic_potential(g, c.number("omega"), physical(c));
  }
  return make_free_potential(g);
}

GridWavefunction initial_from(const ExperimentConfig& c, const SpatialGrid& g) {
  const auto p = physical(c);
  const auto kind = c.text("initial");
  if (kind == "plane_wave") return make_plane_wave(g, c.number("k"), c.number("amplitude"));
  if (kind == "harmonic_ground") return make_harmonic_eigenstate(g, 0, c.number("omega"), p);
  if (kind == "harmonic_first") return make_harmonic_eigenstate(g, 1, c.number("omega"), p);
  return make_gaussian_packet(g, c.number("x0"), c.number("sigma"), c.number("k0"), p);
}

EvolutionRecord evolve_from(const ExperimentConfig& c, const GridWavefunction& wf0,
                            const PotentialField& v) {
  return evolve_schrodinger(wf0, v, physical(c), c.number("dt"),
                            static_cast<std::size_t>(c.integer("n_steps")),
                            static_cast<std::size_t>(c.integer("stride")));
}

std::vector<OutputFile> run_evolve(const ExperimentConfig& c) {
  const auto g = grid_from(c);
  const auto v = potential_from(c, g);
  const auto wf0 = initial_from(c, g);
  const auto rec = evolve_from(c, wf0, v);
  const double n0 = norm_squared(rec.snapshots.front().wf);
  double drift = 0.0;
  for (const auto& s : rec.snapshots) drift = std::max(drift, std::abs(norm_squared(s.wf) - n0));
  Json summary = {{"snapshots", rec.snapshots.size()},
                  {"snapshot_interval", rec.snapshot_interval()},
                  {"integrator", g.periodic() ? "split_step" : "crank_nicolson"},
                  {"initial_norm_squared", n0},
                  {"max_norm_drift", drift}};
  return {render("initial_wavefunction.csv", [&](auto& os) { write_wavefunction_csv(os, wf0); }),
          render("evolution.csv", [&](auto& os) { write_evolution_csv(os, rec); }),
          render_json("evolve.json", summary)};
}

std::vector<OutputFile> run_decompose(const ExperimentConfig& c) {
  const auto g = grid_from(c);
  const auto v = potential_from(c, g);
  const auto p = physical(c);
  const auto rec = evolve_from(c, initial_from(c, g), v);
  const auto polar = decompose(rec.snapshots.back().wf, p, c.number("node_epsilon"));
  const auto qp = quantum_potential(polar, p);
  return {render("polar.csv", [&](auto& os) { write_polar_csv(os, polar); }),
          render("quantum_potential.csv", [&](auto& os) { write_quantum_potential_csv(os, qp); })};
}

std::vector<OutputFile> run_universes(const ExperimentConfig& c) {
  const auto g = grid_from(c);
  const auto v = potential_from(c, g);
  const auto p = physical(c);
  const auto wf0 = initial_from(c, g);
  const auto rec = evolve_from(c, wf0, v);
  UniverseOptions opt;
  opt.node_epsilon = c.number("node_epsilon");
  const auto starts = stratified_positions(
      wf0, static_cast<std::size_t>(c.integer("trajectories")), p, opt);
  const auto ens = integrate_universes(rec, starts, p, opt);
  const auto rep = density_transport_check(rec, ens, c.number("interval_a"),
                                           c.number("interval_b"), p, opt);
  Json summary = {{"trajectories", ens.trajectory_count()},
                  {"crossing_count", crossing_count(ens)},
                  {"order_preserving", is_order_preserving(ens)},
                  {"deviation_bound", rep.bound},
                  {"max_deviation", rep.max_deviation}};
  return {render("trajectories.csv", [&](auto& os) { write_trajectories_csv(os, ens); }),
          render("density_transport.csv", [&](auto& os) { write_transport_csv(os, rep); }),
          render_json("universes.json", summary)};
}

std::vector<OutputFile> run_caustic(const ExperimentConfig& c) {
  const auto p = physical(c);
  const auto g = grid_from(c, Boundary::periodic);
  const auto v = make_free_potential(g);
  const double horizon = c.number("horizon");
  const double dt = c.number("dt");
  const auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
  require(n_steps >= 2, ErrorKind::step_size, "horizon must span at least two steps");

  const auto m = static_cast<std::size_t>(c.integer("classical_trajectories"));
  const double spread = c.number("classical_spread");
  std::vector<double> x0(m), v0(m);
  for (std::size_t i = 0; i < m; ++i) {
    x0[i] = -spread + 2.0 * spread * static_cast<double>(i) / static_cast<double>(m - 1);
    v0[i] = -x0[i] / horizon;
  }
  const auto classical = classical_ensemble_evolve(x0, v0, v, p, dt, n_steps);

  const auto wf0 = make_gaussian_packet(g, 0.0, c.number("sigma"), 0.0, p);
  const auto rec = evolve_schrodinger(wf0, v, p, dt, n_steps);
  const auto starts = stratified_positions(
      wf0, static_cast<std::size_t>(c.integer("bohmian_trajectories")), p);
  const auto bohm = integrate_universes(rec, starts, p);

  Json summary = {{"classical_trajectories", m},
                  {"classical_crossings", crossing_count(classical.trajectories)},
                  {"bohmian_trajectories", bohm.trajectory_count()},
                  {"bohmian_crossings", crossing_count(bohm)},
                  {"bohmian_order_preserving", is_order_preserving(bohm)}};
  return {render("classical.csv", [&](auto& os) { write_classical_csv(os, classical); }),
          render("bohmian.csv", [&](auto& os) { write_trajectories_csv(os, bohm); }),
          render_json("caustic.json", summary)};
}

BranchList rotated_singlet_branches(double theta) {
  const auto state = rotate_second_basis(singlet(Direction(theta)), Direction::vertical());
  return apply_measurement(state, {PointerLabel(1), PointerLabel(2)});
}

std::vector<OutputFile> run_spin_split(const ExperimentConfig& c) {
  const double theta = c.number("theta");
  const auto branches = rotated_singlet_branches(theta);
  const auto w = four_world_split(theta);
  Json summary = {{"theta", theta},
                  {"outcomes", {"up_up", "up_down", "down_up", "down_down"}},
                  {"four_world_weights", {w[0], w[1], w[2], w[3]}},
                  {"branch_count", branches.size()},
                  {"total_weight", total_weight(branches)}};
  return {{"branches.json", branches_to_json(branches) + "\n"},
          render_json("spin_split.json", summary)};
}

std::vector<OutputFile> run_branch_stats(const ExperimentConfig& c) {
  const int n = static_cast<int>(c.integer("N"));
  const double p = c.number("p");
  const int m_max = static_cast<int>(c.integer("m_max"));
  const auto tree = enumerate_branch_tree(n, p);
  Json moments = Json::array();
  for (int m = 0; m <= m_max; ++m) {
    const double brute = tree.expectation([&](double f) { return std::pow(f - p, m); });
    moments.push_back({{"m", m}, {"exact", central_moment(m, n, p)}, {"enumerated", brute}});
  }
  Json distribution = Json::array();
  for (int r = 0; r <= n; ++r) distribution.push_back(prob_r_given_N(r, n, p));
  Json summary = {{"N", n},
                  {"p", p},
                  {"branches", tree.entries.size()},
                  {"total_weight", tree.expectation([](double) { return 1.0; })},
                  {"expected_frequency", expected_frequency(n, p)},
                  {"enumerated_expected_frequency", tree.expectation([](double f) { return f; })},
                  {"prob_r_given_N", distribution},
                  {"central_moments", moments}};
  return {render("branch_tree.csv", [&](auto& os) { write_branch_tree_csv(os, tree); }),
          render_json("branch_stats.json", summary)};
}

std::vector<OutputFile> run_bell(const ExperimentConfig& c) {
  const auto samples = static_cast<std::size_t>(c.integer("samples"));
  Json table = Json::array();
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples - 1);
    table.push_back({{"theta", theta},
                     {"closed_form", correlation(theta)},
                     {"branch_sum", correlation_from_branches(rotated_singlet_branches(theta))}});
  }
  const double s = chsh(c.number("a"), c.number("a_prime"), c.number("b"), c.number("b_prime"));
  Json summary = {{"angles", {{"a", c.number("a")}, {"a_prime", c.number("a_prime")},
                              {"b", c.number("b")}, {"b_prime", c.number("b_prime")}}},
                  {"chsh", s},
                  {"abs_chsh", std::abs(s)},
                  {"tsirelson_bound", 2.0 * std::numbers::sqrt2},
                  {"deterministic_max", deterministic_chsh_max()},
                  {"correlations", table}};
  return {render_json("bell.json", summary)};
}

std::vector<OutputFile> run_convergence(const ExperimentConfig& c) {
  std::vector<int> ns;
  for (auto v : c.integers("N_values")) ns.push_back(static_cast<int>(v));
  const auto rows = convergence_demo(ns, c.number("p"), static_cast<std::uint64_t>(c.integer("seed")));
  return {render("convergence.csv", [&](auto& os) { write_convergence_csv(os, rows); })};
}

Json config_echo(const ExperimentConfig& c) {
  return {{"experiment", to_string(c.experiment)}, {"parameters", c.parameters}};
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  return static_cast<bool>(out);
}

}  // namespace

std::vector<OutputFile> compute_outputs(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::evolve: return run_evolve(config);
    case Experiment::decompose: return run_decompose(config);
    case Experiment::universes: return run_universes(config);
    case Experiment::caustic: return run_caustic(config);
    case Experiment::spin_split: return run_spin_split(config);
    case Experiment::branch_stats: return run_branch_stats(config);
    case Experiment::bell: return run_bell(config);
    case Experiment::convergence: return run_convergence(config);
  }
  return {};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string manifest_json(const ExperimentConfig& config,
                          const std::vector<OutputFile>& outputs) {
  Json files = Json::array();
  for (const auto& f : outputs) {
    files.push_back({{"file", f.name}, {"bytes", f.content.size()}, {"sha256", sha256_hex(f.content)}});
  }
  Json m = {{"status", "ok"},
            {"config", config_echo(config)},
            {"versions", {{"mvlab", MVLAB_VERSION}, {"output_format", kOutputFormat}}},
            {"outputs", files}};
  return m.dump(2) + "\n";
}

RunResult run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  std::vector<OutputFile> outputs;
  try {
    outputs = compute_outputs(config);
  } catch (const Error& e) {
    result.status = e.is_numerical_guard() ? kExitNumericalGuard : kExitValidation;
    result.message = e.what();
    return result;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    result.status = kExitIo;
    result.message = "cannot create output directory '" + out_dir.string() + "': " + ec.message();
    return result;
  }

  for (const auto& f : outputs) {
    const auto path = out_dir / f.name;
    if (!write_file(path, f.content)) {
      for (const auto& done : result.written) std::filesystem::remove(done, ec);
      result.written.clear();
      Json failed = {{"status", "failed"},
                     {"config", config_echo(config)},
                     {"versions", {{"mvlab", MVLAB_VERSION}, {"output_format", kOutputFormat}}},
                     {"error", "cannot write " + f.name}};
      const auto manifest = out_dir / "manifest.json";
      if (write_file(manifest, failed.dump(2) + "\n")) result.written.push_back(manifest);
      result.status = kExitIo;
      result.message = "cannot write '" + path.string() + "'";
      return result;
    }
    result.written.push_back(path);
  }

  const auto manifest = out_dir / "manifest.json";
  const auto timing = out_dir / "timing.json";
  const bool ok = write_file(manifest, manifest_json(config, outputs)) &&
                  write_file(timing, Json({{"wall_time_s", wall}}).dump(2) + "\n");
  if (!ok) {
    for (const auto& done : result.written) std::filesystem::remove(done, ec);
    std::filesystem::remove(manifest, ec);
    std::filesystem::remove(timing, ec);
    result.written.clear();
    result.status = kExitIo;
    result.message = "cannot write manifest in '" + out_dir.string() + "'";
    return result;
  }
  result.written.push_back(manifest);
  result.written.push_back(timing);
  return result;
}

}  // namespace mvlab::cli
