#include "config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace mvlab::cli {
namespace {

enum class Kind { number, integer, text, integer_list };

struct ParamSpec {
  const char* name;
  Kind kind;
  Json fallback;  // null = required
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<std::string> choices = {};
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

std::vector<ParamSpec> wave_specs() {
  return {
      {"x_min", Kind::number, -10.0},
      {"x_max", Kind::number, 10.0},
      {"n_points", Kind::integer, 2048, 8, 1 << 22},
      {"boundary", Kind::text, "periodic", -kInf, kInf, {"periodic", "dirichlet"}},
      {"hbar", Kind::number, 1.0, 0.0, kInf},
      {"mass", Kind::number, 1.0, 0.0, kInf},
      {"potential", Kind::text, "free", -kInf, kInf, {"free", "harmonic"}},
      {"omega", Kind::number, 1.0, 0.0, kInf},
      {"initial", Kind::text, "gaussian", -kInf, kInf,
       {"gaussian", "plane_wave", "harmonic_ground", "harmonic_first"}},
      {"x0", Kind::number, 0.0},
      {"sigma", Kind::number, 1.0, 0.0, kInf},
      {"k0", Kind::number, 0.0},
      {"k", Kind::number, 0.0},
      {"amplitude", Kind::number, 1.0, 0.0, kInf},
      {"dt", Kind::number, 1e-4, 0.0, kInf},
      {"n_steps", Kind::integer, 1000, 0, 1e8},
      {"stride", Kind::integer, 0, 0, 1e8},
  };
}

std::vector<ParamSpec> specs_for(Experiment e) {
  switch (e) {
    case Experiment::evolve:
      return wave_specs();
    case Experiment::decompose: {
      auto s = wave_specs();
      for (auto& p : s) {
        if (std::string(p.name) == "n_steps") p.fallback = 0;
      }
      s.push_back({"node_epsilon", Kind::number, 1e-6, 0.0, 0.1});
      return s;
    }
    case Experiment::universes: {
      auto s = wave_specs();
      s.push_back({"node_epsilon", Kind::number, 1e-6, 0.0, 0.1});
      s.push_back({"trajectories", Kind::integer, 1000, 1, 1e7});
      s.push_back({"interval_a", Kind::number, -1.0});
      s.push_back({"interval_b", Kind::number, 1.0});
      return s;
    }
    case Experiment::caustic:
      return {
          {"x_min", Kind::number, -10.0},
          {"x_max", Kind::number, 10.0},
          {"n_points", Kind::integer, 1024, 8, 1 << 22},
          {"hbar", Kind::number, 1.0, 0.0, kInf},
          {"mass", Kind::number, 1.0, 0.0, kInf},
          {"sigma", Kind::number, 1.0, 0.0, kInf},
          {"horizon", Kind::number, 2.0, 0.0, kInf},
          {"dt", Kind::number, 1e-3, 0.0, kInf},
          {"classical_trajectories", Kind::integer, 64, 2, 1e6},
          {"classical_spread", Kind::number, 5.0, 0.0, kInf},
          {"bohmian_trajectories", Kind::integer, 20, 2, 1e6},
      };
    case Experiment::spin_split:
      return {{"theta", Kind::number, nullptr, 0.0, kPi}};
    case Experiment::branch_stats:
      return {
          {"N", Kind::integer, nullptr, 1, 20},
          {"p", Kind::number, nullptr, 0.0, 1.0},
          {"m_max", Kind::integer, 4, 0, 64},
      };
    case Experiment::bell:
      return {
          {"a", Kind::number, 0.0},
          {"a_prime", Kind::number, kPi / 2.0},
          {"b", Kind::number, kPi / 4.0},
          {"b_prime", Kind::number, 3.0 * kPi / 4.0},
          {"samples", Kind::integer, 32, 2, 1e6},
      };
    case Experiment::convergence:
      return {
          {"N_values", Kind::integer_list, nullptr, 1, 1e9},
          {"p", Kind::number, nullptr, 0.0, 1.0},
          {"seed", Kind::integer, nullptr, 0, 9.0e15},
      };
  }
  return {};
}

bool open_range(const ParamSpec& s) {
  // Physical scales must be strictly positive.
  static const std::array<std::string, 7> positive = {"hbar", "mass", "sigma", "dt",
                                                      "omega", "horizon", "amplitude"};
  for (const auto& p : positive) {
    if (p == s.name) return true;
  }
  return std::string(s.name) == "node_epsilon";
}

Json validate_value(const ParamSpec& s, const Json& v) {
  const std::string key = s.name;
  auto range_check = [&](double x) {
    const bool lo_ok = open_range(s) ? x > s.lo : x >= s.lo;
    if (!lo_ok || x > s.hi) {
      throw ConfigError(key, "parameter '" + key + "' out of range");
    }
  };
  switch (s.kind) {
    case Kind::number: {
      if (!v.is_number()) throw ConfigError(key, "parameter '" + key + "' must be a number");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw ConfigError(key, "parameter '" + key + "' must be finite");
      range_check(x);
      return x;
    }
    case Kind::integer: {
      if (!v.is_number_integer() && !(v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())) {
        throw ConfigError(key, "parameter '" + key + "' must be an integer");
      }
      const auto x = v.is_number_integer() ? v.get<std::int64_t>()
                                           : static_cast<std::int64_t>(v.get<double>());
      range_check(static_cast<double>(x));
      return x;
    }
    case Kind::text: {
      if (!v.is_string()) throw ConfigError(key, "parameter '" + key + "' must be a string");
      const auto x = v.get<std::string>();
      if (!s.choices.empty() &&
          std::find(s.choices.begin(), s.choices.end(), x) == s.choices.end()) {
        throw ConfigError(key, "parameter '" + key + "' has unsupported value '" + x + "'");
      }
      return x;
    }
    case Kind::integer_list: {
      if (!v.is_array() || v.empty()) {
        throw ConfigError(key, "parameter '" + key + "' must be a non-empty integer array");
      }
      Json out = Json::array();
      std::int64_t last = std::numeric_limits<std::int64_t>::min();
      for (const auto& e : v) {
        if (!e.is_number_integer()) {
          throw ConfigError(key, "parameter '" + key + "' must contain integers");
        }
        const auto x = e.get<std::int64_t>();
        range_check(static_cast<double>(x));
        if (x <= last) throw ConfigError(key, "parameter '" + key + "' must be increasing");
        last = x;
        out.push_back(x);
      }
      return out;
    }
  }
  return v;
}

Json parse_override_value(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return text;
  }
}

}  // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Experiment::convergence); ++i) {
    const auto e = static_cast<Experiment>(i);
    if (name == to_string(e)) return e;
  }
  return std::nullopt;
}

const char* to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::evolve: return "evolve";
    case Experiment::decompose: return "decompose";
    case Experiment::universes: return "universes";
    case Experiment::caustic: return "caustic";
    case Experiment::spin_split: return "spin_split";
    case Experiment::branch_stats: return "branch_stats";
    case Experiment::bell: return "bell";
    case Experiment::convergence: return "convergence";
  }
  return "";
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (int i = 0; i <= static_cast<int>(Experiment::convergence); ++i) {
    out.emplace_back(to_string(static_cast<Experiment>(i)));
  }
  return out;
}

ExperimentConfig build_config(Experiment experiment, const Json& document,
                              const std::vector<std::string>& overrides,
                              std::optional<std::int64_t> seed) {
  if (!document.is_object()) throw ConfigError("<config>", "config must be a JSON object");
  Json raw = Json::object();
  if (document.contains("parameters")) {
    for (const auto& [k, v] : document.items()) {
      if (k != "experiment" && k != "parameters") {
        throw ConfigError(k, "unknown top-level key '" + k + "'");
      }
    }
    if (document.contains("experiment")) {
      const auto& e = document.at("experiment");
      if (!e.is_string() || e.get<std::string>() != to_string(experiment)) {
        throw ConfigError("experiment", "config is for a different experiment");
      }
    }
    raw = document.at("parameters");
    if (!raw.is_object()) throw ConfigError("parameters", "parameters must be an object");
  } else {
    raw = document;
  }

  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(ov, "override '" + ov + "' is not of the form key=value");
    }
    raw[ov.substr(0, eq)] = parse_override_value(ov.substr(eq + 1));
  }
  if (seed) raw["seed"] = *seed;

  const auto specs = specs_for(experiment);
  for (const auto& [k, v] : raw.items()) {
    const bool known = std::any_of(specs.begin(), specs.end(),
                                   [&](const ParamSpec& s) { return k == s.name; });
    if (!known) {
      throw ConfigError(k, "unknown parameter '" + k + "' for experiment " +
                               to_string(experiment));
    }
  }

  ExperimentConfig cfg{experiment, Json::object()};
  for (const auto& s : specs) {
    if (raw.contains(s.name)) {
      cfg.parameters[s.name] = validate_value(s, raw.at(s.name));
    } else if (s.fallback.is_null()) {
      throw ConfigError(s.name, std::string("missing required parameter '") + s.name + "'");
    } else {
      cfg.parameters[s.name] = s.fallback;
    }
  }
  return cfg;
}

double ExperimentConfig::number(const std::string& key) const {
  return parameters.at(key).get<double>();
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  return parameters.at(key).get<std::int64_t>();
}

std::string ExperimentConfig::text(const std::string& key) const {
  return parameters.at(key).get<std::string>();
}

std::vector<std::int64_t> ExperimentConfig::integers(const std::string& key) const {
  return parameters.at(key).get<std::vector<std::int64_t>>();
}

}  // namespace mvlab::cli
