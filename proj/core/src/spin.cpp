#include "mvlab/spin.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "mvlab/errors.hpp"

namespace mvlab {

Direction::Direction(double theta) : theta_(theta) {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= std::numbers::pi,
          ErrorKind::domain, "direction polar angle must lie in [0, pi]");
}

Direction Direction::horizontal() { return Direction(std::numbers::pi / 2.0); }

const char* to_string(Spin s) noexcept { return s == Spin::up ? "up" : "down"; }

const char* to_string(Reading r) noexcept {
  switch (r) {
    case Reading::unset: return "unset";
    case Reading::up: return "up";
    case Reading::down: return "down";
  }
  return "unset";
}

double TwoSpinState::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

TwoSpinState singlet(Direction basis) {
  const double h = 1.0 / std::numbers::sqrt2;
  return {basis, basis, {Complex(0.0), Complex(h), Complex(-h), Complex(0.0)}};
}

TwoSpinState product_state(Spin s1, Spin s2, Direction basis_1,
                           Direction basis_2) {
  SpinAmplitudes a{};
  a[component_index(s1, s2)] = 1.0;
  return {basis_1, basis_2, a};
}

std::array<std::array<double, 2>, 2> spinor_rotation(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  // Columns are the images of |old,up> and |old,down>.
  return {{{c, -s}, {s, c}}};
}

SpinAmplitudes rotate_second_components(const SpinAmplitudes& amplitudes,
                                        double theta) {
  const auto m = spinor_rotation(theta);
  SpinAmplitudes out{};
  for (std::size_t first = 0; first < 2; ++first) {
    const Complex up = amplitudes[2 * first], down = amplitudes[2 * first + 1];
    out[2 * first] = m[0][0] * up + m[0][1] * down;
    out[2 * first + 1] = m[1][0] * up + m[1][1] * down;
  }
  return out;
}

TwoSpinState rotate_second_basis(const TwoSpinState& state,
                                 Direction new_basis_2) {
  const double theta = state.basis_2.theta() - new_basis_2.theta();
  return {state.basis_1, new_basis_2,
          rotate_second_components(state.amplitudes, theta)};
}

std::array<double, 4> four_world_split(double theta) {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= std::numbers::pi,
          ErrorKind::domain, "theta must lie in [0, pi]");
  // Special angles are returned exactly.
  if (theta == 0.0) return {0.0, 0.5, 0.5, 0.0};
  if (theta == std::numbers::pi / 2.0) return {0.25, 0.25, 0.25, 0.25};
  if (theta == std::numbers::pi) return {0.5, 0.0, 0.0, 0.5};
  const double s2 = std::sin(theta / 2.0) * std::sin(theta / 2.0);
  const double c2 = std::cos(theta / 2.0) * std::cos(theta / 2.0);
  return {s2 / 2.0, c2 / 2.0, c2 / 2.0, s2 / 2.0};
}

PointerLabel::PointerLabel(int apparatus_id) : apparatus_id_(apparatus_id) {
  require(apparatus_id == 1 || apparatus_id == 2, ErrorKind::domain,
          "apparatus id must be 1 or 2");
}

PointerLabel PointerLabel::recorded(Spin outcome) const {
  require(!is_set(), ErrorKind::protocol,
          "pointer already holds a reading; re-measurement is not modelled");
  PointerLabel out = *this;
  out.reading_ = outcome == Spin::up ? Reading::up : Reading::down;
  return out;
}

BranchList measure_components(const SpinAmplitudes& amplitudes,
                              const std::pair<PointerLabel, PointerLabel>& pointers) {
  require(!pointers.first.is_set() && !pointers.second.is_set(),
          ErrorKind::protocol, "pointers must be unset before measurement");
  BranchList out;
  for (std::size_t k = 0; k < 4; ++k) {
    if (amplitudes[k] == Complex(0.0)) continue;
    const auto spins = component_spins(k);
    out.push_back({amplitudes[k], spins,
                   {pointers.first.recorded(spins.first),
                    pointers.second.recorded(spins.second)}});
  }
  return out;
}

BranchList apply_measurement(const TwoSpinState& state,
                             const std::pair<PointerLabel, PointerLabel>& pointers) {
  require(std::abs(state.norm_squared() - 1.0) <= 1e-12, ErrorKind::domain,
          "state must be normalised");
  return measure_components(state.amplitudes, pointers);
}

std::vector<SpinAmplitudes> expand_terms(const SpinAmplitudes& amplitudes) {
  std::vector<SpinAmplitudes> terms;
  for (std::size_t k = 0; k < 4; ++k) {
    SpinAmplitudes t{};
    t[k] = amplitudes[k];
    terms.push_back(t);
  }
  return terms;
}

BranchList sum_branches(std::span<const BranchList> lists) {
  // Labels determine the component slot; pointer readings are copies of them.
  std::array<Complex, 4> acc{};
  std::array<const Branch*, 4> proto{};
  for (const auto& list : lists) {
    for (const auto& b : list) {
      const std::size_t k = component_index(b.spins.first, b.spins.second);
      acc[k] += b.amplitude;
      proto[k] = &b;
    }
  }
  BranchList out;
  for (std::size_t k = 0; k < 4; ++k) {
    if (proto[k] == nullptr || acc[k] == Complex(0.0)) continue;
    Branch b = *proto[k];
    b.amplitude = acc[k];
    out.push_back(b);
  }
  return out;
}

double total_weight(const BranchList& branches) noexcept {
  double s = 0.0;
  for (const auto& b : branches) s += b.weight();
  return s;
}

double aligned_probability(double theta) {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= std::numbers::pi,
          ErrorKind::domain, "theta must lie in [0, pi]");
  const double c = std::cos(theta / 2.0);
  return c * c;
}

double correlation(double theta) {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= std::numbers::pi,
          ErrorKind::domain, "theta must lie in [0, pi]");
  return -std::cos(theta);
}

double correlation_from_branches(const BranchList& branches) {
  double e = 0.0;
  for (const auto& b : branches) {
    e += (b.spins.first == b.spins.second ? 1.0 : -1.0) * b.weight();
  }
  return e;
}

namespace {

// Folds an analyser angle difference into [0, pi]; E depends on cos only.
double fold(double d) {
  double t = std::fmod(std::abs(d), 2.0 * std::numbers::pi);
  if (t > std::numbers::pi) t = 2.0 * std::numbers::pi - t;
  return t;
}

}  // namespace

double chsh(double a, double a_prime, double b, double b_prime) {
  return correlation(fold(a - b)) - correlation(fold(a - b_prime)) +
         correlation(fold(a_prime - b)) + correlation(fold(a_prime - b_prime));
}

double deterministic_chsh_max() {
  double best = 0.0;
  for (unsigned table = 0; table < 16; ++table) {
    const double A = (table & 1u) ? 1.0 : -1.0;
    const double A2 = (table & 2u) ? 1.0 : -1.0;
    const double B = (table & 4u) ? 1.0 : -1.0;
    const double B2 = (table & 8u) ? 1.0 : -1.0;
    const double s = A * B - A * B2 + A2 * B + A2 * B2;
    best = std::max(best, std::abs(s));
  }
  return best;
}

std::string branches_to_json(const BranchList& branches) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& b : branches) {
    arr.push_back({{"amplitude_re", b.amplitude.real()},
                   {"amplitude_im", b.amplitude.imag()},
                   {"weight", b.weight()},
                   {"spin1", to_string(b.spins.first)},
                   {"spin2", to_string(b.spins.second)},
                   {"pointer1", to_string(b.pointers.first.reading())},
                   {"pointer2", to_string(b.pointers.second.reading())}});
  }
  return arr.dump(2);
}

}  // namespace mvlab
