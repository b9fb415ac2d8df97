#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mvlab {

using Complex = std::complex<double>;

/// Analyser direction in the plane of zero azimuth: polar angle theta in
/// [0, pi] from the reference (vertical) axis.
class Direction {
 public:
  explicit Direction(double theta);

  static Direction vertical() { return Direction(0.0); }
  static Direction horizontal();

  double theta() const noexcept { return theta_; }
  bool operator==(const Direction&) const = default;

 private:
  double theta_;
};

enum class Spin { up, down };

const char* to_string(Spin s) noexcept;

// Component order: (up,up), (up,down), (down,up), (down,down); first entry is
// particle 1 along basis_1, second is particle 2 along basis_2.
using SpinAmplitudes = std::array<Complex, 4>;

constexpr std::size_t component_index(Spin s1, Spin s2) noexcept {
  return (s1 == Spin::up ? 0u : 2u) + (s2 == Spin::up ? 0u : 1u);
}
constexpr std::pair<Spin, Spin> component_spins(std::size_t index) noexcept {
  return {index < 2 ? Spin::up : Spin::down, index % 2 == 0 ? Spin::up : Spin::down};
}

struct TwoSpinState {
  Direction basis_1;
  Direction basis_2;
  SpinAmplitudes amplitudes;

  double norm_squared() const noexcept;
};

// (0, 1/sqrt2, -1/sqrt2, 0) in the common basis.
TwoSpinState singlet(Direction basis);

TwoSpinState product_state(Spin s1, Spin s2, Direction basis_1,
                           Direction basis_2);

/// Component map for particle 2 when its basis is turned through theta:
/// returns M with new = M * old, where old = (c_up, c_down) along the old
/// direction and theta is the polar angle of the old direction relative to
/// the new one. Follows
///   |old,up>   =  cos(theta/2)|new,up> + sin(theta/2)|new,down>
///   |old,down> = -sin(theta/2)|new,up> + cos(theta/2)|new,down>
std::array<std::array<double, 2>, 2> spinor_rotation(double theta);

// Re-expresses particle 2 in new_basis_2; theta = old - new polar angle.
TwoSpinState rotate_second_basis(const TwoSpinState& state,
                                 Direction new_basis_2);

// Same map with an arbitrary relative angle; the basis label is not tracked.
SpinAmplitudes rotate_second_components(const SpinAmplitudes& amplitudes,
                                        double theta);

// Squared moduli of the singlet re-expressed across relative angle theta.
std::array<double, 4> four_world_split(double theta);

enum class Reading { unset, up, down };

const char* to_string(Reading r) noexcept;

/// Record held by one apparatus. A reading can be written once; writing to
/// a set pointer is a protocol error.
class PointerLabel {
 public:
  explicit PointerLabel(int apparatus_id);

  int apparatus_id() const noexcept { return apparatus_id_; }
  Reading reading() const noexcept { return reading_; }
  bool is_set() const noexcept { return reading_ != Reading::unset; }

  PointerLabel recorded(Spin outcome) const;

  bool operator==(const PointerLabel&) const = default;

 private:
  int apparatus_id_;
  Reading reading_ = Reading::unset;
};

struct Branch {
  Complex amplitude;
  std::pair<Spin, Spin> spins;
  std::pair<PointerLabel, PointerLabel> pointers;

  double weight() const noexcept { return std::norm(amplitude); }
  bool operator==(const Branch&) const = default;
};

using BranchList = std::vector<Branch>;

/// Linear pointer-copying unitary on an arbitrary (unnormalised) amplitude
/// vector: each nonzero component becomes one branch whose readings equal
/// its spin labels. Branches come out in component order.
BranchList measure_components(const SpinAmplitudes& amplitudes,
                              const std::pair<PointerLabel, PointerLabel>& pointers);

/// The same map on a normalised state. Throws protocol if either pointer is
/// already set, domain if the state is not normalised to 1e-12.
BranchList apply_measurement(const TwoSpinState& state,
                             const std::pair<PointerLabel, PointerLabel>& pointers);

// Splits the amplitude vector into its single-component terms.
std::vector<SpinAmplitudes> expand_terms(const SpinAmplitudes& amplitudes);

/// Sum of branch lists: amplitudes of branches with identical labels are
/// added, zero results dropped, output in component order.
BranchList sum_branches(std::span<const BranchList> lists);

double total_weight(const BranchList& branches) noexcept;

// cos^2(theta/2).
double aligned_probability(double theta);

// -cos(theta) in closed form.
double correlation(double theta);

// sum of weight * (+1 equal / -1 opposite readings).
double correlation_from_branches(const BranchList& branches);

/// S = E(a-b) - E(a-b') + E(a'-b) + E(a'-b') with E evaluated on absolute
/// angle differences.
double chsh(double a, double a_prime, double b, double b_prime);

/// Largest |S| over the 16 deterministic +-1 assignments to the four
/// analyser settings.
double deterministic_chsh_max();

// [{amplitude_re, amplitude_im, weight, spin1, spin2, pointer1, pointer2}, ...]
std::string branches_to_json(const BranchList& branches);

}  // namespace mvlab
