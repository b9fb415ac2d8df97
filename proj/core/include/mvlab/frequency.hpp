#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mvlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Outcomes of N successive measurements; true = aligned with the apparatus.
struct BranchSequence {
  std::vector<bool> outcomes;

  std::size_t size() const noexcept { return outcomes.size(); }
  std::size_t aligned_count() const noexcept;
};

inline constexpr int kMaxEnumeratedMeasurements = 20;

/// All 2^N outcome sequences with their weights p^r q^(N-r). Sequence k is
/// stored as the bit pattern of k: bit i (least significant first) is the
/// outcome of measurement i.
struct BranchTree {
  struct Entry {
    std::uint32_t bits;
    int aligned;
    double weight;
  };

  int N = 0;
  double p = 0.0;
  std::vector<Entry> entries;

  BranchSequence sequence(std::size_t index) const;
  // Sum of weight * g(r / N) over all branches, in index order.
  template <class F>
  double expectation(F&& g) const {
    double acc = 0.0;
    for (const auto& e : entries) acc += e.weight * g(static_cast<double>(e.aligned) / N);
    return acc;
  }
};

double sequence_weight(const BranchSequence& s, double p);

// 1 <= N <= 20, throws capacity beyond.
BranchTree enumerate_branch_tree(int N, double p);

// C(N, r) p^r q^(N-r); throws domain unless 0 <= r <= N.
double prob_r_given_N(int r, int N, double p);

// sum_r (r/N) prob(r | N).
double expected_frequency(int N, double p);

/// Raw moment <r^j> as a polynomial in p, obtained by applying (p d/dp)^j to
/// (p + q)^N with q held fixed and p + q = 1 set afterwards. Element a is the
/// coefficient of p^a.
std::vector<BigInt> raw_moment_polynomial(int j, int N);

// <(r/N - p)^m> as a polynomial in p with exact rational coefficients.
std::vector<Rational> central_moment_polynomial(int m, int N);

Rational central_moment_exact(int m, int N, const Rational& p);

// Exact engine, rounded once at the end.
double central_moment(int m, int N, double p);

struct FrequencyMoments {
  int N = 0;
  double p = 0.0;
  std::map<int, double> moments;
};

FrequencyMoments central_moments(int m_max, int N, double p);

struct MomentScalingRow {
  int m;
  int N;
  double moment;  // |<(f - p)^m>|
  double bound;   // C_m / N
  bool within;
};

/// For m = 2..m_max fits C_m = N0 |moment(m, N0)| at the smallest N and checks
/// |moment(m, N)| <= C_m / N at every N, exactly in rational arithmetic.
struct MomentScalingReport {
  double p = 0.0;
  std::map<int, double> constants;
  std::vector<MomentScalingRow> rows;
  bool all_within = true;
};

MomentScalingReport moment_scaling_report(int m_max, std::span<const int> N_values,
                                          double p);

struct ObserverSample {
  BranchSequence sequence;
  double frequency;
};

/// One observer's branch: N outcomes drawn from std::mt19937_64 seeded with
/// `seed`. Draw i uses u = (x >> 11) * 2^-53 of the i-th output and is aligned
/// when u < p, so the stream is bit-reproducible across platforms.
ObserverSample sample_observer_branch(int N, double p, std::uint64_t seed);

struct ConvergenceRow {
  int N;
  double frequency;
  double abs_error;
  double envelope;  // 3 sqrt(pq/N)
  double variance;  // pq/N
};

/// Frequencies along a single observer's branch: the first N outcomes of one
/// sample_observer_branch stream of length max(N_values).
std::vector<ConvergenceRow> convergence_demo(std::span<const int> N_values,
                                             double p, std::uint64_t seed);

// CSV: sequence_bits,r,weight   (bits written measurement 0 first)
void write_branch_tree_csv(std::ostream& out, const BranchTree& tree);
// CSV: N,f,abs_err,envelope,variance
void write_convergence_csv(std::ostream& out,
                           std::span<const ConvergenceRow> rows);

}  // namespace mvlab
