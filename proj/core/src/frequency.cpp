#include "mvlab/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <bit>
#include <random>

#include <boost/math/distributions/binomial.hpp>

#include "mvlab/errors.hpp"
#include "numfmt.hpp"

namespace mvlab {
namespace {

void require_probability(double p) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, ErrorKind::domain,
          "p must lie in [0, 1]");
}

double ipow(double base, std::size_t e) {
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::size_t BranchSequence::aligned_count() const noexcept {
  return static_cast<std::size_t>(std::count(outcomes.begin(), outcomes.end(), true));
}

BranchSequence BranchTree::sequence(std::size_t index) const {
  BranchSequence s;
  s.outcomes.resize(static_cast<std::size_t>(N));
  const auto bits = entries.at(index).bits;
  for (int i = 0; i < N; ++i) s.outcomes[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
  return s;
}

double sequence_weight(const BranchSequence& s, double p) {
  require_probability(p);
  require(s.size() >= 1, ErrorKind::domain, "sequence must be non-empty");
  const std::size_t r = s.aligned_count();
  return ipow(p, r) * ipow(1.0 - p, s.size() - r);
}

BranchTree enumerate_branch_tree(int N, double p) {
  require_probability(p);
  require(N >= 1, ErrorKind::domain, "N must be at least 1");
  require(N <= kMaxEnumeratedMeasurements, ErrorKind::capacity,
          "enumeration is capped at N = 20; use prob_r_given_N / central_moment");
  BranchTree tree;
  tree.N = N;
  tree.p = p;
  const std::uint32_t count = 1u << N;
  tree.entries.reserve(count);
  const double q = 1.0 - p;
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    const int r = std::popcount(bits);
    tree.entries.push_back({bits, r,
                            ipow(p, static_cast<std::size_t>(r)) *
                                ipow(q, static_cast<std::size_t>(N - r))});
  }
  return tree;
}

double prob_r_given_N(int r, int N, double p) {
  require_probability(p);
  require(N >= 0 && r >= 0 && r <= N, ErrorKind::domain,
          "r must lie in [0, N]");
  return boost::math::pdf(boost::math::binomial_distribution<double>(N, p), r);
}

double expected_frequency(int N, double p) {
  require(N >= 1, ErrorKind::domain, "N must be at least 1");
  double acc = 0.0;
  for (int r = 1; r <= N; ++r) acc += static_cast<double>(r) * prob_r_given_N(r, N, p);
  return acc / static_cast<double>(N);
}

std::vector<BigInt> raw_moment_polynomial(int j, int N) {
  require(j >= 0 && N >= 0, ErrorKind::domain, "j and N must be non-negative");
  // coeff[a] multiplies p^a (p + q)^(N - a); the exponent of (p + q) is tied
  // to a, so one index tracks each term through the differentiation.
  std::vector<BigInt> coeff(1, BigInt(1));
  for (int step = 0; step < j; ++step) {
    std::vector<BigInt> next(std::min<std::size_t>(coeff.size() + 1, static_cast<std::size_t>(N) + 1));
    for (std::size_t a = 0; a < coeff.size(); ++a) {
      if (coeff[a] == 0) continue;
      // p d/dp [p^a (p+q)^b] = a p^a (p+q)^b + b p^(a+1) (p+q)^(b-1)
      next[a] += coeff[a] * static_cast<long>(a);
      const long b = N - static_cast<long>(a);
      if (b > 0) next[a + 1] += coeff[a] * b;
    }
    coeff = std::move(next);
  }
  return coeff;  // (p + q) -> 1
}

std::vector<Rational> central_moment_polynomial(int m, int N) {
  require(m >= 0, ErrorKind::domain, "moment order must be non-negative");
  require(N >= 1, ErrorKind::domain, "N must be at least 1");
  std::vector<Rational> poly(static_cast<std::size_t>(m) + 1, Rational(0));
  BigInt binom = 1;  // C(m, j)
  BigInt n_pow = 1;  // N^j
  for (int j = 0; j <= m; ++j) {
    const auto raw = raw_moment_polynomial(j, N);
    const int sign = ((m - j) % 2 == 0) ? 1 : -1;
    for (std::size_t a = 0; a < raw.size(); ++a) {
      if (raw[a] == 0) continue;
      // C(m,j) (-p)^(m-j) <r^j> / N^j contributes to p^(a + m - j)
      poly[a + static_cast<std::size_t>(m - j)] +=
          Rational(BigInt(sign * binom * raw[a]), n_pow);
    }
    binom = binom * (m - j) / (j + 1);
    n_pow *= N;
  }
  while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
  return poly;
}

Rational central_moment_exact(int m, int N, const Rational& p) {
  require(p >= 0 && p <= 1, ErrorKind::domain, "p must lie in [0, 1]");
  const auto poly = central_moment_polynomial(m, N);
  Rational acc = 0;
  for (std::size_t a = poly.size(); a-- > 0;) acc = acc * p + poly[a];
  return acc;
}

double central_moment(int m, int N, double p) {
  require_probability(p);
  return static_cast<double>(central_moment_exact(m, N, Rational(p)));
}

FrequencyMoments central_moments(int m_max, int N, double p) {
  require_probability(p);
  require(m_max >= 0, ErrorKind::domain, "m_max must be non-negative");
  FrequencyMoments out{N, p, {}};
  const Rational pe(p);
  for (int m = 0; m <= m_max; ++m) {
    out.moments[m] = static_cast<double>(central_moment_exact(m, N, pe));
  }
  return out;
}

MomentScalingReport moment_scaling_report(int m_max, std::span<const int> N_values,
                                          double p) {
  require_probability(p);
  require(m_max >= 2, ErrorKind::domain, "m_max must be at least 2");
  require(!N_values.empty(), ErrorKind::domain, "N_values must be non-empty");
  for (std::size_t i = 0; i < N_values.size(); ++i) {
    require(N_values[i] >= 1 && (i == 0 || N_values[i] > N_values[i - 1]),
            ErrorKind::domain, "N_values must be positive and increasing");
  }
  MomentScalingReport rep;
  rep.p = p;
  const Rational pe(p);
  for (int m = 2; m <= m_max; ++m) {
    const int n0 = N_values.front();
    const Rational c = abs(central_moment_exact(m, n0, pe)) * n0;
    rep.constants[m] = static_cast<double>(c);
    for (int N : N_values) {
      const Rational mom = abs(central_moment_exact(m, N, pe));
      const bool ok = mom * N <= c;
      rep.rows.push_back({m, N, static_cast<double>(mom),
                          static_cast<double>(Rational(c / N)), ok});
      rep.all_within = rep.all_within && ok;
    }
  }
  return rep;
}

ObserverSample sample_observer_branch(int N, double p, std::uint64_t seed) {
  require_probability(p);
  require(N >= 1, ErrorKind::domain, "N must be at least 1");
  std::mt19937_64 gen(seed);
  ObserverSample out;
  out.sequence.outcomes.resize(static_cast<std::size_t>(N));
  std::size_t aligned = 0;
  for (auto&& o : out.sequence.outcomes) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    o = u < p;
    aligned += o ? 1 : 0;
  }
  out.frequency = static_cast<double>(aligned) / static_cast<double>(N);
  return out;
}

std::vector<ConvergenceRow> convergence_demo(std::span<const int> N_values,
                                             double p, std::uint64_t seed) {
  require_probability(p);
  require(!N_values.empty(), ErrorKind::domain, "N_values must be non-empty");
  for (std::size_t i = 0; i < N_values.size(); ++i) {
    require(N_values[i] >= 1 && (i == 0 || N_values[i] > N_values[i - 1]),
            ErrorKind::domain, "N_values must be positive and increasing");
  }
  const auto branch = sample_observer_branch(N_values.back(), p, seed);
  const auto& o = branch.sequence.outcomes;
  const double q = 1.0 - p;
  std::vector<ConvergenceRow> rows;
  std::size_t aligned = 0, seen = 0;
  for (int N : N_values) {
    for (; seen < static_cast<std::size_t>(N); ++seen) aligned += o[seen] ? 1 : 0;
    const double f = static_cast<double>(aligned) / static_cast<double>(N);
    const double var = p * q / static_cast<double>(N);
    rows.push_back({N, f, std::abs(f - p), 3.0 * std::sqrt(var), var});
  }
  return rows;
}

void write_branch_tree_csv(std::ostream& out, const BranchTree& tree) {
  out << "sequence_bits,r,weight\n";
  std::string bits(static_cast<std::size_t>(tree.N), '0');
  for (const auto& e : tree.entries) {
    for (int i = 0; i < tree.N; ++i) bits[static_cast<std::size_t>(i)] = ((e.bits >> i) & 1u) ? '1' : '0';
    out << bits << ',' << e.aligned << ',' << detail::num(e.weight) << '\n';
  }
}

void write_convergence_csv(std::ostream& out,
                           std::span<const ConvergenceRow> rows) {
  using detail::num;
  out << "N,f,abs_err,envelope,variance\n";
  for (const auto& r : rows) {
    out << r.N << ',' << num(r.frequency) << ',' << num(r.abs_error) << ','
        << num(r.envelope) << ',' << num(r.variance) << '\n';
  }
}

}  // namespace mvlab
