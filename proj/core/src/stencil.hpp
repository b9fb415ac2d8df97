#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvlab/fields.hpp"

namespace mvlab::detail {

// Centred second-order first derivative. Periodic grids wrap around;
// dirichlet grids use one-sided second-order stencils at the two ends.
std::vector<double> gradient(std::span<const double> f, const SpatialGrid& g);

// Neighbour index with periodic wrap; callers on dirichlet grids only use
// it for interior points.
inline std::size_t next(std::size_t j, std::size_t n) { return j + 1 == n ? 0 : j + 1; }
inline std::size_t prev(std::size_t j, std::size_t n) { return j == 0 ? n - 1 : j - 1; }

// Interior (centred stencil applicable) test.
inline bool interior(std::size_t j, const SpatialGrid& g) {
  return g.periodic() || (j > 0 && j + 1 < g.size());
}

// Linear interpolation of nodal values at position x. Periodic grids wrap x;
// returns false when x lies outside [x_0, x_{n-1}] on a dirichlet grid.
// `lo`/`frac` give the left node and offset in [0, 1).
struct CellPosition {
  std::size_t lo;
  std::size_t hi;
  double frac;
};
bool locate(double x, const SpatialGrid& g, CellPosition& out);

inline double interpolate(std::span<const double> f, const CellPosition& c) {
  return f[c.lo] + c.frac * (f[c.hi] - f[c.lo]);
}

}  // namespace mvlab::detail
