#include "stencil.hpp"

#include <cmath>

namespace mvlab::detail {

std::vector<double> gradient(std::span<const double> f, const SpatialGrid& g) {
  const std::size_t n = g.size();
  const double inv2dx = 1.0 / (2.0 * g.dx());
  std::vector<double> d(n);
  if (g.periodic()) {
    for (std::size_t j = 0; j < n; ++j) d[j] = (f[next(j, n)] - f[prev(j, n)]) * inv2dx;
    return d;
  }
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) * inv2dx;
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2dx;
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2dx;
  return d;
}

bool locate(double x, const SpatialGrid& g, CellPosition& out) {
  const std::size_t n = g.size();
  double s = (x - g.x_min()) / g.dx();
  if (!std::isfinite(s)) return false;
  if (g.periodic()) {
    const double nd = static_cast<double>(n);
    s = std::fmod(s, nd);
    if (s < 0.0) s += nd;
    auto lo = static_cast<std::size_t>(s);
    if (lo >= n) lo = n - 1;
    out = {lo, next(lo, n), s - static_cast<double>(lo)};
    return true;
  }
  if (s < 0.0 || s > static_cast<double>(n - 1)) return false;
  auto lo = static_cast<std::size_t>(s);
  if (lo >= n - 1) lo = n - 2;
  out = {lo, lo + 1, s - static_cast<double>(lo)};
  return true;
}

}  // namespace mvlab::detail
