#pragma once

#include <cstddef>
#include <span>

namespace tonks {

/// Composite trapezoid rule on a uniform grid.
inline double trapezoid(std::span<const double> f, double spacing) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * spacing;
}

/// Trapezoid rule applied to the pointwise product f * g.
inline double trapezoid_product(std::span<const double> f, std::span<const double> g,
                                double spacing) {
  if (f.size() < 2) return 0.0;
  const std::size_t last = f.size() - 1;
  double sum = 0.5 * (f[0] * g[0] + f[last] * g[last]);
  for (std::size_t i = 1; i < last; ++i) sum += f[i] * g[i];
  return sum * spacing;
}

}  // namespace tonks
