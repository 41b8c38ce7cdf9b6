#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "skelplan/geometry.hpp"

namespace skelplan {

/// Regular grid of exact clearance values over the environment bounds.
/// Cell (ix, iy) is centered at origin + (ix + 0.5, iy + 0.5) * resolution.
/// Blocked cells (center inside an obstacle, on it, or outside the bounds)
/// hold value 0.
struct DistanceGrid {
  Aabb bounds;
  double resolution = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> free_mask;

  bool in_grid(int ix, int iy) const {
    return ix >= 0 && ix < nx && iy >= 0 && iy < ny;
  }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * nx + ix;
  }
  double value_at(int ix, int iy) const {
    return in_grid(ix, iy) ? values[index(ix, iy)] : 0.0;
  }
  bool free_at(int ix, int iy) const {
    return in_grid(ix, iy) && free_mask[index(ix, iy)] != 0;
  }
  Point2 cell_center(int ix, int iy) const {
    return {bounds.xmin + (ix + 0.5) * resolution,
            bounds.ymin + (iy + 0.5) * resolution};
  }
};

/// Samples the exact clearance at every cell center. Throws
/// std::invalid_argument for a bad resolution and std::runtime_error when the
/// grid would exceed the cell budget.
inline DistanceGrid distance_transform(const Environment& env,
                                       double resolution,
                                       std::size_t cell_budget = 4000000) {
  if (!(resolution > 0.0) || resolution > env.robot_radius)
    throw std::invalid_argument(
        "grid resolution must be in (0, robot_radius]");
  DistanceGrid g;
  g.bounds = env.bounds;
  g.resolution = resolution;
  g.nx = std::max(1, static_cast<int>(std::ceil(env.bounds.width() / resolution)));
  g.ny = std::max(1, static_cast<int>(std::ceil(env.bounds.height() / resolution)));
  const std::size_t cells =
      static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
  if (cells > cell_budget)
    throw std::runtime_error("distance grid exceeds the cell budget");
  g.values.assign(cells, 0.0);
  g.free_mask.assign(cells, 0);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const Point2 c = g.cell_center(ix, iy);
      if (!env.bounds.contains(c)) continue;
      const double d = clearance(env, c);
      if (d > 0.0) {
        g.values[g.index(ix, iy)] = d;
        g.free_mask[g.index(ix, iy)] = 1;
      }
    }
  }
  return g;
}

}  // namespace skelplan
