#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <queue>
#include <set>
#include <vector>

#include "skelplan/distance_grid.hpp"
#include "skelplan/geometry.hpp"

namespace skelplan {

struct SkeletonVertex {
  int id = 0;
  Point2 position;
  int degree = 0;
};

/// One corridor of the skeleton: a polyline of workspace points between two
/// vertices, with the exact clearance stored per point.
struct SkeletonEdge {
  int id = 0;
  int v0 = 0;
  int v1 = 0;
  std::vector<Point2> polyline;    // front is v0's position, back is v1's
  std::vector<double> clearances;  // one value per polyline point
  double length = 0.0;
};

struct SkeletonGraph {
  std::vector<SkeletonVertex> vertices;
  std::vector<SkeletonEdge> edges;

  const SkeletonVertex* vertex_by_id(int id) const {
    for (const auto& v : vertices)
      if (v.id == id) return &v;
    return nullptr;
  }
  const SkeletonEdge* edge_by_id(int id) const {
    for (const auto& e : edges)
      if (e.id == id) return &e;
    return nullptr;
  }

  /// Lowest-id vertex nearest to p; -1 when the graph is empty.
  int nearest_vertex(Point2 p) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) {
      const double d = distance(v.position, p);
      if (d < best_d || (d == best_d && best >= 0 && v.id < best)) {
        best = v.id;
        best_d = d;
      }
    }
    return best;
  }

  void recompute_degrees() {
    for (auto& v : vertices) v.degree = 0;
    for (const auto& e : edges) {
      for (auto& v : vertices) {
        if (v.id == e.v0) ++v.degree;
        if (v.id == e.v1) ++v.degree;
      }
    }
  }
};

namespace detail {

// Neighbor offsets, E counter-clockwise. Bit k of a neighborhood mask is set
// when the neighbor at kNbr[k] is foreground.
inline constexpr std::array<std::array<int, 2>, 8> kNbr = {
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

inline constexpr int kOpposite[8] = {4, 5, 6, 7, 0, 1, 2, 3};

// A pixel is simple (deletable without changing local topology, foreground
// 8-connected / background 4-connected) iff its punctured neighborhood has
// exactly one foreground component and exactly one background component
// touching an edge-adjacent cell. Computed by brute force per mask.
inline bool compute_simple(unsigned mask) {
  auto bit = [&](int k) { return (mask >> k) & 1u; };
  auto adjacent8 = [&](int a, int b) {
    const int dx = kNbr[a][0] - kNbr[b][0];
    const int dy = kNbr[a][1] - kNbr[b][1];
    return std::abs(dx) <= 1 && std::abs(dy) <= 1;
  };
  auto adjacent4 = [&](int a, int b) {
    const int dx = kNbr[a][0] - kNbr[b][0];
    const int dy = kNbr[a][1] - kNbr[b][1];
    return std::abs(dx) + std::abs(dy) == 1;
  };

  int fg_comps = 0;
  std::array<int, 8> comp{};
  comp.fill(-1);
  for (int i = 0; i < 8; ++i) {
    if (!bit(i) || comp[i] >= 0) continue;
    ++fg_comps;
    std::vector<int> stack{i};
    comp[i] = i;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int j = 0; j < 8; ++j) {
        if (bit(j) && comp[j] < 0 && adjacent8(c, j)) {
          comp[j] = i;
          stack.push_back(j);
        }
      }
    }
  }
  if (fg_comps != 1) return false;

  int bg_comps = 0;
  comp.fill(-1);
  for (int i = 0; i < 8; ++i) {
    if (bit(i) || comp[i] >= 0) continue;
    bool touches_edge_cell = (i % 2 == 0);  // even indices are 4-neighbors
    std::vector<int> stack{i};
    comp[i] = i;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int j = 0; j < 8; ++j) {
        if (!bit(j) && comp[j] < 0 && adjacent4(c, j)) {
          comp[j] = i;
          touches_edge_cell |= (j % 2 == 0);
          stack.push_back(j);
        }
      }
    }
    if (touches_edge_cell) ++bg_comps;
  }
  return bg_comps == 1;
}

inline const std::array<bool, 256>& simple_lut() {
  static const std::array<bool, 256> lut = [] {
    std::array<bool, 256> t{};
    for (unsigned m = 0; m < 256; ++m) t[m] = compute_simple(m);
    return t;
  }();
  return lut;
}

}  // namespace detail

/// Extracts a unit-width, 8-connected skeleton from the distance grid and
/// traces it into a vertex/edge graph. Ridge cells (distance maxima across
/// one of the four axis/diagonal direction pairs) anchor the skeleton; the
/// remaining free cells are eroded in increasing distance order while
/// preserving topology, then plateaus are shaved to unit width.
inline SkeletonGraph extract_skeleton(const DistanceGrid& grid,
                                      const Environment& env) {
  using detail::kNbr;
  const int nx = grid.nx, ny = grid.ny;
  const std::size_t cells = grid.values.size();
  std::vector<std::uint8_t> fg(grid.free_mask);

  auto fg_at = [&](int ix, int iy) {
    return grid.in_grid(ix, iy) && fg[grid.index(ix, iy)] != 0;
  };
  auto mask_at = [&](int ix, int iy) {
    unsigned m = 0;
    for (int k = 0; k < 8; ++k)
      if (fg_at(ix + kNbr[k][0], iy + kNbr[k][1])) m |= 1u << k;
    return m;
  };

  // Ridge anchors: distance is maximal across some direction pair and the
  // maximum is strict on at least one side, so flat strips beside walls do
  // not anchor but true ridges (including plateau rims) do.
  std::vector<std::uint8_t> anchor(cells, 0);
  constexpr std::array<std::array<int, 2>, 4> pairs = {
      {{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (!fg_at(ix, iy)) continue;
      const double v = grid.values[grid.index(ix, iy)];
      for (const auto& d : pairs) {
        const double a = grid.value_at(ix + d[0], iy + d[1]);
        const double b = grid.value_at(ix - d[0], iy - d[1]);
        if (v >= a && v >= b && (v > a || v > b)) {
          anchor[grid.index(ix, iy)] = 1;
          break;
        }
      }
    }
  }

  // Phase 1: distance-ordered homotopic erosion down to the anchored ridge.
  // Lowest clearance first, row-major index as the tie-break, so the result
  // is deterministic.
  {
    using QItem = std::pair<double, std::size_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> queue;
    const auto& simple = detail::simple_lut();
    auto enqueue = [&](int ix, int iy) {
      if (fg_at(ix, iy))
        queue.emplace(grid.values[grid.index(ix, iy)], grid.index(ix, iy));
    };
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) enqueue(ix, iy);
    while (!queue.empty()) {
      const std::size_t i = queue.top().second;
      queue.pop();
      if (!fg[i] || anchor[i]) continue;
      const int ix = static_cast<int>(i % nx);
      const int iy = static_cast<int>(i / nx);
      if (!simple[mask_at(ix, iy)]) continue;
      fg[i] = 0;
      for (const auto& d : kNbr) enqueue(ix + d[0], iy + d[1]);
    }
  }

  // Phase 2: shave plateaus and two-wide ribbons to unit width. Cyclic
  // directional sub-passes (N, S, E, W); each pass snapshots the cells open
  // to that side, then deletes the ones still simple and not chain endpoints
  // in index order. Eating from one side at a time keeps ribbons from
  // unzipping end-first, so arms shorten by at most one cell per cycle.
  {
    const auto& simple = detail::simple_lut();
    constexpr int dirs[4] = {2, 6, 0, 4};  // N, S, E, W
    for (bool changed = true; changed;) {
      changed = false;
      for (const int d : dirs) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < cells; ++i) {
          if (!fg[i]) continue;
          const int ix = static_cast<int>(i % nx);
          const int iy = static_cast<int>(i / nx);
          if (!fg_at(ix + kNbr[d][0], iy + kNbr[d][1])) open.push_back(i);
        }
        for (const std::size_t i : open) {
          const int ix = static_cast<int>(i % nx);
          const int iy = static_cast<int>(i / nx);
          const unsigned m = mask_at(ix, iy);
          if (std::popcount(m) < 2) continue;  // keep chain endpoints
          if (!simple[m]) continue;
          fg[i] = 0;
          changed = true;
        }
      }
    }
  }

  // Reduced adjacency for tracing: 4-neighbors always, a diagonal only when
  // neither shared orthogonal cell is foreground (no double counting across
  // corners).
  auto adjacent = [&](int ix, int iy, int k) -> bool {
    const int jx = ix + kNbr[k][0], jy = iy + kNbr[k][1];
    if (!fg_at(jx, jy)) return false;
    if (k % 2 == 0) return true;
    return !fg_at(ix + kNbr[k][0], iy) && !fg_at(ix, iy + kNbr[k][1]);
  };
  auto degree_of = [&](int ix, int iy) {
    int d = 0;
    for (int k = 0; k < 8; ++k)
      if (adjacent(ix, iy, k)) ++d;
    return d;
  };

  std::vector<int> vertex_id(cells, -1);
  std::vector<std::size_t> vertex_cell;
  SkeletonGraph sk;
  auto add_vertex = [&](std::size_t i) {
    const int ix = static_cast<int>(i % nx);
    const int iy = static_cast<int>(i / nx);
    SkeletonVertex v;
    v.id = static_cast<int>(sk.vertices.size());
    v.position = grid.cell_center(ix, iy);
    vertex_id[i] = v.id;
    vertex_cell.push_back(i);
    sk.vertices.push_back(v);
  };
  for (std::size_t i = 0; i < cells; ++i) {
    if (!fg[i]) continue;
    const int ix = static_cast<int>(i % nx);
    const int iy = static_cast<int>(i / nx);
    if (degree_of(ix, iy) != 2) add_vertex(i);
  }

  // Components made only of degree-2 cells are pure cycles; break each at
  // its lowest-index cell.
  {
    std::vector<std::uint8_t> seen(cells, 0);
    for (std::size_t i = 0; i < cells; ++i) {
      if (!fg[i] || seen[i] || vertex_id[i] >= 0) continue;
      std::vector<std::size_t> comp{i};
      seen[i] = 1;
      bool has_vertex = false;
      for (std::size_t s = 0; s < comp.size(); ++s) {
        const int cx = static_cast<int>(comp[s] % nx);
        const int cy = static_cast<int>(comp[s] / nx);
        for (int k = 0; k < 8; ++k) {
          if (!adjacent(cx, cy, k)) continue;
          const std::size_t j = grid.index(cx + kNbr[k][0], cy + kNbr[k][1]);
          if (vertex_id[j] >= 0) has_vertex = true;
          if (!seen[j] && vertex_id[j] < 0) {
            seen[j] = 1;
            comp.push_back(j);
          }
        }
      }
      if (!has_vertex) add_vertex(*std::min_element(comp.begin(), comp.end()));
    }
  }

  // Walk chains between vertex cells. Each directed first step is consumed
  // once, so every chain becomes exactly one edge.
  std::vector<std::uint8_t> used(cells, 0);
  for (const auto& v : sk.vertices) {
    const std::size_t vi = vertex_cell[static_cast<std::size_t>(v.id)];
    const int ix = static_cast<int>(vi % nx);
    const int iy = static_cast<int>(vi / nx);
    for (int k = 0; k < 8; ++k) {
      if (!adjacent(ix, iy, k)) continue;
      if (used[vi] & (1u << k)) continue;
      std::vector<std::size_t> chain{vi};
      std::size_t prev = vi;
      std::size_t cur = grid.index(ix + kNbr[k][0], iy + kNbr[k][1]);
      used[vi] |= 1u << k;
      used[cur] |= 1u << detail::kOpposite[k];
      chain.push_back(cur);
      while (vertex_id[cur] < 0) {
        const int cx = static_cast<int>(cur % nx);
        const int cy = static_cast<int>(cur / nx);
        std::size_t next = cur;
        int next_k = -1;
        for (int j = 0; j < 8; ++j) {
          if (!adjacent(cx, cy, j)) continue;
          const std::size_t cand = grid.index(cx + kNbr[j][0], cy + kNbr[j][1]);
          if (cand == prev) continue;
          next = cand;
          next_k = j;
          break;
        }
        if (next_k < 0) break;  // dead end mid-chain; defensive
        used[cur] |= 1u << next_k;
        used[next] |= 1u << detail::kOpposite[next_k];
        prev = cur;
        cur = next;
        chain.push_back(cur);
      }
      if (vertex_id[cur] < 0) continue;

      SkeletonEdge e;
      e.id = static_cast<int>(sk.edges.size());
      e.v0 = vertex_id[vi];
      e.v1 = vertex_id[cur];
      for (const std::size_t ci : chain) {
        const Point2 p = grid.cell_center(static_cast<int>(ci % nx),
                                          static_cast<int>(ci / nx));
        e.polyline.push_back(p);
        e.clearances.push_back(clearance(env, p));
      }
      for (std::size_t s = 1; s < e.polyline.size(); ++s)
        e.length += distance(e.polyline[s - 1], e.polyline[s]);
      sk.edges.push_back(e);
    }
  }

  sk.recompute_degrees();
  return sk;
}

/// Removes open-ended edges shorter than min_length whose free endpoint is
/// not the vertex nearest the query start or goal, repeating until stable.
inline SkeletonGraph prune_spurs(SkeletonGraph sk, double min_length,
                                 const Environment& env) {
  for (;;) {
    if (sk.vertices.empty()) return sk;
    const int keep_a = sk.nearest_vertex(env.query.start);
    const int keep_b = sk.nearest_vertex(env.query.goal);
    auto exempt = [&](int id) { return id == keep_a || id == keep_b; };

    std::set<int> dead_edges;
    for (const auto& e : sk.edges) {
      if (e.length >= min_length) continue;
      const bool tip0 = sk.vertex_by_id(e.v0)->degree == 1;
      const bool tip1 = sk.vertex_by_id(e.v1)->degree == 1;
      const bool keep = (tip0 && exempt(e.v0)) || (tip1 && exempt(e.v1));
      if ((tip0 || tip1) && !keep) dead_edges.insert(e.id);
    }
    if (dead_edges.empty()) return sk;

    std::erase_if(sk.edges,
                  [&](const SkeletonEdge& e) { return dead_edges.count(e.id); });
    sk.recompute_degrees();
    std::erase_if(sk.vertices, [&](const SkeletonVertex& v) {
      return v.degree == 0 && !exempt(v.id);
    });
  }
}

}  // namespace skelplan
