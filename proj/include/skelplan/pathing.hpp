#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "skelplan/annotate.hpp"
#include "skelplan/geometry.hpp"
#include "skelplan/planner.hpp"

namespace skelplan {

/// Workspace path from start to goal. length is always the sum of segment
/// lengths; clearance and field extrema are measured by score_path.
struct Path {
  std::vector<Point2> waypoints;
  double length = 0.0;
};

inline double polyline_length(const std::vector<Point2>& pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    len += distance(pts[i - 1], pts[i]);
  return len;
}

/// Shortest path over roadmap edges between the nodes at the query endpoints
/// (Dijkstra; ties broken toward the lower node id). Throws
/// std::runtime_error when either endpoint has no node or the goal is
/// unreachable.
inline Path extract_path(const Roadmap& rm, const Query& query) {
  auto node_at = [&](Point2 p) {
    int found = -1;
    for (const auto& n : rm.nodes)
      if (distance(n.position, p) <= 1e-9 && (found == -1)) found = n.id;
    return found;
  };
  const int s = node_at(query.start);
  const int g = node_at(query.goal);
  if (s < 0 || g < 0)
    throw std::runtime_error("roadmap has no node at a query endpoint");

  const std::size_t n = rm.nodes.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> prev(n, -1);
  std::vector<char> settled(n, 0);
  using Entry = std::pair<double, int>;  // (distance, node id)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist[static_cast<std::size_t>(s)] = 0.0;
  pq.push({0.0, s});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (settled[static_cast<std::size_t>(u)]) continue;
    settled[static_cast<std::size_t>(u)] = 1;
    if (u == g) break;
    for (const int v : rm.neighbors(u)) {
      const double nd =
          d + distance(rm.nodes[static_cast<std::size_t>(u)].position,
                       rm.nodes[static_cast<std::size_t>(v)].position);
      auto& dv = dist[static_cast<std::size_t>(v)];
      if (nd < dv || (nd == dv && u < prev[static_cast<std::size_t>(v)])) {
        dv = nd;
        prev[static_cast<std::size_t>(v)] = u;
        pq.push({nd, v});
      }
    }
  }
  if (!settled[static_cast<std::size_t>(g)])
    throw std::runtime_error("goal is unreachable in the roadmap");

  Path p;
  for (int v = g; v != -1; v = prev[static_cast<std::size_t>(v)])
    p.waypoints.push_back(rm.nodes[static_cast<std::size_t>(v)].position);
  std::reverse(p.waypoints.begin(), p.waypoints.end());
  p.length = polyline_length(p.waypoints);
  return p;
}

/// Randomized shortcutting: each iteration picks two waypoints and splices
/// the straight segment between them when it is collision free. Length never
/// increases; the result is revalidated segment by segment before returning.
inline Path shortcut_smooth(Path p, const Environment& env, int iterations,
                            std::uint64_t rng_seed) {
  if (iterations < 0)
    throw std::invalid_argument("smoothing iterations must be >= 0");
  std::mt19937_64 rng(rng_seed);
  auto u01 = [&]() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };
  for (int it = 0; it < iterations; ++it) {
    const int n = static_cast<int>(p.waypoints.size());
    if (n < 3) break;
    int i = std::min(n - 1, static_cast<int>(u01() * n));
    int j = std::min(n - 1, static_cast<int>(u01() * n));
    if (i > j) std::swap(i, j);
    if (j - i < 2) continue;
    if (!segment_free(env, p.waypoints[static_cast<std::size_t>(i)],
                      p.waypoints[static_cast<std::size_t>(j)]))
      continue;
    p.waypoints.erase(p.waypoints.begin() + i + 1, p.waypoints.begin() + j);
  }
  p.length = polyline_length(p.waypoints);
  for (std::size_t i = 1; i < p.waypoints.size(); ++i)
    if (!segment_free(env, p.waypoints[i - 1], p.waypoints[i]))
      throw std::logic_error("smoothing produced an invalid segment");
  return p;
}

/// Measured properties of a path: its length, the minimum clearance over
/// densely sampled points, the worst value of every registered metric's
/// field along it, and the corridor (skeleton edge id) sequence it follows.
struct PathScore {
  double length = 0.0;
  double min_clearance = 0.0;
  std::map<std::string, double> worst;
  std::vector<int> corridor;
};

/// Nearest skeleton edge (point-to-polyline distance, ties toward the lower
/// edge id) of each waypoint, deduplicated in traversal order. Empty when
/// the annotation has no edges.
inline std::vector<int> classify_corridor(const Path& p,
                                          const AnnotatedSkeleton& ann) {
  std::vector<int> seq;
  if (ann.graph.edges.empty()) return seq;
  for (const Point2 w : p.waypoints) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& e : ann.graph.edges) {
      for (std::size_t i = 1; i < e.polyline.size(); ++i) {
        const double d =
            point_segment_distance(w, e.polyline[i - 1], e.polyline[i]);
        if (d < best_d || (d == best_d && e.id < best)) {
          best_d = d;
          best = e.id;
        }
      }
    }
    if (seq.empty() || seq.back() != best) seq.push_back(best);
  }
  return seq;
}

/// Walks the path at the given step (default robot_radius / 4; clearance is
/// 1-Lipschitz, so the clearance error is bounded by the step) and records
/// the extrema. Worst means lowest for higher_better metrics and highest for
/// lower_better ones.
inline PathScore score_path(const Path& p, const Environment& env,
                            const AnnotatedSkeleton& ann, double step = 0.0) {
  if (p.waypoints.empty())
    throw std::invalid_argument("cannot score an empty path");
  if (step <= 0.0) step = env.robot_radius / 4.0;

  PathScore score;
  score.length = polyline_length(p.waypoints);
  score.corridor = classify_corridor(p, ann);

  score.min_clearance = std::numeric_limits<double>::infinity();
  for (const auto& m : ann.metrics)
    score.worst[m.name] = m.sense == MetricSense::HigherBetter
                              ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
  auto take = [&](Point2 q) {
    score.min_clearance = std::min(score.min_clearance, clearance(env, q));
    for (const auto& m : ann.metrics) {
      const double v = m.field.kind == ScalarField::Kind::Clearance
                           ? clearance(env, q)
                           : field_value(env, m.field, q);
      auto& w = score.worst[m.name];
      w = m.sense == MetricSense::HigherBetter ? std::min(w, v)
                                               : std::max(w, v);
    }
  };
  take(p.waypoints.front());
  for (std::size_t i = 1; i < p.waypoints.size(); ++i) {
    const Point2 a = p.waypoints[i - 1];
    const Point2 b = p.waypoints[i];
    const int n =
        std::max(1, static_cast<int>(std::ceil(distance(a, b) / step)));
    for (int j = 1; j <= n; ++j)
      take(lerp(a, b, static_cast<double>(j) / n));
  }
  return score;
}

/// Scalar study score per the benchmark convention: clearance studies rank
/// by min_clearance (higher better); energy-style studies rank by the
/// negated worst field value, so higher is better for both.
inline double scalar_score(const PathScore& score, const MetricSpec& metric) {
  if (metric.field.kind == ScalarField::Kind::Clearance)
    return score.min_clearance;
  return -score.worst.at(metric.name);
}

}  // namespace skelplan
