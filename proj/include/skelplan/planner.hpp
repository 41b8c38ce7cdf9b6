#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "skelplan/annotate.hpp"
#include "skelplan/geometry.hpp"
#include "skelplan/skeleton.hpp"

namespace skelplan {

enum class Strategy { AB, DR, PlainRrt, MaRrt };
enum class Growth { RrtExtend, RrgConnect };
enum class SelectionRule { GreedyMin, Softmin };

struct PlannerConfig {
  Strategy strategy = Strategy::AB;
  Growth growth = Growth::RrtExtend;
  std::string bias_metric;  // required for AB
  double p_whole_env = 0.05;
  double extend_step = 0.0;  // <= 0 resolves to 2 * robot_radius in plan()
  int rrg_k = 3;
  long max_iterations = 30000;
  double time_budget_ms = 10000.0;
  SelectionRule selection = SelectionRule::Softmin;
  double softmin_temperature = 0.5;
  std::uint64_t rng_seed = 0;
};

/// A disc on a skeleton edge from which the planner samples. It advances
/// along the edge polyline (direction +1 toward v1, -1 toward v0) as the
/// roadmap reaches it, staying just ahead of the frontier.
struct Region {
  int edge_id = -1;
  int direction = +1;
  int index = 0;  // current polyline index; center == polyline[index]
  Point2 center;
  double radius = 0.0;
  long successes = 0;
  long attempts = 0;
  long consecutive_failures = 0;
  bool at_end = false;
};

struct RoadmapNode {
  int id = 0;
  Point2 position;
  int parent = -1;  // node this one was grown from; -1 for the root
};

struct RoadmapEdge {
  int a = 0;
  int b = 0;
  double length = 0.0;
};

/// Tree or graph of free configurations. Nearest-neighbor queries go through
/// a uniform bucket grid; all tie-breaks are by lowest node id.
struct Roadmap {
  enum class Mode { Tree, Graph };

  Mode mode = Mode::Tree;
  std::vector<RoadmapNode> nodes;
  std::vector<RoadmapEdge> edges;

  void init_index(double cell_size) {
    cell_ = cell_size > 0.0 ? cell_size : 1.0;
    buckets_.clear();
    adjacency_.assign(nodes.size(), {});
    for (const auto& n : nodes) insert_bucket(n.position, n.id);
    for (const auto& e : edges) {
      adjacency_[static_cast<std::size_t>(e.a)].push_back(e.b);
      adjacency_[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
  }

  int add_node(Point2 p, int parent) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({id, p, parent});
    adjacency_.emplace_back();
    insert_bucket(p, id);
    return id;
  }

  void add_edge(int a, int b) {
    edges.push_back({a, b, distance(nodes[a].position, nodes[b].position)});
    adjacency_[static_cast<std::size_t>(a)].push_back(b);
    adjacency_[static_cast<std::size_t>(b)].push_back(a);
  }

  bool has_edge(int a, int b) const {
    const auto& adj = adjacency_[static_cast<std::size_t>(a)];
    return std::find(adj.begin(), adj.end(), b) != adj.end();
  }

  const std::vector<int>& neighbors(int id) const {
    return adjacency_[static_cast<std::size_t>(id)];
  }

  /// Lowest-id node nearest to p; -1 when empty.
  int nearest(Point2 p) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    scan_rings(p, [&](int id, double d) {
      if (d < best_d || (d == best_d && id < best)) {
        best = id;
        best_d = d;
      }
      return best_d;
    });
    return best;
  }

  /// Up to k nearest nodes to p, excluding node id `exclude`, ordered by
  /// (distance, id).
  std::vector<int> k_nearest(Point2 p, int k, int exclude) const {
    std::vector<std::pair<double, int>> found;  // (distance, id), sorted
    scan_rings(p, [&](int id, double d) {
      if (id != exclude) {
        found.emplace_back(d, id);
        std::sort(found.begin(), found.end());
        if (static_cast<int>(found.size()) > k) found.pop_back();
      }
      return static_cast<int>(found.size()) < k
                 ? std::numeric_limits<double>::infinity()
                 : found.back().first;
    });
    std::vector<int> ids;
    for (const auto& [d, id] : found) ids.push_back(id);
    return ids;
  }

 private:
  double cell_ = 1.0;
  std::unordered_map<long long, std::vector<int>> buckets_;
  std::vector<std::vector<int>> adjacency_;
  int min_cx_ = 0, max_cx_ = 0, min_cy_ = 0, max_cy_ = 0;

  static long long key(int cx, int cy) {
    return (static_cast<long long>(cx) << 32) ^
           (static_cast<long long>(static_cast<std::uint32_t>(cy)));
  }
  void insert_bucket(Point2 p, int id) {
    const int cx = static_cast<int>(std::floor(p.x / cell_));
    const int cy = static_cast<int>(std::floor(p.y / cell_));
    if (buckets_.empty()) {
      min_cx_ = max_cx_ = cx;
      min_cy_ = max_cy_ = cy;
    } else {
      min_cx_ = std::min(min_cx_, cx);
      max_cx_ = std::max(max_cx_, cx);
      min_cy_ = std::min(min_cy_, cy);
      max_cy_ = std::max(max_cy_, cy);
    }
    buckets_[key(cx, cy)].push_back(id);
  }

  // Visits candidates ring by ring outward from p's cell in a fixed order.
  // The callback returns the current cutoff distance; scanning stops once a
  // ring can hold nothing closer, or past the occupied cell range.
  template <typename Fn>
  void scan_rings(Point2 p, Fn&& fn) const {
    if (nodes.empty()) return;
    const int cx = static_cast<int>(std::floor(p.x / cell_));
    const int cy = static_cast<int>(std::floor(p.y / cell_));
    const int rmax = std::max(std::max(std::abs(min_cx_ - cx), std::abs(max_cx_ - cx)),
                              std::max(std::abs(min_cy_ - cy), std::abs(max_cy_ - cy)));
    double cutoff = std::numeric_limits<double>::infinity();
    for (int r = 0; r <= rmax; ++r) {
      if (static_cast<double>(r - 1) * cell_ > cutoff) return;
      auto visit = [&](int bx, int by) {
        const auto it = buckets_.find(key(bx, by));
        if (it == buckets_.end()) return;
        for (const int id : it->second)
          cutoff = fn(id, distance(nodes[id].position, p));
      };
      if (r == 0) {
        visit(cx, cy);
      } else {
        for (int dx = -r; dx <= r; ++dx) {
          visit(cx + dx, cy - r);
          visit(cx + dx, cy + r);
        }
        for (int dy = -r + 1; dy <= r - 1; ++dy) {
          visit(cx - r, cy + dy);
          visit(cx + r, cy + dy);
        }
      }
    }
  }
};

struct PlanStats {
  long iterations = 0;
  bool success = false;
  int goal_node = -1;
  double wall_ms = 0.0;
  std::vector<int> first_visit_order;      // edge ids, first region spawn
  std::map<int, long> selections_per_edge;
  long whole_env_selections = 0;
};

struct PlanResult {
  Roadmap roadmap;
  PlanStats stats;
  std::vector<Region> final_regions;
};

/// All state of one planning run. plan() drives it; tests may build one
/// directly to exercise the region operations in isolation.
struct PlannerState {
  const Environment* env = nullptr;
  const AnnotatedSkeleton* ann = nullptr;  // null for skeleton-free baselines
  PlannerConfig config;
  Roadmap roadmap;
  std::vector<Region> active_regions;
  std::set<std::pair<int, int>> visited;  // (edge id, direction)
  std::mt19937_64 rng;
  PlanStats stats;
  int last_node = -1;  // newest roadmap node

  double u01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
};

/// Spawns a region on every incident (edge, direction-away-from-v) of vertex
/// v not yet visited, at polyline index 1 from v's end so the first success
/// advances it. Returns the number of regions created.
inline int create_active_regions(PlannerState& state, int vertex_id) {
  const SkeletonGraph& g = state.ann->graph;
  int created = 0;
  for (const auto& e : g.edges) {
    const int n = static_cast<int>(e.polyline.size());
    for (const int dir : {+1, -1}) {
      const int from = dir == +1 ? e.v0 : e.v1;
      if (from != vertex_id) continue;
      if (!state.visited.insert({e.id, dir}).second) continue;
      Region r;
      r.edge_id = e.id;
      r.direction = dir;
      r.index = dir == +1 ? 1 : n - 2;
      r.center = e.polyline[static_cast<std::size_t>(r.index)];
      r.radius = state.env->robot_radius;
      state.active_regions.push_back(r);
      ++created;
      bool seen = false;
      for (const int id : state.stats.first_visit_order) seen |= id == e.id;
      if (!seen) state.stats.first_visit_order.push_back(e.id);
    }
  }
  return created;
}

/// Selection weights w_i = a_i^(l_i / minL), lower = more attractive.
/// AB reads a_i from the annotation; DR replaces it with the inverted
/// success rate (1 + attempts) / (1 + successes), so fresh regions grow
/// heavier as they fail. A region stalled for 20 straight failures has its
/// weight doubled per failure beyond the threshold (recomputed each call,
/// not sticky): annotation costs span many orders of magnitude once edge
/// lengths differ, and a bounded penalty can never lift a cheap but
/// physically blocked region out of the argmin. Exponential back-off makes
/// recovery take O(log weight-gap) failures instead of never.
inline std::vector<double> region_weights(const PlannerState& state) {
  const AnnotatedSkeleton& ann = *state.ann;
  std::vector<double> w;
  w.reserve(state.active_regions.size());
  for (const auto& r : state.active_regions) {
    const SkeletonEdge* e = ann.graph.edge_by_id(r.edge_id);
    const double exponent = e->length / ann.min_edge_length;
    double a;
    if (state.config.strategy == Strategy::DR) {
      a = static_cast<double>(1 + r.attempts) /
          static_cast<double>(1 + r.successes);
    } else {
      a = edge_cost(ann, r.edge_id, state.config.bias_metric);
    }
    double wi = std::pow(a, exponent);
    if (state.config.strategy == Strategy::AB && r.consecutive_failures >= 20) {
      const long excess = std::min(r.consecutive_failures - 19L, 512L);
      wi *= std::pow(2.0, static_cast<double>(excess));
    }
    w.push_back(wi);
  }
  return w;
}

inline constexpr int kWholeEnv = -1;

/// Picks the next sampling target: the whole environment with probability
/// p_whole_env (also when no region is active), otherwise the region with
/// the best weight. greedy_min takes the argmin (ties: lowest edge id, then
/// forward before backward, then lowest index); softmin samples regions with
/// probability proportional to (1/w_i)^(1/temperature).
/// Returns an index into active_regions, or kWholeEnv.
inline int select_region(PlannerState& state) {
  const double u = state.u01();
  if (u < state.config.p_whole_env) return kWholeEnv;
  if (state.active_regions.empty()) return kWholeEnv;

  const std::vector<double> w = region_weights(state);
  if (state.config.selection == SelectionRule::GreedyMin) {
    int best = 0;
    auto rank = [&](int i) {
      const Region& r = state.active_regions[static_cast<std::size_t>(i)];
      return std::make_tuple(w[static_cast<std::size_t>(i)], r.edge_id,
                             r.direction == -1, r.index);
    };
    for (int i = 1; i < static_cast<int>(w.size()); ++i)
      if (rank(i) < rank(best)) best = i;
    return best;
  }

  // Softmin in log space: score_i = -ln(w_i)/temperature.
  const double tau = state.config.softmin_temperature;
  std::vector<double> score(w.size());
  double smax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    score[i] = -std::log(w[i]) / tau;
    smax = std::max(smax, score[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    score[i] = std::exp(score[i] - smax);
    total += score[i];
  }
  const double pick = state.u01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += score[i];
    if (pick < acc) return static_cast<int>(i);
  }
  return static_cast<int>(w.size()) - 1;
}

/// Closest obstacle or boundary feature of a point, for medial-axis
/// retraction. Obstacle edges snap to vertex features near their endpoints
/// so the identity is stable across the corner.
namespace detail {

struct FeatureId {
  int kind = 0;  // 0 boundary side, 1 obstacle edge, 2 obstacle vertex
  int owner = 0;
  int item = 0;
  bool operator==(const FeatureId& o) const {
    return kind == o.kind && owner == o.owner && item == o.item;
  }
  bool operator!=(const FeatureId& o) const { return !(*this == o); }
};

struct NearestFeature {
  FeatureId id;
  Point2 closest;
  double dist = std::numeric_limits<double>::infinity();
};

inline NearestFeature nearest_feature(const Environment& env, Point2 p) {
  NearestFeature best;
  auto consider = [&](FeatureId id, Point2 closest) {
    const double d = distance(p, closest);
    if (d < best.dist) best = {id, closest, d};
  };
  const Aabb& b = env.bounds;
  consider({0, 0, 0}, {b.xmin, p.y});
  consider({0, 1, 0}, {b.xmax, p.y});
  consider({0, 2, 0}, {p.x, b.ymin});
  consider({0, 3, 0}, {p.x, b.ymax});
  for (std::size_t oi = 0; oi < env.obstacles.size(); ++oi) {
    const auto& verts = env.obstacles[oi].vertices;
    const int n = static_cast<int>(verts.size());
    for (int j = 0; j < n; ++j) {
      const Point2 a = verts[static_cast<std::size_t>(j)];
      const Point2 c = verts[static_cast<std::size_t>((j + 1) % n)];
      const Point2 cp = closest_point_on_segment(p, a, c);
      const int o = static_cast<int>(oi);
      if (distance(cp, a) < 1e-9)
        consider({2, o, j}, a);
      else if (distance(cp, c) < 1e-9)
        consider({2, o, (j + 1) % n}, c);
      else
        consider({1, o, j}, cp);
    }
  }
  return best;
}

}  // namespace detail

/// Retracts p onto the medial axis: marches directly away from the nearest
/// obstacle feature (clearance grows at unit rate) until a different feature
/// becomes nearest, then bisects the crossing to within tol. The returned
/// point keeps clearance(result) >= clearance(p).
inline Point2 ma_retract(const Environment& env, Point2 p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("ma_retract tol must be > 0");
  if (!(clearance(env, p) > 0.0))
    throw std::domain_error("ma_retract requires a free point");

  const detail::NearestFeature f0 = detail::nearest_feature(env, p);
  Point2 dir = p - f0.closest;
  const double d0 = norm(dir);
  if (d0 < 1e-12) return p;  // on a feature boundary; no direction to march
  dir = dir * (1.0 / d0);

  // Exponential march away from the feature, then bisect the identity flip.
  double lo = 0.0, hi = tol;
  bool flipped = false;
  for (int it = 0; it < 200; ++it) {
    const Point2 q = p + dir * hi;
    if (!env.bounds.contains(q, 0.0) ||
        detail::nearest_feature(env, q).id != f0.id) {
      flipped = true;
      break;
    }
    lo = hi;
    hi *= 1.5;
  }
  if (!flipped) return p + dir * lo;  // defensive; bounded worlds always flip
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Point2 q = p + dir * mid;
    if (env.bounds.contains(q, 0.0) &&
        detail::nearest_feature(env, q).id == f0.id)
      lo = mid;
    else
      hi = mid;
  }
  return p + dir * lo;
}

/// One growth attempt toward the target region (or the whole environment):
/// sample, extend the nearest node by at most extend_step, validate, insert.
/// rrg_connect also tries edges to the rrg_k nearest existing nodes. MA-RRT
/// retracts the new configuration to the medial axis before validation.
/// Returns whether a node was added; updates the region's counters.
inline bool grow_roadmap(PlannerState& state, int target) {
  const Environment& env = *state.env;
  Region* region =
      target == kWholeEnv
          ? nullptr
          : &state.active_regions[static_cast<std::size_t>(target)];

  Point2 q;
  if (region != nullptr) {
    const double rr = region->radius * std::sqrt(state.u01());
    const double th = 2.0 * M_PI * state.u01();
    q = region->center + Point2{rr * std::cos(th), rr * std::sin(th)};
  } else {
    q.x = env.bounds.xmin + state.u01() * env.bounds.width();
    q.y = env.bounds.ymin + state.u01() * env.bounds.height();
  }

  auto fail = [&]() {
    if (region != nullptr) {
      ++region->attempts;
      ++region->consecutive_failures;
    }
    return false;
  };

  const int near = state.roadmap.nearest(q);
  const Point2 np = state.roadmap.nodes[static_cast<std::size_t>(near)].position;
  const double d = distance(np, q);
  if (d < 1e-12) return fail();
  Point2 next = d <= state.config.extend_step
                    ? q
                    : np + (q - np) * (state.config.extend_step / d);

  if (!is_free(env, next)) return fail();
  if (state.config.strategy == Strategy::MaRrt) {
    next = ma_retract(env, next, 1e-3);
    if (!is_free(env, next)) return fail();
    if (distance(np, next) < 1e-12) return fail();
  }
  if (!segment_free(env, np, next)) return fail();

  const int id = state.roadmap.add_node(next, near);
  state.roadmap.add_edge(near, id);
  if (state.config.growth == Growth::RrgConnect) {
    for (const int other : state.roadmap.k_nearest(next, state.config.rrg_k, id)) {
      if (other == near || state.roadmap.has_edge(id, other)) continue;
      const Point2 op = state.roadmap.nodes[static_cast<std::size_t>(other)].position;
      if (segment_free(env, next, op)) state.roadmap.add_edge(id, other);
    }
  }

  state.last_node = id;
  if (region != nullptr) {
    ++region->attempts;
    ++region->successes;
    region->consecutive_failures = 0;
  }
  return true;
}

/// After a successful extension that landed inside r, slides r's index along
/// its polyline (in its direction) to the first point farther than radius
/// from the new node. Walking past the final point flags the region at_end.
inline void advance_region(PlannerState& state, Region& r) {
  if (state.last_node < 0) return;
  const Point2 z =
      state.roadmap.nodes[static_cast<std::size_t>(state.last_node)].position;
  if (distance(z, r.center) > r.radius) return;
  const SkeletonEdge* e = state.ann->graph.edge_by_id(r.edge_id);
  const int n = static_cast<int>(e->polyline.size());
  int i = r.index;
  while (i >= 0 && i < n &&
         distance(e->polyline[static_cast<std::size_t>(i)], z) <= r.radius)
    i += r.direction;
  r.index = i;
  if (i < 0 || i >= n) {
    r.at_end = true;
  } else {
    r.center = e->polyline[static_cast<std::size_t>(i)];
  }
}

inline bool region_reached_end(const Region& r) { return r.at_end; }

/// Validates and resolves a config against an environment and annotation.
inline PlannerConfig resolve_config(const Environment& env,
                                    const AnnotatedSkeleton* ann,
                                    PlannerConfig config) {
  if (config.extend_step <= 0.0) config.extend_step = 2.0 * env.robot_radius;
  if (!(config.extend_step > 0.0))
    throw std::invalid_argument("extend_step must be positive");
  if (config.p_whole_env < 0.0 || config.p_whole_env >= 1.0)
    throw std::invalid_argument("p_whole_env must lie in [0, 1)");
  const bool skeleton_guided =
      config.strategy == Strategy::AB || config.strategy == Strategy::DR;
  if (skeleton_guided && config.p_whole_env <= 0.0)
    throw std::invalid_argument(
        "p_whole_env must be positive for skeleton-guided strategies");
  if (config.strategy == Strategy::AB) {
    if (ann == nullptr || ann->find_metric(config.bias_metric) == nullptr)
      throw std::invalid_argument("bias metric '" + config.bias_metric +
                                  "' is not registered");
  }
  if (config.max_iterations <= 0)
    throw std::invalid_argument("max_iterations must be positive");
  if (!(config.time_budget_ms > 0.0))
    throw std::invalid_argument("time budget must be positive");
  if (!(config.softmin_temperature > 0.0))
    throw std::invalid_argument("softmin temperature must be positive");
  if (config.rrg_k < 0) throw std::invalid_argument("rrg_k must be >= 0");
  return config;
}

/// Runs the full region-biased loop: select a target, grow the roadmap,
/// advance the target region, respawn regions when one reaches its edge's
/// end, and try to connect the newest node to the goal each iteration.
/// Plain RRT ignores the skeleton; MA-RRT additionally retracts samples.
/// Failure (budget exhausted) returns success=false with the partial
/// roadmap; identical inputs and seed reproduce the result exactly.
inline PlanResult plan(const Environment& env, const AnnotatedSkeleton* ann,
                       const Query& query, PlannerConfig config) {
  const auto t0 = std::chrono::steady_clock::now();
  config = resolve_config(env, ann, config);
  const bool skeleton_guided =
      config.strategy == Strategy::AB || config.strategy == Strategy::DR;
  // An annotation with an empty graph is legal: the whole-env fallback is
  // then the only sample source (completeness smoke case).
  if (skeleton_guided && ann == nullptr)
    throw std::invalid_argument("skeleton-guided strategy needs an annotation");
  if (!is_free(env, query.start))
    throw std::invalid_argument("query start is not free at robot radius");
  if (!is_free(env, query.goal))
    throw std::invalid_argument("query goal is not free at robot radius");

  PlannerState state;
  state.env = &env;
  state.ann = ann;
  state.config = config;
  state.rng.seed(config.rng_seed);
  state.roadmap.mode = config.growth == Growth::RrgConnect
                           ? Roadmap::Mode::Graph
                           : Roadmap::Mode::Tree;
  state.roadmap.init_index(config.extend_step);
  state.last_node = state.roadmap.add_node(query.start, -1);

  if (skeleton_guided && ann != nullptr && !ann->graph.vertices.empty()) {
    const int v0 = ann->graph.nearest_vertex(query.start);
    if (v0 >= 0) create_active_regions(state, v0);
  }

  auto elapsed_ms = [&]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };
  auto try_connect_goal = [&]() {
    const int near = state.roadmap.nearest(query.goal);
    const Point2 np =
        state.roadmap.nodes[static_cast<std::size_t>(near)].position;
    if (distance(np, query.goal) > config.extend_step) return false;
    if (!segment_free(env, np, query.goal)) return false;
    const int gid = state.roadmap.add_node(query.goal, near);
    state.roadmap.add_edge(near, gid);
    state.stats.success = true;
    state.stats.goal_node = gid;
    return true;
  };

  while (state.stats.iterations < config.max_iterations &&
         elapsed_ms() < config.time_budget_ms) {
    if (try_connect_goal()) break;
    ++state.stats.iterations;

    int target = kWholeEnv;
    if (skeleton_guided) target = select_region(state);
    if (target == kWholeEnv)
      ++state.stats.whole_env_selections;
    else
      ++state.stats.selections_per_edge[state.active_regions[static_cast<std::size_t>(target)].edge_id];

    const bool grew = grow_roadmap(state, target);
    if (grew && target != kWholeEnv) {
      Region& r = state.active_regions[static_cast<std::size_t>(target)];
      advance_region(state, r);
      if (region_reached_end(r)) {
        const SkeletonEdge* e = state.ann->graph.edge_by_id(r.edge_id);
        const int next_vertex = r.direction == +1 ? e->v1 : e->v0;
        state.active_regions.erase(state.active_regions.begin() + target);
        create_active_regions(state, next_vertex);
      }
    }
  }
  if (!state.stats.success) try_connect_goal();

  state.stats.wall_ms = elapsed_ms();
  PlanResult result;
  result.roadmap = std::move(state.roadmap);
  result.stats = std::move(state.stats);
  result.final_regions = std::move(state.active_regions);
  return result;
}

}  // namespace skelplan
