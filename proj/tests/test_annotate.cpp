#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "skelplan/annotate.hpp"
#include "skelplan/distance_grid.hpp"
#include "skelplan/skeleton.hpp"

using namespace skelplan;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

// Corridor between two slabs, open chambers at both ends, and a bump that
// pinches the corridor from below near x = 6 to a gap of width 1 (y in 4..5).
Environment pinch_world() {
  Environment env;
  env.bounds = {0, 0, 12, 8};
  env.robot_radius = 0.5;
  env.obstacles.push_back(rect(2, 1e-9, 10, 3));
  env.obstacles.push_back(rect(2, 5, 10, 8 - 1e-9));
  env.obstacles.push_back(rect(5.5, 3 - 1e-9, 6.5, 4));
  env.query = {{1.0, 4.0}, {11.0, 4.0}};
  return env;
}

// Same shape without the pinch, for field-based metrics on a clean corridor.
Environment corridor_chambers_world() {
  Environment env;
  env.bounds = {0, 0, 12, 8};
  env.robot_radius = 0.5;
  env.obstacles.push_back(rect(2, 1e-9, 10, 3));
  env.obstacles.push_back(rect(2, 5, 10, 8 - 1e-9));
  env.query = {{1.0, 4.0}, {11.0, 4.0}};
  return env;
}

struct Pipeline {
  DistanceGrid grid;
  SkeletonGraph sk;
};

Pipeline build(const Environment& env, double res = 0.25) {
  Pipeline p{distance_transform(env, res), {}};
  p.sk = prune_spurs(extract_skeleton(p.grid, env), 2.0 * env.robot_radius, env);
  return p;
}

const SkeletonEdge* edge_near(const SkeletonGraph& sk, Point2 p, double tol) {
  for (const auto& e : sk.edges)
    for (const auto& q : e.polyline)
      if (distance(p, q) <= tol) return &e;
  return nullptr;
}

MetricSpec clearance_metric() {
  return {"clearance", ScalarField::clearance_field(),
          MetricSense::HigherBetter};
}

}  // namespace

TEST_CASE("pinched corridor bottleneck equals the gap half-width",
          "[annotate]") {
  const Environment env = pinch_world();
  const Pipeline p = build(env);
  const auto ann =
      annotate(p.sk, env, {clearance_metric()}, p.grid.resolution);

  // The corridor edge is the one passing over the pinch at (6, 4.5).
  const SkeletonEdge* e = edge_near(p.sk, {6.0, 4.5}, 0.5);
  REQUIRE(e != nullptr);
  CHECK(ann.bottleneck(e->id, "clearance") ==
        Catch::Approx(0.5).margin(p.grid.resolution + 1e-9));

  // Every (edge, metric) pair carries a value and min_edge_length is exact.
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& ed : p.sk.edges) {
    CHECK_NOTHROW(ann.bottleneck(ed.id, "clearance"));
    shortest = std::min(shortest, ed.length);
  }
  CHECK(ann.min_edge_length == shortest);
  CHECK(ann.min_edge_length > 0.0);
}

TEST_CASE("gaussian barrier bottleneck hits the analytic peak", "[annotate]") {
  Environment env = corridor_chambers_world();
  const Pipeline p = build(env);

  // Center the barrier exactly on a corridor polyline point so the sampled
  // maximum equals amplitude + baseline.
  const SkeletonEdge* corridor = edge_near(p.sk, {6.0, 4.0}, 0.6);
  REQUIRE(corridor != nullptr);
  Point2 center = corridor->polyline[0];
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : corridor->polyline) {
    const double d = distance(q, {6.0, 4.0});
    if (d < best) {
      best = d;
      center = q;
    }
  }

  ScalarField energy;
  energy.name = "energy";
  energy.kind = ScalarField::Kind::Synthetic;
  energy.baseline = 1.0;
  energy.bumps = {{center, 5.0, 0.8}};
  env.fields.push_back(energy);

  const auto ann = annotate(
      p.sk, env, {{"energy", energy, MetricSense::LowerBetter}},
      p.grid.resolution);
  CHECK(ann.bottleneck(corridor->id, "energy") ==
        Catch::Approx(6.0).margin(1e-3));
}

TEST_CASE("bottlenecks match a ten-times oversampled oracle", "[annotate]") {
  const Environment base = corridor_chambers_world();
  const Pipeline p = build(base);
  const double spacing = p.grid.resolution;

  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> ux(0.0, 12.0), uy(0.0, 8.0);
  std::uniform_real_distribution<double> uamp(-6.0, 6.0), usig(0.3, 2.0);
  std::uniform_real_distribution<double> ubase(-2.0, 2.0);
  std::uniform_int_distribution<int> ucount(1, 4);

  for (int trial = 0; trial < 25; ++trial) {
    Environment env = base;
    ScalarField f;
    f.name = "synth";
    f.kind = ScalarField::Kind::Synthetic;
    f.baseline = ubase(rng);
    const int n = ucount(rng);
    for (int i = 0; i < n; ++i)
      f.bumps.push_back({{ux(rng), uy(rng)}, uamp(rng), usig(rng)});
    env.fields.push_back(f);

    const MetricSense sense =
        trial % 2 == 0 ? MetricSense::HigherBetter : MetricSense::LowerBetter;
    const auto ann = annotate(p.sk, env, {{"synth", f, sense}}, spacing);
    const double tol = field_lipschitz_bound(f) * spacing + 1e-12;

    for (const auto& e : p.sk.edges) {
      double oracle = sense == MetricSense::HigherBetter
                          ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < e.polyline.size(); ++i) {
        const Point2 a = e.polyline[i], b = e.polyline[i + 1];
        const double seg = distance(a, b);
        const int steps =
            std::max(1, static_cast<int>(std::ceil(seg / (spacing / 10.0))));
        for (int j = 0; j <= steps; ++j) {
          const double v = field_value(
              env, f, lerp(a, b, static_cast<double>(j) / steps));
          oracle = sense == MetricSense::HigherBetter ? std::min(oracle, v)
                                                      : std::max(oracle, v);
        }
      }
      const double got = ann.bottleneck(e.id, "synth");
      REQUIRE(std::abs(got - oracle) <= tol);
    }
  }
}

TEST_CASE("annotation is pure and robot-independent", "[annotate]") {
  const Environment env = pinch_world();
  const Pipeline p = build(env);

  const auto a = annotate(p.sk, env, {clearance_metric()}, p.grid.resolution);
  const auto b = annotate(p.sk, env, {clearance_metric()}, p.grid.resolution);
  CHECK(a.edge_values == b.edge_values);

  Environment smaller_robot = env;
  smaller_robot.robot_radius = 0.2;
  const auto c =
      annotate(p.sk, smaller_robot, {clearance_metric()}, p.grid.resolution);
  CHECK(a.edge_values == c.edge_values);
}

TEST_CASE("annotation rejects bad inputs", "[annotate]") {
  const Environment env = pinch_world();
  const Pipeline p = build(env);

  CHECK_THROWS_AS(annotate({}, env, {clearance_metric()}, 0.25),
                  std::invalid_argument);
  CHECK_THROWS_AS(annotate(p.sk, env, {clearance_metric()}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      annotate(p.sk, env, {clearance_metric(), clearance_metric()}, 0.25),
      std::invalid_argument);

  const auto ann = annotate(p.sk, env, {clearance_metric()}, 0.25);
  CHECK_THROWS_AS(edge_cost(ann, p.sk.edges[0].id, "energy"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ann.bottleneck(123456, "clearance"), std::invalid_argument);
}

TEST_CASE("edge cost normalization and its extremes", "[annotate]") {
  // Hand-built annotation: three edges with known bottlenecks 2, 5, 8.
  AnnotatedSkeleton ann;
  ann.metrics = {{"m", ScalarField::clearance_field(),
                  MetricSense::HigherBetter}};
  ann.edge_values[{0, "m"}] = 2.0;
  ann.edge_values[{1, "m"}] = 5.0;
  ann.edge_values[{2, "m"}] = 8.0;
  ann.value_range["m"] = {2.0, 8.0};

  CHECK(edge_cost(ann, 2, "m") == Catch::Approx(0.05));   // global best
  CHECK(edge_cost(ann, 0, "m") == Catch::Approx(1.0));    // global worst
  CHECK(edge_cost(ann, 1, "m") == Catch::Approx(0.525));  // linear midpoint

  // lower_better flips the direction.
  AnnotatedSkeleton low = ann;
  low.metrics[0].sense = MetricSense::LowerBetter;
  CHECK(edge_cost(low, 0, "m") == Catch::Approx(0.05));
  CHECK(edge_cost(low, 2, "m") == Catch::Approx(1.0));

  // Degenerate range: identical bottlenecks cost 1.0 everywhere.
  AnnotatedSkeleton flat;
  flat.metrics = ann.metrics;
  flat.edge_values[{0, "m"}] = 3.0;
  flat.edge_values[{1, "m"}] = 3.0;
  flat.value_range["m"] = {3.0, 3.0};
  CHECK(edge_cost(flat, 0, "m") == 1.0);
  CHECK(edge_cost(flat, 1, "m") == 1.0);
}

TEST_CASE("cost order mirrors bottleneck order", "[annotate]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uv(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    AnnotatedSkeleton ann;
    const MetricSense sense =
        trial % 2 == 0 ? MetricSense::HigherBetter : MetricSense::LowerBetter;
    ann.metrics = {{"m", ScalarField::clearance_field(), sense}};
    const int n = 2 + static_cast<int>(rng() % 6);
    double vmin = 1e30, vmax = -1e30;
    std::vector<double> vals;
    for (int i = 0; i < n; ++i) {
      const double v = uv(rng);
      vals.push_back(v);
      ann.edge_values[{i, "m"}] = v;
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    ann.value_range["m"] = {vmin, vmax};
    if (vmax - vmin < 1e-9) continue;

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (vals[i] == vals[j]) continue;
        const bool i_better = sense == MetricSense::HigherBetter
                                  ? vals[i] > vals[j]
                                  : vals[i] < vals[j];
        if (i_better)
          CHECK(edge_cost(ann, i, "m") < edge_cost(ann, j, "m"));
      }
  }
}
