#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "skelplan/geometry.hpp"

using namespace skelplan;

namespace {

// Independent distance oracle: ternary search on the (convex) distance along
// the segment, no projection formula shared with the implementation.
double oracle_point_segment(Point2 p, Point2 a, Point2 b) {
  auto f = [&](double t) { return distance(p, lerp(a, b, t)); };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return f(0.5 * (lo + hi));
}

// Independent containment oracle: winding number from summed signed angles.
bool oracle_inside(const Polygon& poly, Point2 p) {
  double total = 0.0;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i] - p;
    const Point2 b = v[(i + 1) % v.size()] - p;
    total += std::atan2(cross(a, b), dot(a, b));
  }
  return std::abs(total) > 3.14;
}

double oracle_clearance(const Environment& env, Point2 p) {
  const Aabb& b = env.bounds;
  const Point2 c0{b.xmin, b.ymin}, c1{b.xmax, b.ymin};
  const Point2 c2{b.xmax, b.ymax}, c3{b.xmin, b.ymax};
  double best = oracle_point_segment(p, c0, c1);
  best = std::min(best, oracle_point_segment(p, c1, c2));
  best = std::min(best, oracle_point_segment(p, c2, c3));
  best = std::min(best, oracle_point_segment(p, c3, c0));
  for (const auto& ob : env.obstacles) {
    if (oracle_inside(ob, p)) return 0.0;
    const std::size_t n = ob.vertices.size();
    for (std::size_t i = 0; i < n; ++i)
      best = std::min(best, oracle_point_segment(p, ob.vertices[i],
                                                 ob.vertices[(i + 1) % n]));
  }
  return best;
}

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Environment box_world() {
  Environment env;
  env.bounds = {0, 0, 10, 10};
  env.robot_radius = 0.5;
  env.obstacles.push_back(rect(4, 4, 5, 5));
  return env;
}

Environment random_world(std::mt19937_64& rng) {
  Environment env;
  env.bounds = {0, 0, 20, 20};
  env.robot_radius = 0.5;
  std::uniform_real_distribution<double> u(1.0, 19.0);
  std::uniform_real_distribution<double> s(0.5, 3.0);
  for (int i = 0; i < 4; ++i) {
    const double x = u(rng), y = u(rng);
    const double w = s(rng), h = s(rng);
    env.obstacles.push_back(rect(x, y, std::min(x + w, 19.5),
                                 std::min(y + h, 19.5)));
  }
  // One triangle for non-axis-aligned edges.
  const double x = u(rng), y = u(rng);
  env.obstacles.push_back(Polygon(
      {{x, y}, {std::min(x + 2.0, 19.5), y}, {x, std::min(y + 1.5, 19.5)}}));
  return env;
}

}  // namespace

TEST_CASE("clearance of a point beside a unit square", "[geometry]") {
  const Environment env = box_world();
  // Nearest obstacle point of the square [4,5]^2 from (2,4.5) is (4,4.5).
  CHECK(clearance(env, {2.0, 4.5}) == Catch::Approx(2.0).margin(1e-6));
  // Inside the obstacle.
  CHECK(clearance(env, {4.5, 4.5}) == 0.0);
  // Boundary dominates near the edge of the world.
  CHECK(clearance(env, {0.25, 5.0}) == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("clearance is rejected outside the bounds", "[geometry]") {
  const Environment env = box_world();
  CHECK_THROWS_AS(clearance(env, {-1.0, 5.0}), std::domain_error);
  CHECK_THROWS_AS(clearance(env, {5.0, 10.5}), std::domain_error);
  CHECK_FALSE(is_free(env, {-1.0, 5.0}, 0.25));
}

TEST_CASE("clearance matches the independent oracle", "[geometry]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int world = 0; world < 5; ++world) {
    const Environment env = random_world(rng);
    for (int i = 0; i < 200; ++i) {
      const Point2 p{u(rng), u(rng)};
      const double got = clearance(env, p);
      const double want = oracle_clearance(env, p);
      INFO("world " << world << " point (" << p.x << "," << p.y << ")");
      CHECK(got == Catch::Approx(want).margin(1e-9));
    }
  }
}

TEST_CASE("clearance is 1-Lipschitz", "[geometry]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  const Environment env = random_world(rng);
  for (int i = 0; i < 500; ++i) {
    const Point2 p{u(rng), u(rng)};
    const Point2 q{u(rng), u(rng)};
    const double dc = std::abs(clearance(env, p) - clearance(env, q));
    CHECK(dc <= distance(p, q) + 1e-9);
  }
}

TEST_CASE("is_free uses strict clearance", "[geometry]") {
  const Environment env = box_world();
  const double r = 0.5;
  // (3.5, 4.5) is exactly r away from the square's left edge.
  CHECK_FALSE(is_free(env, {4.0 - r, 4.5}, r));
  CHECK(is_free(env, {4.0 - r - 1e-9, 4.5}, r));
  CHECK_FALSE(is_free(env, {4.5, 4.5}, r));
}

TEST_CASE("segment through a gap depends on the robot radius", "[geometry]") {
  // Two blocks leave a gap of width 1.0 around y in (4.5, 5.5); the gap
  // midpoint (5, 5) has clearance exactly 0.5.
  Environment env;
  env.bounds = {0, 0, 10, 10};
  env.robot_radius = 0.5;
  env.obstacles.push_back(rect(4, 0, 6, 4.5));
  env.obstacles.push_back(rect(4, 5.5, 6, 10));
  REQUIRE(clearance(env, {5.0, 5.0}) == Catch::Approx(0.5).margin(1e-12));

  const Point2 a{1.0, 5.0}, b{9.0, 5.0};
  CHECK_FALSE(segment_free(env, a, b, 0.6, 0.1));
  CHECK(segment_free(env, a, b, 0.4, 0.1));
}

TEST_CASE("segment_free is symmetric", "[geometry]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.5, 19.5);
  const Environment env = random_world(rng);
  for (int i = 0; i < 300; ++i) {
    const Point2 a{u(rng), u(rng)};
    const Point2 b{u(rng), u(rng)};
    CHECK(segment_free(env, a, b, 0.4, 0.2) ==
          segment_free(env, b, a, 0.4, 0.2));
  }
}

TEST_CASE("zero-length segment reduces to the point test", "[geometry]") {
  const Environment env = box_world();
  const Point2 p{2.0, 2.0};
  CHECK(segment_free(env, p, p, 0.5, 0.25) == is_free(env, p, 0.5));
  const Point2 q{4.2, 4.2};
  CHECK(segment_free(env, q, q, 0.1, 0.25) == is_free(env, q, 0.1));
}

TEST_CASE("polygon constructor normalizes and validates", "[geometry]") {
  // Clockwise input is reversed to counter-clockwise.
  Polygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  CHECK(cw.signed_area() > 0.0);
  CHECK(cw.contains({0.5, 0.5}));

  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {1, 0 + 1e-15}}),
                  std::invalid_argument);
  // Bowtie.
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}),
                  std::invalid_argument);
}

TEST_CASE("polygon containment matches the winding oracle", "[geometry]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  const Environment env = random_world(rng);
  for (const auto& ob : env.obstacles) {
    for (int i = 0; i < 200; ++i) {
      const Point2 p{u(rng), u(rng)};
      // Skip points hugging the boundary where parity may differ benignly.
      bool near_edge = false;
      const std::size_t n = ob.vertices.size();
      for (std::size_t k = 0; k < n; ++k)
        near_edge |= oracle_point_segment(p, ob.vertices[k],
                                          ob.vertices[(k + 1) % n]) < 1e-7;
      if (near_edge) continue;
      CHECK(ob.contains(p) == oracle_inside(ob, p));
    }
  }
}

TEST_CASE("synthetic field evaluation and Lipschitz bound", "[geometry]") {
  Environment env;
  env.bounds = {0, 0, 10, 10};
  env.robot_radius = 0.5;

  ScalarField f;
  f.name = "energy";
  f.baseline = 1.5;
  f.bumps.push_back({{5.0, 5.0}, 5.0, 0.8});
  f.bumps.push_back({{2.0, 2.0}, -1.0, 1.2});

  // At the first bump's center: baseline + 5 + tail of the second bump.
  const double tail =
      -1.0 * std::exp(-(9.0 + 9.0) / (2.0 * 1.2 * 1.2));
  CHECK(field_value(env, f, {5.0, 5.0}) ==
        Catch::Approx(1.5 + 5.0 + tail).margin(1e-12));

  // Empirical slope never exceeds the stated bound.
  const double bound = field_lipschitz_bound(f);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.5, 9.5);
  for (int i = 0; i < 400; ++i) {
    const Point2 p{u(rng), u(rng)};
    const Point2 q{u(rng), u(rng)};
    const double slope =
        std::abs(field_value(env, f, p) - field_value(env, f, q)) /
        std::max(distance(p, q), 1e-12);
    CHECK(slope <= bound + 1e-9);
  }

  ScalarField cf = ScalarField::clearance_field();
  CHECK(field_value(env, cf, {5.0, 5.0}) ==
        Catch::Approx(clearance(env, {5.0, 5.0})));
  CHECK(field_lipschitz_bound(cf) == 1.0);
}

TEST_CASE("environment validation", "[geometry]") {
  Environment env = box_world();
  CHECK_NOTHROW(env.validate());

  Environment bad = box_world();
  bad.robot_radius = 6.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  Environment out = box_world();
  out.obstacles.push_back(rect(8, 8, 11, 9));
  CHECK_THROWS_AS(out.validate(), std::invalid_argument);
}
