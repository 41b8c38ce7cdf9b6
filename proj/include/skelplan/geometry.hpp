#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skelplan {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Point at parameter t in [0,1] along segment ab.
inline Point2 lerp(Point2 a, Point2 b, double t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

/// Point of segment ab closest to p.
inline Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return lerp(a, b, t);
}

/// Exact Euclidean distance from p to segment ab.
inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  return distance(p, closest_point_on_segment(p, a, b));
}

struct Aabb {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }

  bool contains(Point2 p, double margin = 0.0) const {
    return p.x >= xmin + margin && p.x <= xmax - margin &&
           p.y >= ymin + margin && p.y <= ymax - margin;
  }

  /// Distance from an interior point to the nearest boundary edge.
  double boundary_distance(Point2 p) const {
    return std::min(std::min(p.x - xmin, xmax - p.x),
                    std::min(p.y - ymin, ymax - p.y));
  }
};

/// Simple polygon, vertices stored counter-clockwise. The constructor
/// normalizes orientation and rejects degenerate or self-intersecting input.
struct Polygon {
  std::vector<Point2> vertices;

  Polygon() = default;

  explicit Polygon(std::vector<Point2> vs) : vertices(std::move(vs)) {
    if (vertices.size() < 3)
      throw std::invalid_argument("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (distance(vertices[i], vertices[(i + 1) % vertices.size()]) < 1e-12)
        throw std::invalid_argument("polygon has a repeated vertex");
    }
    const double area = signed_area();
    if (std::abs(area) < 1e-12)
      throw std::invalid_argument("polygon has zero area");
    if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
    if (self_intersects())
      throw std::invalid_argument("polygon is self-intersecting");
  }

  double signed_area() const {
    double s = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
      s += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
    return 0.5 * s;
  }

  /// True when p lies inside or on the boundary. Crossing-number parity for
  /// the interior; points exactly on an edge are caught by the distance test
  /// in clearance(), so boundary fuzz here is harmless.
  bool contains(Point2 p) const {
    bool inside = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2 vi = vertices[i], vj = vertices[j];
      if ((vi.y > p.y) != (vj.y > p.y)) {
        const double xc = vj.x + (p.y - vj.y) / (vi.y - vj.y) * (vi.x - vj.x);
        if (p.x < xc) inside = !inside;
      }
    }
    return inside;
  }

 private:
  bool self_intersects() const {
    const std::size_t n = vertices.size();
    auto orient = [](Point2 a, Point2 b, Point2 c) {
      const double v = cross(b - a, c - a);
      return (v > 0.0) - (v < 0.0);
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // Skip edge pairs sharing a vertex.
        if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
        const Point2 a = vertices[i], b = vertices[(i + 1) % n];
        const Point2 c = vertices[j], d = vertices[(j + 1) % n];
        const int o1 = orient(a, b, c), o2 = orient(a, b, d);
        const int o3 = orient(c, d, a), o4 = orient(c, d, b);
        if (o1 != o2 && o3 != o4 && o1 * o2 < 0 && o3 * o4 < 0) return true;
      }
    }
    return false;
  }
};

struct Query {
  Point2 start;
  Point2 goal;
};

struct GaussianBump {
  Point2 center;
  double amplitude = 0.0;
  double sigma = 1.0;
};

/// Scalar field over the workspace: either the exact clearance field or a
/// synthetic baseline-plus-Gaussians surface (used for energy landscapes).
struct ScalarField {
  enum class Kind { Clearance, Synthetic };

  std::string name;
  Kind kind = Kind::Synthetic;
  double baseline = 0.0;
  std::vector<GaussianBump> bumps;

  static ScalarField clearance_field() {
    ScalarField f;
    f.name = "clearance";
    f.kind = Kind::Clearance;
    return f;
  }
};

/// Bounded 2D workspace with polygonal obstacles and a disc robot. The
/// boundary rectangle counts as an obstacle for all clearance queries.
struct Environment {
  Aabb bounds;
  std::vector<Polygon> obstacles;
  double robot_radius = 0.0;
  Query query;
  std::vector<ScalarField> fields;

  const ScalarField* find_field(const std::string& name) const {
    for (const auto& f : fields)
      if (f.name == name) return &f;
    return nullptr;
  }

  /// Checks structural invariants; throws std::invalid_argument on violation.
  void validate() const {
    if (!(bounds.xmin < bounds.xmax) || !(bounds.ymin < bounds.ymax))
      throw std::invalid_argument("environment bounds are empty");
    if (!(robot_radius > 0.0))
      throw std::invalid_argument("robot_radius must be positive");
    if (robot_radius >= 0.5 * std::min(bounds.width(), bounds.height()))
      throw std::invalid_argument("robot_radius too large for bounds");
    for (const auto& ob : obstacles)
      for (const auto& v : ob.vertices)
        if (!bounds.contains(v))
          throw std::invalid_argument("obstacle vertex outside bounds");
    if (!bounds.contains(query.start) || !bounds.contains(query.goal))
      throw std::invalid_argument("query endpoint outside bounds");
  }
};

/// Exact distance from p to the nearest obstacle edge or boundary edge.
/// Zero inside or on an obstacle. p must lie inside the bounds.
inline double clearance(const Environment& env, Point2 p) {
  if (!env.bounds.contains(p))
    throw std::domain_error("clearance query outside environment bounds");
  double best = env.bounds.boundary_distance(p);
  for (const auto& ob : env.obstacles) {
    if (ob.contains(p)) return 0.0;
    const std::size_t n = ob.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double d =
          point_segment_distance(p, ob.vertices[i], ob.vertices[(i + 1) % n]);
      if (d < best) best = d;
    }
  }
  return std::max(best, 0.0);
}

/// True when a disc of the given radius centered at p is collision free.
/// Strict inequality: touching an obstacle is a collision. Out-of-bounds
/// points are simply not free (no error).
inline bool is_free(const Environment& env, Point2 p, double radius) {
  if (!env.bounds.contains(p)) return false;
  return clearance(env, p) > radius;
}

/// True when the disc swept along segment ab stays free. Interpolated points
/// spaced at most `step` apart are tested, endpoints included. Endpoints are
/// ordered canonically so the result is symmetric in a and b.
inline bool segment_free(const Environment& env, Point2 a, Point2 b,
                         double radius, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("segment step must be > 0");
  if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
  const double len = distance(a, b);
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= n; ++i) {
    if (!is_free(env, lerp(a, b, static_cast<double>(i) / n), radius))
      return false;
  }
  return true;
}

/// segment_free with the default step of half the robot radius.
inline bool segment_free(const Environment& env, Point2 a, Point2 b,
                         double radius) {
  return segment_free(env, a, b, radius, 0.5 * env.robot_radius);
}

/// is_free / segment_free at the environment's own robot radius.
inline bool is_free(const Environment& env, Point2 p) {
  return is_free(env, p, env.robot_radius);
}
inline bool segment_free(const Environment& env, Point2 a, Point2 b) {
  return segment_free(env, a, b, env.robot_radius);
}

/// Evaluates a scalar field at p. Clearance-kind fields defer to the exact
/// clearance; synthetic fields are baseline + sum of Gaussian bumps.
inline double field_value(const Environment& env, const ScalarField& f,
                          Point2 p) {
  if (f.kind == ScalarField::Kind::Clearance) return clearance(env, p);
  double v = f.baseline;
  for (const auto& g : f.bumps) {
    const double d2 = dot(p - g.center, p - g.center);
    v += g.amplitude * std::exp(-d2 / (2.0 * g.sigma * g.sigma));
  }
  return v;
}

/// Upper bound on the field's gradient magnitude. Clearance is 1-Lipschitz;
/// a Gaussian bump's steepest slope is |a| e^{-1/2} / sigma.
inline double field_lipschitz_bound(const ScalarField& f) {
  if (f.kind == ScalarField::Kind::Clearance) return 1.0;
  double l = 0.0;
  for (const auto& g : f.bumps)
    l += std::abs(g.amplitude) * std::exp(-0.5) / g.sigma;
  return l;
}

}  // namespace skelplan
