#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skelplan/geometry.hpp"
#include "skelplan/skeleton.hpp"

namespace skelplan {

enum class MetricSense { HigherBetter, LowerBetter };

/// One scored property: a scalar field plus the direction that makes a value
/// desirable. The per-edge bottleneck is the min of the field along the edge
/// when higher is better, the max when lower is better.
struct MetricSpec {
  std::string name;
  ScalarField field;
  MetricSense sense = MetricSense::HigherBetter;
};

/// Cost floor for normalized edge costs: the globally best edge gets this
/// instead of 0 so probabilistic selection never starves it to a certainty.
inline constexpr double kCostFloor = 0.05;

struct AnnotatedSkeleton {
  SkeletonGraph graph;
  std::vector<MetricSpec> metrics;
  // (edge id, metric name) -> bottleneck value of the field on the edge.
  std::map<std::pair<int, std::string>, double> edge_values;
  // Per metric: [min, max] bottleneck over all edges, for cost normalization.
  std::map<std::string, std::pair<double, double>> value_range;
  double min_edge_length = 0.0;

  const MetricSpec* find_metric(const std::string& name) const {
    for (const auto& m : metrics)
      if (m.name == name) return &m;
    return nullptr;
  }

  double bottleneck(int edge_id, const std::string& metric) const {
    const auto it = edge_values.find({edge_id, metric});
    if (it == edge_values.end())
      throw std::invalid_argument("no bottleneck for edge " +
                                  std::to_string(edge_id) + ", metric '" +
                                  metric + "'");
    return it->second;
  }
};

/// Samples each edge's polyline (every stored point plus interpolated points
/// spaced at most max_spacing apart) and records the per-metric bottleneck.
/// Values depend only on the environment and fields, never on robot_radius:
/// clearance-kind metrics reuse the exact clearances stored on the skeleton.
inline AnnotatedSkeleton annotate(const SkeletonGraph& sk,
                                  const Environment& env,
                                  const std::vector<MetricSpec>& metrics,
                                  double max_spacing) {
  if (sk.edges.empty())
    throw std::invalid_argument("cannot annotate an empty skeleton");
  if (!(max_spacing > 0.0))
    throw std::invalid_argument("annotation sample spacing must be positive");
  for (std::size_t i = 0; i < metrics.size(); ++i)
    for (std::size_t j = i + 1; j < metrics.size(); ++j)
      if (metrics[i].name == metrics[j].name)
        throw std::invalid_argument("duplicate metric name '" +
                                    metrics[i].name + "'");

  AnnotatedSkeleton ann;
  ann.graph = sk;
  ann.metrics = metrics;

  ann.min_edge_length = std::numeric_limits<double>::infinity();
  for (const auto& e : sk.edges)
    ann.min_edge_length = std::min(ann.min_edge_length, e.length);
  if (!(ann.min_edge_length > 0.0))
    throw std::domain_error("skeleton edge with non-positive length");

  for (const auto& m : metrics) {
    const bool is_clearance = m.field.kind == ScalarField::Kind::Clearance;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (const auto& e : sk.edges) {
      double best = m.sense == MetricSense::HigherBetter
                        ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
      auto take = [&](double v) {
        best = m.sense == MetricSense::HigherBetter ? std::min(best, v)
                                                    : std::max(best, v);
      };
      for (std::size_t i = 0; i < e.polyline.size(); ++i) {
        take(is_clearance ? e.clearances[i]
                          : field_value(env, m.field, e.polyline[i]));
        if (i + 1 == e.polyline.size()) continue;
        const Point2 a = e.polyline[i], b = e.polyline[i + 1];
        const double seg = distance(a, b);
        const int n = static_cast<int>(std::ceil(seg / max_spacing));
        for (int j = 1; j < n; ++j) {
          const Point2 p = lerp(a, b, static_cast<double>(j) / n);
          take(is_clearance ? clearance(env, p) : field_value(env, m.field, p));
        }
      }
      ann.edge_values[{e.id, m.name}] = best;
      vmin = std::min(vmin, best);
      vmax = std::max(vmax, best);
    }
    ann.value_range[m.name] = {vmin, vmax};
  }
  return ann;
}

/// Normalizes an edge's bottleneck into a selection cost in [kCostFloor, 1],
/// smaller meaning more desirable. A degenerate value range (all edges equal)
/// maps every edge to 1.0: no information, no bias.
inline double edge_cost(const AnnotatedSkeleton& ann, int edge_id,
                        const std::string& metric) {
  const MetricSpec* m = ann.find_metric(metric);
  if (m == nullptr)
    throw std::invalid_argument("metric '" + metric + "' is not registered");
  const double v = ann.bottleneck(edge_id, metric);
  const auto [vmin, vmax] = ann.value_range.at(metric);
  const double span = vmax - vmin;
  if (!(span > 1e-12 * std::max(1.0, std::abs(vmax)))) return 1.0;
  const double t = (v - vmin) / span;
  const double badness = m->sense == MetricSense::HigherBetter ? 1.0 - t : t;
  return kCostFloor + (1.0 - kCostFloor) * badness;
}

}  // namespace skelplan
