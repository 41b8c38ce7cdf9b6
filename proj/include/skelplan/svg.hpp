#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skelplan/annotate.hpp"
#include "skelplan/geometry.hpp"
#include "skelplan/pathing.hpp"
#include "skelplan/planner.hpp"
#include "skelplan/skeleton.hpp"

namespace skelplan {

struct Rgb {
  int r = 0, g = 0, b = 0;
};

/// Maps a normalized edge cost (kCostFloor = best .. 1 = worst) onto the
/// green -> yellow -> red gradient used for annotated skeleton strokes.
inline Rgb cost_color(double cost) {
  double t = (cost - kCostFloor) / (1.0 - kCostFloor);
  t = std::min(1.0, std::max(0.0, t));
  auto mix = [](int a, int b, double u) {
    return static_cast<int>(a + (b - a) * u + 0.5);
  };
  const Rgb green{0, 160, 0}, yellow{235, 200, 0}, red{210, 0, 0};
  if (t < 0.5) {
    const double u = t / 0.5;
    return {mix(green.r, yellow.r, u), mix(green.g, yellow.g, u),
            mix(green.b, yellow.b, u)};
  }
  const double u = (t - 0.5) / 0.5;
  return {mix(yellow.r, red.r, u), mix(yellow.g, red.g, u),
          mix(yellow.b, red.b, u)};
}

inline std::string rgb_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

/// Which layers to draw and how. The metric selects the annotation color
/// map; canvas_px is the longer canvas side in pixels.
struct RenderSpec {
  bool environment = true;
  bool skeleton = false;
  bool regions = false;
  bool roadmap = false;
  bool path = false;
  std::string metric;
  int canvas_px = 800;
};

/// Renders the requested layers as a standalone SVG 1.1 document. Inputs not
/// covered by a requested layer may be null; a requested layer with a null
/// input throws std::invalid_argument. Identical inputs produce identical
/// bytes.
inline std::string render_svg(const Environment& env, const SkeletonGraph* sk,
                              const AnnotatedSkeleton* ann,
                              const std::vector<Region>* regions,
                              const Roadmap* rm, const Path* path,
                              const RenderSpec& spec) {
  if (!(spec.environment || spec.skeleton || spec.regions || spec.roadmap ||
        spec.path))
    throw std::invalid_argument("render spec selects no layers");
  if (spec.skeleton && sk == nullptr && ann == nullptr)
    throw std::invalid_argument("skeleton layer requested without a skeleton");
  if (spec.regions && regions == nullptr)
    throw std::invalid_argument("regions layer requested without regions");
  if (spec.roadmap && rm == nullptr)
    throw std::invalid_argument("roadmap layer requested without a roadmap");
  if (spec.path && path == nullptr)
    throw std::invalid_argument("path layer requested without a path");
  if (spec.canvas_px < 16)
    throw std::invalid_argument("canvas size too small");

  const double ww = env.bounds.width(), wh = env.bounds.height();
  const double scale = spec.canvas_px / std::max(ww, wh);
  const int cw = static_cast<int>(ww * scale + 0.5);
  const int ch = static_cast<int>(wh * scale + 0.5);
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  auto X = [&](double x) { return fmt((x - env.bounds.xmin) * scale); };
  auto Y = [&](double y) { return fmt((env.bounds.ymax - y) * scale); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << cw << "\" height=\"" << ch << "\" viewBox=\"0 0 " << cw << " " << ch
      << "\">\n";

  if (spec.environment) {
    out << "<g id=\"environment\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << cw << "\" height=\"" << ch
        << "\" fill=\"#ffffff\" stroke=\"#303030\" stroke-width=\"2\"/>\n";
    for (const auto& ob : env.obstacles) {
      out << "<polygon points=\"";
      for (std::size_t i = 0; i < ob.vertices.size(); ++i)
        out << (i ? " " : "") << X(ob.vertices[i].x) << ","
            << Y(ob.vertices[i].y);
      out << "\" fill=\"#8a8a8a\" stroke=\"#505050\" stroke-width=\"1\"/>\n";
    }
    const double qr = std::max(3.0, env.robot_radius * scale);
    out << "<circle cx=\"" << X(env.query.start.x) << "\" cy=\""
        << Y(env.query.start.y) << "\" r=\"" << fmt(qr)
        << "\" fill=\"#1060d0\" fill-opacity=\"0.8\"/>\n";
    out << "<circle cx=\"" << X(env.query.goal.x) << "\" cy=\""
        << Y(env.query.goal.y) << "\" r=\"" << fmt(qr)
        << "\" fill=\"#9020c0\" fill-opacity=\"0.8\"/>\n";
    out << "</g>\n";
  }

  if (spec.skeleton) {
    const SkeletonGraph& graph = ann != nullptr ? ann->graph : *sk;
    out << "<g id=\"skeleton\" fill=\"none\" stroke-width=\"3\" "
           "stroke-linecap=\"round\">\n";
    for (const auto& e : graph.edges) {
      std::string color = "#707070";
      if (ann != nullptr && !spec.metric.empty())
        color = rgb_hex(cost_color(edge_cost(*ann, e.id, spec.metric)));
      out << "<polyline stroke=\"" << color << "\" points=\"";
      for (std::size_t i = 0; i < e.polyline.size(); ++i)
        out << (i ? " " : "") << X(e.polyline[i].x) << ","
            << Y(e.polyline[i].y);
      out << "\"/>\n";
    }
    for (const auto& v : graph.vertices)
      out << "<circle cx=\"" << X(v.position.x) << "\" cy=\""
          << Y(v.position.y) << "\" r=\"4\" fill=\"#404040\"/>\n";
    out << "</g>\n";
  }

  if (spec.regions) {
    out << "<g id=\"regions\" fill=\"#20a0ff\" fill-opacity=\"0.35\" "
           "stroke=\"#1070c0\" stroke-width=\"1\">\n";
    for (const auto& r : *regions)
      out << "<circle cx=\"" << X(r.center.x) << "\" cy=\"" << Y(r.center.y)
          << "\" r=\"" << fmt(r.radius * scale) << "\"/>\n";
    out << "</g>\n";
  }

  if (spec.roadmap) {
    out << "<g id=\"roadmap\" stroke=\"#e08020\" stroke-width=\"1\" "
           "stroke-opacity=\"0.7\">\n";
    for (const auto& e : rm->edges) {
      const Point2 a = rm->nodes[static_cast<std::size_t>(e.a)].position;
      const Point2 b = rm->nodes[static_cast<std::size_t>(e.b)].position;
      out << "<line x1=\"" << X(a.x) << "\" y1=\"" << Y(a.y) << "\" x2=\""
          << X(b.x) << "\" y2=\"" << Y(b.y) << "\"/>\n";
    }
    out << "</g>\n";
  }

  if (spec.path) {
    out << "<g id=\"path\">\n<polyline fill=\"none\" stroke=\"#d01060\" "
           "stroke-width=\"3.5\" stroke-linecap=\"round\" points=\"";
    for (std::size_t i = 0; i < path->waypoints.size(); ++i)
      out << (i ? " " : "") << X(path->waypoints[i].x) << ","
          << Y(path->waypoints[i].y);
    out << "\"/>\n</g>\n";
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace skelplan
