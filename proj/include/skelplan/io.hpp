#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "skelplan/annotate.hpp"
#include "skelplan/geometry.hpp"
#include "skelplan/pathing.hpp"
#include "skelplan/planner.hpp"
#include "skelplan/skeleton.hpp"

namespace skelplan {

/// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// Environment files: JSON with keys bounds, robot_radius, obstacles, query,
// and optional fields (synthetic scalar surfaces).

inline Environment env_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("environment JSON parse error: ") +
                                e.what());
  }
  auto point = [](const nlohmann::json& a) -> Point2 {
    if (!a.is_array() || a.size() != 2)
      throw std::invalid_argument("expected [x, y] point");
    return {a[0].get<double>(), a[1].get<double>()};
  };
  Environment env;
  try {
    const auto& b = j.at("bounds");
    if (!b.is_array() || b.size() != 4)
      throw std::invalid_argument("bounds must be [xmin, ymin, xmax, ymax]");
    env.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                  b[3].get<double>()};
    env.robot_radius = j.at("robot_radius").get<double>();
    for (const auto& poly : j.value("obstacles", nlohmann::json::array())) {
      std::vector<Point2> verts;
      for (const auto& v : poly) verts.push_back(point(v));
      env.obstacles.push_back(Polygon(verts));
    }
    env.query.start = point(j.at("query").at("start"));
    env.query.goal = point(j.at("query").at("goal"));
    for (const auto& f : j.value("fields", nlohmann::json::array())) {
      ScalarField field;
      field.name = f.at("name").get<std::string>();
      field.kind = ScalarField::Kind::Synthetic;
      field.baseline = f.value("baseline", 0.0);
      for (const auto& g : f.value("gaussians", nlohmann::json::array())) {
        GaussianBump bump;
        bump.center = {g.at("cx").get<double>(), g.at("cy").get<double>()};
        bump.amplitude = g.at("amplitude").get<double>();
        bump.sigma = g.at("sigma").get<double>();
        field.bumps.push_back(bump);
      }
      env.fields.push_back(field);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("environment JSON: ") + e.what());
  }
  env.validate();
  return env;
}

inline std::string env_to_json(const Environment& env) {
  nlohmann::ordered_json j;
  j["bounds"] = {env.bounds.xmin, env.bounds.ymin, env.bounds.xmax,
                 env.bounds.ymax};
  j["robot_radius"] = env.robot_radius;
  j["obstacles"] = nlohmann::ordered_json::array();
  for (const auto& ob : env.obstacles) {
    nlohmann::ordered_json poly = nlohmann::ordered_json::array();
    for (const Point2 v : ob.vertices) poly.push_back({v.x, v.y});
    j["obstacles"].push_back(poly);
  }
  j["query"] = {{"start", {env.query.start.x, env.query.start.y}},
                {"goal", {env.query.goal.x, env.query.goal.y}}};
  if (!env.fields.empty()) {
    j["fields"] = nlohmann::ordered_json::array();
    for (const auto& f : env.fields) {
      nlohmann::ordered_json jf;
      jf["name"] = f.name;
      jf["baseline"] = f.baseline;
      jf["gaussians"] = nlohmann::ordered_json::array();
      for (const auto& g : f.bumps)
        jf["gaussians"].push_back({{"cx", g.center.x},
                                   {"cy", g.center.y},
                                   {"amplitude", g.amplitude},
                                   {"sigma", g.sigma}});
      j["fields"].push_back(jf);
    }
  }
  return j.dump(2) + "\n";
}

inline Environment load_environment(const std::string& path) {
  return env_from_json(read_file(path));
}

inline void save_environment(const Environment& env, const std::string& path) {
  write_file(path, env_to_json(env));
}

// ---------------------------------------------------------------------------
// Plain-text serializations. Field order is fixed so identical inputs give
// byte-identical files.

inline std::string serialize_skeleton(const SkeletonGraph& sk) {
  std::ostringstream out;
  out << "skeleton\n";
  out << "vertices " << sk.vertices.size() << "\n";
  for (const auto& v : sk.vertices)
    out << "v " << v.id << " " << format_double(v.position.x) << " "
        << format_double(v.position.y) << " " << v.degree << "\n";
  out << "edges " << sk.edges.size() << "\n";
  for (const auto& e : sk.edges) {
    out << "e " << e.id << " " << e.v0 << " " << e.v1 << " "
        << format_double(e.length) << " " << e.polyline.size() << "\n";
    for (std::size_t i = 0; i < e.polyline.size(); ++i)
      out << "p " << format_double(e.polyline[i].x) << " "
          << format_double(e.polyline[i].y) << " "
          << format_double(e.clearances[i]) << "\n";
  }
  return out.str();
}

/// Skeleton followed by metric declarations and per-edge bottleneck triples.
inline std::string serialize_annotated(const AnnotatedSkeleton& ann) {
  std::ostringstream out;
  out << serialize_skeleton(ann.graph);
  out << "metrics " << ann.metrics.size() << "\n";
  for (const auto& m : ann.metrics) {
    out << "metric " << m.name << " "
        << (m.sense == MetricSense::HigherBetter ? "higher_better"
                                                 : "lower_better")
        << " "
        << (m.field.kind == ScalarField::Kind::Clearance ? "clearance"
                                                         : "synthetic");
    if (m.field.kind == ScalarField::Kind::Synthetic) {
      out << " " << format_double(m.field.baseline) << " "
          << m.field.bumps.size();
      for (const auto& g : m.field.bumps)
        out << " " << format_double(g.center.x) << " "
            << format_double(g.center.y) << " " << format_double(g.amplitude)
            << " " << format_double(g.sigma);
    }
    out << "\n";
  }
  out << "annotations " << ann.edge_values.size() << "\n";
  for (const auto& [key, value] : ann.edge_values)
    out << "a " << key.first << " " << key.second << " "
        << format_double(value) << "\n";
  return out.str();
}

inline std::string serialize_roadmap(const Roadmap& rm) {
  std::ostringstream out;
  out << "roadmap " << (rm.mode == Roadmap::Mode::Tree ? "tree" : "graph")
      << "\n";
  out << "nodes " << rm.nodes.size() << "\n";
  for (const auto& n : rm.nodes)
    out << "n " << n.id << " " << format_double(n.position.x) << " "
        << format_double(n.position.y) << " " << n.parent << "\n";
  out << "edges " << rm.edges.size() << "\n";
  for (const auto& e : rm.edges)
    out << "e " << e.a << " " << e.b << " " << format_double(e.length)
        << "\n";
  return out.str();
}

/// key=value lines. wall_ms varies run to run; everything else is
/// reproducible from the inputs and seed.
inline std::string serialize_stats(const PlanStats& stats, const Roadmap& rm) {
  std::ostringstream out;
  out << "iterations=" << stats.iterations << "\n";
  out << "nodes=" << rm.nodes.size() << "\n";
  out << "edges=" << rm.edges.size() << "\n";
  out << "wall_ms=" << format_double(stats.wall_ms) << "\n";
  out << "success=" << (stats.success ? "true" : "false") << "\n";
  out << "goal_node=" << stats.goal_node << "\n";
  out << "whole_env_selections=" << stats.whole_env_selections << "\n";
  out << "first_visit_order=";
  for (std::size_t i = 0; i < stats.first_visit_order.size(); ++i)
    out << (i ? "," : "") << stats.first_visit_order[i];
  out << "\n";
  return out.str();
}

inline std::string serialize_path(const Path& p, const PathScore& score) {
  std::ostringstream out;
  out << "path " << p.waypoints.size() << "\n";
  for (const Point2 w : p.waypoints)
    out << "w " << format_double(w.x) << " " << format_double(w.y) << "\n";
  out << "score\n";
  out << "length=" << format_double(score.length) << "\n";
  out << "min_clearance=" << format_double(score.min_clearance) << "\n";
  for (const auto& [name, value] : score.worst)
    out << "worst_" << name << "=" << format_double(value) << "\n";
  out << "corridor=";
  for (std::size_t i = 0; i < score.corridor.size(); ++i)
    out << (i ? "," : "") << score.corridor[i];
  out << "\n";
  return out.str();
}

}  // namespace skelplan
