#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skelplan/annotate.hpp"
#include "skelplan/distance_grid.hpp"
#include "skelplan/geometry.hpp"
#include "skelplan/io.hpp"
#include "skelplan/pathing.hpp"
#include "skelplan/planner.hpp"
#include "skelplan/skeleton.hpp"

namespace skelplan {

namespace detail {

inline Polygon box(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

constexpr double kEdgeEps = 1e-9;  // keeps wall vertices strictly in bounds

}  // namespace detail

/// Benchmark worlds. All use a disc robot of radius 0.5. Query endpoints sit
/// on or near the free-space medial axis so the skeleton reaches them.
///
/// walls: a central dividing wall with two openings — a narrow slit (width
/// 1.2 = 2 * radius * 1.2) on the direct start-goal line and a wide passage
/// (width 3 = 2 * radius * 3) over the top, a long detour. Both sides carry
/// combs of deep dead-end pockets opening onto the 3-wide "highway" strips
/// that flank the wall: a planner that prunes by clearance rides the
/// highways; success-rate or uniform exploration drowns in the pockets.
///
/// boxes2d: a stack of three boxes forming two comfortably passable gaps of
/// different clearance. The lower, narrower gap sits slightly closer to the
/// query line, so an unbiased planner splits between the two while a
/// clearance-biased one should consistently take the wide gap.
///
/// twotunnel: boxes-like geometry plus a synthetic energy field whose
/// Gaussian barrier sits in the middle of the geometrically wide gap: the
/// highest-clearance corridor is the highest-energy one. The wide gap is the
/// short way round; the low-energy narrow gap needs a longer detour.
inline Environment builtin_env(const std::string& name) {
  using detail::box;
  const double eps = detail::kEdgeEps;
  Environment env;
  if (name == "walls") {
    // Layout on a 1.5 lattice. A ring of 3-wide corridors (bottom strip,
    // two highway strips flanking the central wall, top strip) carries the
    // two start-goal corridors: through the slit (short) or over the wall
    // top (long). The flanking blocks are solid except for dead-end stubs
    // (1.5 wide, 6 deep) opening onto the corridors: exploration that is
    // not clearance-guided pays for every stub before it finds the way.
    env.bounds = {0, 0, 34.5, 25.5};
    env.robot_radius = 0.5;
    env.query = {{4, 1.5}, {30.5, 1.5}};
    // Central wall x in [16.5, 18] with slit y in [0.9, 2.1] on the query
    // line; wall top at y = 22.5 leaves the 3-wide top corridor.
    env.obstacles.push_back(box(16.5, eps, 18.0, 0.9));
    env.obstacles.push_back(box(16.5, 2.1, 18.0, 22.5));
    // Flanking blocks (x in [0, 13.5] and [21, 34.5], y in [3, 22.5]) as
    // 9 x 13 cell grids, cell = 1.5. Each block is solid except a carved
    // dead-end lattice: four vertical corridors (odd columns) crossed by
    // horizontal connectors on odd rows, reachable only through a single
    // mouth cell on the highway face. The lattice adds no start-goal
    // corridor; it only taxes planners that explore without a bias.
    const int kCols = 9, kRows = 13;
    const auto carved = [](int c, int r) {
      if (r >= 1 && r <= 11 && c % 2 == 1) return true;           // verticals
      if (r % 2 == 1 && r <= 11 && (c == 2 || c == 4 || c == 6))  // crossings
        return true;
      // Mouths: two per face so undirected exploration meets the lattice
      // early, from the bottom strip, the highway, and the top strip.
      if (c == 8 && (r == 3 || r == 9)) return true;
      if (r == 0 && (c == 1 || c == 5)) return true;
      if (r == 12 && (c == 3 || c == 7)) return true;
      return false;
    };
    for (int side = 0; side < 2; ++side) {
      const double x0 = side == 0 ? 0.0 : 21.0;
      const bool flip = side == 1;  // mirror so the mouth faces the highway
      for (int r = 0; r < kRows; ++r) {
        int c = 0;
        while (c < kCols) {
          if (carved(flip ? kCols - 1 - c : c, r)) {
            ++c;
            continue;
          }
          int c1 = c;
          while (c1 < kCols && !carved(flip ? kCols - 1 - c1 : c1, r)) ++c1;
          const double gx0 = std::max(x0 + 1.5 * c, eps);
          const double gx1 = std::min(x0 + 1.5 * c1, 34.5 - eps);
          env.obstacles.push_back(
              box(gx0, 3.0 + 1.5 * r, gx1, 3.0 + 1.5 * (r + 1)));
          c = c1;
        }
      }
    }
  } else if (name == "boxes2d") {
    env.bounds = {0, 0, 20, 12};
    env.robot_radius = 0.5;
    env.query = {{4.5, 6}, {15.5, 6}};
    env.obstacles.push_back(box(9, eps, 11, 3.3));
    env.obstacles.push_back(box(9, 5.7, 11, 7.5));
    env.obstacles.push_back(box(9, 10.5, 11, 12 - eps));
  } else if (name == "twotunnel") {
    env.bounds = {0, 0, 20, 12};
    env.robot_radius = 0.5;
    env.query = {{4.5, 6}, {15.5, 6}};
    env.obstacles.push_back(box(9, eps, 11, 1.4));
    env.obstacles.push_back(box(9, 3.6, 11, 5.6));
    env.obstacles.push_back(box(9, 8.6, 11, 12 - eps));
    ScalarField energy;
    energy.name = "energy";
    energy.kind = ScalarField::Kind::Synthetic;
    energy.baseline = 1.0;
    energy.bumps.push_back({{10.0, 7.1}, 5.0, 0.8});
    env.fields.push_back(energy);
  } else {
    throw std::invalid_argument("unknown builtin environment: " + name);
  }
  env.validate();
  return env;
}

/// Landmarks of the builtin worlds, for corridor-identity success criteria:
/// a probe point inside each opening of the dividing wall.
inline Point2 builtin_probe(const std::string& name, bool wide) {
  if (name == "walls") return wide ? Point2{17.25, 24.0} : Point2{17.25, 1.5};
  if (name == "boxes2d")
    return wide ? Point2{10.0, 9.0} : Point2{10.0, 4.5};
  if (name == "twotunnel")
    return wide ? Point2{10.0, 7.1} : Point2{10.0, 2.5};
  throw std::invalid_argument("unknown builtin environment: " + name);
}

struct StrategyConfig {
  Strategy strategy = Strategy::AB;
  Growth growth = Growth::RrtExtend;
  std::string metric;  // bias metric, AB only
  SelectionRule selection = SelectionRule::Softmin;

  std::string label() const {
    std::string s;
    switch (strategy) {
      case Strategy::AB: s = "ab"; break;
      case Strategy::DR: s = "dr"; break;
      case Strategy::PlainRrt: s = "rrt"; break;
      case Strategy::MaRrt: s = "ma"; break;
    }
    if (growth == Growth::RrgConnect) s += "-rrg";
    if (strategy == Strategy::AB) {
      s += ":" + metric;
      if (selection == SelectionRule::GreedyMin) s += ":greedy";
    }
    return s;
  }
};

/// Success beyond mere solving. min_clearance: path min_clearance >=
/// threshold. corridor: the path's corridor sequence visits the skeleton
/// edge nearest to `probe` (corridor identity by landmark, robust to
/// skeleton edge ids varying with resolution). worst_energy: the path's
/// worst value of `metric` <= threshold. none: success = solved.
struct SuccessCriterion {
  enum class Kind { None, MinClearance, Corridor, WorstEnergy };
  Kind kind = Kind::None;
  double threshold = 0.0;
  Point2 probe;
  std::string metric = "energy";
};

struct BenchmarkSpec {
  std::string environment;  // builtin name or environment file path
  std::vector<StrategyConfig> strategies;
  std::vector<std::uint64_t> seeds;
  double budget_ms = 10000.0;
  long max_iterations = 30000;
  double resolution = 0.0;    // <= 0 resolves to robot_radius / 2
  double p_whole_env = 0.05;  // whole-environment fallback rate per draw
  SuccessCriterion criterion;

  void validate() const {
    if (strategies.empty())
      throw std::invalid_argument("benchmark needs at least one strategy");
    if (seeds.empty())
      throw std::invalid_argument("benchmark needs at least one seed");
    if (!(budget_ms > 0.0))
      throw std::invalid_argument("benchmark budget must be positive");
    if (!(p_whole_env > 0.0 && p_whole_env <= 1.0))
      throw std::invalid_argument(
          "whole-environment fallback rate must be in (0, 1]");
    if (criterion.kind == SuccessCriterion::Kind::MinClearance ||
        criterion.kind == SuccessCriterion::Kind::WorstEnergy) {
      if (!std::isfinite(criterion.threshold))
        throw std::invalid_argument("criterion threshold must be finite");
    }
  }
};

struct BenchRow {
  std::string strategy;
  std::uint64_t seed = 0;
  double skeleton_ms = 0.0;
  double annotate_ms = 0.0;
  double plan_ms = 0.0;
  bool solved = false;
  bool success = false;
  double path_length = 0.0;
  double min_clearance = 0.0;
  double worst_energy = 0.0;
  std::vector<int> corridor;
  long iterations = 0;  // diagnostic; not part of the CSV schema
};

/// Default per-environment benchmark: the strategy lineup and success
/// criterion the acceptance protocol uses for that world.
inline BenchmarkSpec default_benchmark(const std::string& name,
                                       int seed_count) {
  if (seed_count <= 0)
    throw std::invalid_argument("seed count must be positive");
  BenchmarkSpec spec;
  spec.environment = name;
  for (int s = 0; s < seed_count; ++s)
    spec.seeds.push_back(static_cast<std::uint64_t>(s));
  spec.criterion.kind = SuccessCriterion::Kind::Corridor;
  if (name == "walls") {
    spec.strategies = {
        {Strategy::AB, Growth::RrtExtend, "clearance", SelectionRule::Softmin},
        {Strategy::DR, Growth::RrtExtend, "", SelectionRule::Softmin},
        {Strategy::PlainRrt, Growth::RrtExtend, "", SelectionRule::Softmin},
        {Strategy::MaRrt, Growth::RrtExtend, "", SelectionRule::Softmin},
    };
    // Success = solved within budget: this world separates strategies by
    // whether the iteration budget survives the dead-end lattices at all.
    // The cap sits well above the biased planner's worst observed run and
    // well below where undirected exploration typically finishes.
    spec.criterion.kind = SuccessCriterion::Kind::None;
    spec.max_iterations = 450;
  } else if (name == "boxes2d") {
    // Greedy region selection for the biased planner: corridor identity is
    // the point of this world, and greedy argmin is the sharpest version of
    // the bias. The unbiased planner keeps stochastic selection.
    spec.strategies = {
        {Strategy::AB, Growth::RrtExtend, "clearance",
         SelectionRule::GreedyMin},
        {Strategy::DR, Growth::RrtExtend, "", SelectionRule::Softmin},
    };
    spec.criterion.probe = builtin_probe(name, true);
  } else if (name == "twotunnel") {
    spec.strategies = {
        {Strategy::AB, Growth::RrgConnect, "energy",
         SelectionRule::GreedyMin},
        {Strategy::AB, Growth::RrgConnect, "clearance",
         SelectionRule::GreedyMin},
        {Strategy::DR, Growth::RrgConnect, "", SelectionRule::Softmin},
    };
    // Corridor discovery is the experiment here: keep the uniform fallback
    // rare (but positive, for completeness) so the bias decides the tunnel.
    spec.p_whole_env = 0.01;
    // Success = found the low-energy tunnel (the geometrically narrow one).
    spec.criterion.probe = builtin_probe(name, false);
  } else {
    throw std::invalid_argument("unknown builtin environment: " + name);
  }
  return spec;
}

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "ab") return Strategy::AB;
  if (s == "dr") return Strategy::DR;
  if (s == "rrt") return Strategy::PlainRrt;
  if (s == "ma") return Strategy::MaRrt;
  throw std::invalid_argument("unknown strategy: " + s);
}

inline Growth growth_from_string(const std::string& s) {
  if (s == "rrt") return Growth::RrtExtend;
  if (s == "rrg") return Growth::RrgConnect;
  throw std::invalid_argument("unknown growth mode: " + s);
}

inline SelectionRule selection_from_string(const std::string& s) {
  if (s == "greedy") return SelectionRule::GreedyMin;
  if (s == "softmin") return SelectionRule::Softmin;
  throw std::invalid_argument("unknown selection rule: " + s);
}

/// Benchmark spec file: JSON with keys environment, strategies (list of
/// {strategy, growth?, metric?, selection?}), seeds (list), budget_ms?,
/// max_iterations?, resolution?, success_criterion? ({kind, threshold?,
/// probe?, metric?}).
inline BenchmarkSpec spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spec JSON parse error: ") +
                                e.what());
  }
  BenchmarkSpec spec;
  try {
    spec.environment = j.at("environment").get<std::string>();
    for (const auto& s : j.at("strategies")) {
      StrategyConfig sc;
      sc.strategy = strategy_from_string(s.at("strategy").get<std::string>());
      sc.growth = growth_from_string(s.value("growth", "rrt"));
      sc.metric = s.value("metric", "");
      sc.selection = selection_from_string(s.value("selection", "softmin"));
      spec.strategies.push_back(sc);
    }
    for (const auto& s : j.at("seeds"))
      spec.seeds.push_back(s.get<std::uint64_t>());
    spec.budget_ms = j.value("budget_ms", 10000.0);
    spec.max_iterations = j.value("max_iterations", 30000L);
    spec.resolution = j.value("resolution", 0.0);
    spec.p_whole_env = j.value("p_whole_env", 0.05);
    if (j.contains("success_criterion")) {
      const auto& c = j.at("success_criterion");
      const std::string kind = c.at("kind").get<std::string>();
      if (kind == "min_clearance") {
        spec.criterion.kind = SuccessCriterion::Kind::MinClearance;
        spec.criterion.threshold = c.at("threshold").get<double>();
      } else if (kind == "corridor") {
        spec.criterion.kind = SuccessCriterion::Kind::Corridor;
        const auto& p = c.at("probe");
        spec.criterion.probe = {p[0].get<double>(), p[1].get<double>()};
      } else if (kind == "worst_energy") {
        spec.criterion.kind = SuccessCriterion::Kind::WorstEnergy;
        spec.criterion.threshold = c.at("threshold").get<double>();
        spec.criterion.metric = c.value("metric", "energy");
      } else if (kind == "none") {
        spec.criterion.kind = SuccessCriterion::Kind::None;
      } else {
        throw std::invalid_argument("unknown criterion kind: " + kind);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("spec JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

namespace detail {

inline int nearest_edge_id(const SkeletonGraph& sk, Point2 p) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& e : sk.edges) {
    for (std::size_t i = 1; i < e.polyline.size(); ++i) {
      const double d =
          point_segment_distance(p, e.polyline[i - 1], e.polyline[i]);
      if (d < best_d || (d == best_d && e.id < best)) {
        best_d = d;
        best = e.id;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Shared per-environment artifacts of a benchmark run: the skeleton is
/// built and annotated once and reused by every row, with both phases timed.
struct BenchContext {
  Environment env;
  DistanceGrid grid;
  SkeletonGraph skeleton;
  AnnotatedSkeleton ann;
  double skeleton_ms = 0.0;
  double annotate_ms = 0.0;
};

inline BenchContext prepare_benchmark(const BenchmarkSpec& spec) {
  BenchContext ctx;
  ctx.env = spec.environment.find('.') != std::string::npos ||
                    spec.environment.find('/') != std::string::npos
                ? load_environment(spec.environment)
                : builtin_env(spec.environment);
  const double res =
      spec.resolution > 0.0 ? spec.resolution : ctx.env.robot_radius / 2.0;

  const auto t0 = std::chrono::steady_clock::now();
  ctx.grid = distance_transform(ctx.env, res);
  ctx.skeleton = prune_spurs(extract_skeleton(ctx.grid, ctx.env),
                             2.0 * ctx.env.robot_radius, ctx.env);
  const auto t1 = std::chrono::steady_clock::now();
  std::vector<MetricSpec> metrics = {
      {"clearance", ScalarField::clearance_field(),
       MetricSense::HigherBetter}};
  for (const auto& f : ctx.env.fields)
    metrics.push_back({f.name, f, MetricSense::LowerBetter});
  ctx.ann = annotate(ctx.skeleton, ctx.env, metrics, ctx.grid.resolution);
  const auto t2 = std::chrono::steady_clock::now();
  ctx.skeleton_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  ctx.annotate_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return ctx;
}

/// Runs every (strategy, seed) pair in spec order. Per-run planner failures
/// become rows with solved=false; only setup errors (bad spec, bad
/// environment) propagate.
inline std::vector<BenchRow> run_benchmark(const BenchmarkSpec& spec) {
  spec.validate();
  const BenchContext ctx = prepare_benchmark(spec);
  const int criterion_edge =
      spec.criterion.kind == SuccessCriterion::Kind::Corridor
          ? detail::nearest_edge_id(ctx.skeleton, spec.criterion.probe)
          : -1;

  std::vector<BenchRow> rows;
  for (const auto& sc : spec.strategies) {
    for (const std::uint64_t seed : spec.seeds) {
      BenchRow row;
      row.strategy = sc.label();
      row.seed = seed;
      row.skeleton_ms = ctx.skeleton_ms;
      row.annotate_ms = ctx.annotate_ms;

      PlannerConfig cfg;
      cfg.strategy = sc.strategy;
      cfg.growth = sc.growth;
      cfg.bias_metric = sc.metric;
      cfg.selection = sc.selection;
      cfg.rng_seed = seed;
      cfg.time_budget_ms = spec.budget_ms;
      cfg.max_iterations = spec.max_iterations;
      cfg.p_whole_env = spec.p_whole_env;
      const bool guided =
          sc.strategy == Strategy::AB || sc.strategy == Strategy::DR;

      const auto t0 = std::chrono::steady_clock::now();
      try {
        const PlanResult res =
            plan(ctx.env, guided ? &ctx.ann : nullptr, ctx.env.query, cfg);
        row.plan_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        row.solved = res.stats.success;
        row.iterations = res.stats.iterations;
        if (row.solved) {
          const Path p = extract_path(res.roadmap, ctx.env.query);
          const PathScore score = score_path(p, ctx.env, ctx.ann);
          row.path_length = score.length;
          row.min_clearance = score.min_clearance;
          const auto it = score.worst.find("energy");
          row.worst_energy = it != score.worst.end() ? it->second : 0.0;
          row.corridor = score.corridor;
          switch (spec.criterion.kind) {
            case SuccessCriterion::Kind::None:
              row.success = true;
              break;
            case SuccessCriterion::Kind::MinClearance:
              row.success = row.min_clearance >= spec.criterion.threshold;
              break;
            case SuccessCriterion::Kind::Corridor:
              row.success = false;
              for (const int id : row.corridor)
                if (id == criterion_edge) row.success = true;
              break;
            case SuccessCriterion::Kind::WorstEnergy: {
              const auto wit = score.worst.find(spec.criterion.metric);
              row.success = wit != score.worst.end() &&
                            wit->second <= spec.criterion.threshold;
              break;
            }
          }
        }
      } catch (const std::exception&) {
        row.plan_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        row.solved = false;
        row.success = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

inline const char* kCsvHeader =
    "strategy,seed,skeleton_ms,annotate_ms,plan_ms,solved,success,"
    "path_length,min_clearance,worst_energy,corridor";

/// rows.csv. with_timings=false zeroes the three timing columns so repeated
/// runs of the same spec produce byte-identical files.
inline std::string rows_to_csv(const std::vector<BenchRow>& rows,
                               bool with_timings = true) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.strategy << "," << r.seed << ","
        << format_double(with_timings ? r.skeleton_ms : 0.0) << ","
        << format_double(with_timings ? r.annotate_ms : 0.0) << ","
        << format_double(with_timings ? r.plan_ms : 0.0) << ","
        << (r.solved ? "true" : "false") << ","
        << (r.success ? "true" : "false") << ","
        << format_double(r.path_length) << ","
        << format_double(r.min_clearance) << ","
        << format_double(r.worst_energy) << ",";
    for (std::size_t i = 0; i < r.corridor.size(); ++i)
      out << (i ? "|" : "") << r.corridor[i];
    out << "\n";
  }
  return out.str();
}

struct StrategySummary {
  std::string strategy;
  int runs = 0;
  int solved = 0;
  int succeeded = 0;
  double avg_skeleton_ms = 0.0, sd_skeleton_ms = 0.0;
  double avg_annotate_ms = 0.0, sd_annotate_ms = 0.0;
  double avg_plan_ms = 0.0, sd_plan_ms = 0.0;
};

/// Per-strategy means and sample standard deviations (n = 1 gives 0), in
/// first-appearance order.
inline std::vector<StrategySummary> summarize(
    const std::vector<BenchRow>& rows) {
  if (rows.empty())
    throw std::invalid_argument("cannot summarize an empty row set");
  std::vector<StrategySummary> out;
  auto group = [&](const std::string& name) -> StrategySummary& {
    for (auto& s : out)
      if (s.strategy == name) return s;
    out.push_back({});
    out.back().strategy = name;
    return out.back();
  };
  auto mean_sd = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    if (xs.size() > 1) {
      for (const double x : xs) var += (x - mean) * (x - mean);
      var /= static_cast<double>(xs.size() - 1);
    }
    return std::make_pair(mean, std::sqrt(var));
  };
  std::map<std::string, std::vector<double>> skel, annot, planms;
  for (const auto& r : rows) {
    StrategySummary& s = group(r.strategy);
    ++s.runs;
    s.solved += r.solved ? 1 : 0;
    s.succeeded += r.success ? 1 : 0;
    skel[r.strategy].push_back(r.skeleton_ms);
    annot[r.strategy].push_back(r.annotate_ms);
    planms[r.strategy].push_back(r.plan_ms);
  }
  for (auto& s : out) {
    std::tie(s.avg_skeleton_ms, s.sd_skeleton_ms) = mean_sd(skel[s.strategy]);
    std::tie(s.avg_annotate_ms, s.sd_annotate_ms) = mean_sd(annot[s.strategy]);
    std::tie(s.avg_plan_ms, s.sd_plan_ms) = mean_sd(planms[s.strategy]);
  }
  return out;
}

inline std::string summary_to_text(const std::vector<StrategySummary>& sums,
                                   bool with_timings = true) {
  std::ostringstream out;
  char line[256];
  out << "strategy                 runs  solved  success   success%   "
         "skeleton_ms (avg/sd)   annotate_ms (avg/sd)   plan_ms (avg/sd)\n";
  for (const auto& s : sums) {
    const double pct =
        s.runs > 0 ? 100.0 * s.succeeded / static_cast<double>(s.runs) : 0.0;
    std::snprintf(line, sizeof(line),
                  "%-24s %4d  %6d  %7d  %8.1f   %9.2f / %-8.2f   %9.2f / "
                  "%-8.2f   %9.2f / %-8.2f\n",
                  s.strategy.c_str(), s.runs, s.solved, s.succeeded, pct,
                  with_timings ? s.avg_skeleton_ms : 0.0,
                  with_timings ? s.sd_skeleton_ms : 0.0,
                  with_timings ? s.avg_annotate_ms : 0.0,
                  with_timings ? s.sd_annotate_ms : 0.0,
                  with_timings ? s.avg_plan_ms : 0.0,
                  with_timings ? s.sd_plan_ms : 0.0);
    out << line;
  }
  return out.str();
}

}  // namespace skelplan
