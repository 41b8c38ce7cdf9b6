#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skelplan/bench.hpp"
#include "skelplan/io.hpp"
#include "skelplan/svg.hpp"

namespace skelplan {

namespace cli_detail {

/// Resolves a user-supplied output path. Relative paths are placed under
/// $SKELPLAN_OUT_DIR when that variable is set; absolute paths and the
/// default (unset variable) pass through unchanged.
inline std::string out_path(const std::string& value) {
  const char* dir = std::getenv("SKELPLAN_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return value;
  const std::filesystem::path p(value);
  if (p.is_absolute()) return value;
  return (std::filesystem::path(dir) / p).string();
}

inline void ensure_parent_dir(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

struct EnvArgs {
  std::string file;
  std::string builtin;

  Environment load() const {
    if (!file.empty()) return load_environment(file);
    return builtin_env(builtin);
  }
};

/// Registers the shared --env/--builtin pair on a subcommand; exactly one
/// of the two must be given.
inline void add_env_options(CLI::App* sub, EnvArgs& args) {
  auto* env = sub->add_option("--env", args.file,
                              "Environment JSON file (see docs/format notes)");
  auto* builtin =
      sub->add_option("--builtin", args.builtin,
                      "Builtin environment: walls, boxes2d or twotunnel")
          ->check(CLI::IsMember({"walls", "boxes2d", "twotunnel"}));
  env->excludes(builtin);
  builtin->excludes(env);
  sub->callback([env, builtin]() {
    if (env->count() == 0 && builtin->count() == 0)
      throw CLI::RequiredError("--env or --builtin");
  });
}

struct Pipeline {
  Environment env;
  DistanceGrid grid;
  SkeletonGraph skeleton;
  AnnotatedSkeleton ann;
  double skeleton_ms = 0.0;
  double annotate_ms = 0.0;
};

inline Pipeline build_pipeline(const Environment& env, double resolution) {
  Pipeline p;
  p.env = env;
  const double res = resolution > 0.0 ? resolution : env.robot_radius / 2.0;
  const auto t0 = std::chrono::steady_clock::now();
  p.grid = distance_transform(p.env, res);
  p.skeleton = prune_spurs(extract_skeleton(p.grid, p.env),
                           2.0 * p.env.robot_radius, p.env);
  const auto t1 = std::chrono::steady_clock::now();
  std::vector<MetricSpec> metrics = {
      {"clearance", ScalarField::clearance_field(),
       MetricSense::HigherBetter}};
  for (const auto& f : p.env.fields)
    metrics.push_back({f.name, f, MetricSense::LowerBetter});
  p.ann = annotate(p.skeleton, p.env, metrics, p.grid.resolution);
  const auto t2 = std::chrono::steady_clock::now();
  p.skeleton_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  p.annotate_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return p;
}

struct PlanArgs {
  EnvArgs env;
  std::string strategy = "ab";
  std::string growth = "rrt";
  std::string metric = "clearance";
  std::string selection = "softmin";
  std::uint64_t seed = 0;
  double budget_ms = 10000.0;
  long max_iters = 30000;
  double p_whole_env = 0.05;
  double resolution = 0.0;
};

/// Registers every planning flag shared by `plan` and `plot`.
inline void add_plan_options(CLI::App* sub, PlanArgs& args) {
  add_env_options(sub, args.env);
  sub->add_option("--strategy", args.strategy,
                  "Planner: ab (annotation-biased), dr (success-rate biased), "
                  "rrt (uniform), ma (medial-axis retraction)")
      ->check(CLI::IsMember({"ab", "dr", "rrt", "ma"}));
  sub->add_option("--growth", args.growth, "Roadmap growth: rrt (tree) or rrg")
      ->check(CLI::IsMember({"rrt", "rrg"}));
  sub->add_option("--metric", args.metric,
                  "Bias metric for the ab strategy (clearance or a field "
                  "name from the environment)");
  sub->add_option("--selection", args.selection,
                  "Region selection rule for ab/dr: greedy or softmin")
      ->check(CLI::IsMember({"greedy", "softmin"}));
  sub->add_option("--seed", args.seed, "RNG seed; runs are reproducible");
  sub->add_option("--budget-ms", args.budget_ms,
                  "Wall-clock budget per run in milliseconds")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-iters", args.max_iters,
                  "Iteration cap per run (the deterministic budget)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--p-whole-env", args.p_whole_env,
                  "Whole-environment fallback sampling rate, in (0, 1]");
  sub->add_option("--resolution", args.resolution,
                  "Distance-grid cell size (default: robot_radius / 2)");
}

inline PlannerConfig planner_config(const PlanArgs& a) {
  PlannerConfig cfg;
  cfg.strategy = strategy_from_string(a.strategy);
  cfg.growth = growth_from_string(a.growth);
  cfg.bias_metric = a.metric;
  cfg.selection = selection_from_string(a.selection);
  cfg.rng_seed = a.seed;
  cfg.time_budget_ms = a.budget_ms;
  cfg.max_iterations = a.max_iters;
  cfg.p_whole_env = a.p_whole_env;
  return cfg;
}

}  // namespace cli_detail

/// Entry point of the `skelplan` tool. Arguments exclude the program name.
/// Exit codes: 0 success, 1 planner found no path, 2 usage or input error.
inline int run_cli(const std::vector<std::string>& args) {
  using namespace cli_detail;

  CLI::App app{
      "skelplan: skeleton-annotated sampling-based motion planning.\n"
      "Relative --out paths honor $SKELPLAN_OUT_DIR as the output root.\n"
      "Exit codes: 0 success, 1 no path found, 2 usage or input error."};
  app.name("skelplan");
  app.require_subcommand(1);

  // skeletonize
  EnvArgs sk_env;
  double sk_resolution = 0.0;
  std::string sk_out = "skelplan_out";
  auto* sk = app.add_subcommand(
      "skeletonize", "Extract the workspace skeleton and write it as text");
  add_env_options(sk, sk_env);
  sk->add_option("--resolution", sk_resolution,
                 "Distance-grid cell size (default: robot_radius / 2)");
  sk->add_option("--out", sk_out,
                 "Output prefix; writes PREFIX.skeleton.txt");

  // annotate
  EnvArgs an_env;
  double an_resolution = 0.0;
  std::string an_out = "skelplan_out";
  auto* an = app.add_subcommand(
      "annotate",
      "Skeletonize, then annotate every edge with per-metric bottlenecks");
  add_env_options(an, an_env);
  an->add_option("--resolution", an_resolution,
                 "Distance-grid cell size (default: robot_radius / 2)");
  an->add_option("--out", an_out,
                 "Output prefix; writes PREFIX.annotated.txt");

  // plan
  PlanArgs plan_args;
  std::string plan_out = "skelplan_out";
  auto* pl = app.add_subcommand(
      "plan", "Run one seeded planning query and write roadmap, stats, path");
  add_plan_options(pl, plan_args);
  pl->add_option("--out", plan_out,
                 "Output prefix; writes PREFIX.roadmap.txt, PREFIX.stats.txt "
                 "and, on success, PREFIX.path.txt");

  // bench
  std::string bench_spec_file;
  std::string bench_builtin;
  int bench_seeds = 10;
  std::string bench_out = ".";
  bool bench_no_timings = false;
  auto* be = app.add_subcommand(
      "bench", "Run a benchmark matrix and write rows.csv plus summary.txt");
  auto* be_spec =
      be->add_option("--spec", bench_spec_file, "Benchmark spec JSON file");
  auto* be_builtin =
      be->add_option("--builtin", bench_builtin,
                     "Builtin benchmark: walls, boxes2d or twotunnel")
          ->check(CLI::IsMember({"walls", "boxes2d", "twotunnel"}));
  be_spec->excludes(be_builtin);
  be_builtin->excludes(be_spec);
  be->add_option("--seeds", bench_seeds,
                 "Seed count 0..N-1 for --builtin (a spec file carries its "
                 "own seed list)")
      ->check(CLI::PositiveNumber);
  be->add_option("--out", bench_out, "Output directory");
  be->add_flag("--no-timings", bench_no_timings,
               "Zero the timing columns so repeated runs are byte-identical");
  be->callback([be_spec, be_builtin]() {
    if (be_spec->count() == 0 && be_builtin->count() == 0)
      throw CLI::RequiredError("--spec or --builtin");
  });

  // plot
  PlanArgs plot_args;
  std::string plot_out = "plot.svg";
  bool plot_skeleton = false, plot_regions = false, plot_roadmap = false,
       plot_path = false;
  int plot_canvas = 800;
  std::string plot_metric;
  auto* po = app.add_subcommand(
      "plot", "Render environment and pipeline layers as an SVG figure");
  add_plan_options(po, plot_args);
  po->add_flag("--skeleton", plot_skeleton,
               "Draw the skeleton (colored by --plot-metric if given)");
  po->add_flag("--regions", plot_regions,
               "Draw the final sampling regions (runs the planner)");
  po->add_flag("--roadmap", plot_roadmap,
               "Draw the grown roadmap (runs the planner)");
  po->add_flag("--path", plot_path,
               "Draw the extracted path (runs the planner)");
  po->add_option("--plot-metric", plot_metric,
                 "Annotation metric for skeleton stroke colors");
  po->add_option("--canvas", plot_canvas, "Longer canvas side in pixels")
      ->check(CLI::PositiveNumber);
  po->add_option("--out", plot_out, "Output SVG file");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("skelplan");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the diagnostic
    return 2;
  }

  try {
    if (sk->parsed()) {
      const Pipeline p =
          build_pipeline(sk_env.load(), sk_resolution);
      const std::string path = out_path(sk_out) + ".skeleton.txt";
      ensure_parent_dir(path);
      write_file(path, serialize_skeleton(p.skeleton));
      std::cout << "skeleton: " << p.skeleton.vertices.size() << " vertices, "
                << p.skeleton.edges.size() << " edges ("
                << format_double(p.skeleton_ms) << " ms) -> " << path << "\n";
      return 0;
    }

    if (an->parsed()) {
      const Pipeline p =
          build_pipeline(an_env.load(), an_resolution);
      const std::string path = out_path(an_out) + ".annotated.txt";
      ensure_parent_dir(path);
      write_file(path, serialize_annotated(p.ann));
      std::cout << "annotated: " << p.ann.metrics.size() << " metrics over "
                << p.skeleton.edges.size() << " edges ("
                << format_double(p.annotate_ms) << " ms) -> " << path << "\n";
      return 0;
    }

    if (pl->parsed()) {
      const Environment env = plan_args.env.load();
      const PlannerConfig cfg = planner_config(plan_args);
      const bool guided =
          cfg.strategy == Strategy::AB || cfg.strategy == Strategy::DR;
      Pipeline p;
      if (guided) p = build_pipeline(env, plan_args.resolution);
      const PlanResult res =
          plan(env, guided ? &p.ann : nullptr, env.query, cfg);

      const std::string prefix = out_path(plan_out);
      ensure_parent_dir(prefix + ".stats.txt");
      write_file(prefix + ".roadmap.txt", serialize_roadmap(res.roadmap));
      write_file(prefix + ".stats.txt",
                 serialize_stats(res.stats, res.roadmap));
      if (res.stats.success) {
        const Path path = extract_path(res.roadmap, env.query);
        const PathScore score = score_path(path, env, p.ann);
        write_file(prefix + ".path.txt", serialize_path(path, score));
        std::cout << "path found: " << res.stats.iterations << " iterations, "
                  << "length " << format_double(score.length) << " -> "
                  << prefix << ".path.txt\n";
        return 0;
      }
      std::cout << "no path within budget (" << res.stats.iterations
                << " iterations); partial roadmap and stats written to "
                << prefix << ".*\n";
      return 1;
    }

    if (be->parsed()) {
      BenchmarkSpec spec =
          bench_spec_file.empty()
              ? default_benchmark(bench_builtin, bench_seeds)
              : spec_from_json(read_file(bench_spec_file));
      const std::vector<BenchRow> rows = run_benchmark(spec);
      const auto sums = summarize(rows);

      const std::filesystem::path dir(out_path(bench_out));
      std::filesystem::create_directories(dir);
      write_file((dir / "rows.csv").string(),
                 rows_to_csv(rows, !bench_no_timings));
      const std::string summary = summary_to_text(sums, !bench_no_timings);
      write_file((dir / "summary.txt").string(), summary);
      std::cout << summary;
      return 0;
    }

    // plot
    const Environment env = plot_args.env.load();
    const bool needs_plan = plot_regions || plot_roadmap || plot_path;
    const bool needs_skeleton = plot_skeleton || needs_plan;
    Pipeline p;
    if (needs_skeleton) p = build_pipeline(env, plot_args.resolution);

    PlanResult res;
    Path path;
    bool planned_ok = true;
    if (needs_plan) {
      const PlannerConfig cfg = planner_config(plot_args);
      const bool guided =
          cfg.strategy == Strategy::AB || cfg.strategy == Strategy::DR;
      res = plan(env, guided ? &p.ann : nullptr, env.query, cfg);
      planned_ok = res.stats.success;
      if (planned_ok) path = extract_path(res.roadmap, env.query);
    }

    RenderSpec spec;
    spec.skeleton = plot_skeleton;
    spec.regions = plot_regions;
    spec.roadmap = plot_roadmap;
    spec.path = plot_path && planned_ok;
    spec.metric = plot_metric;
    spec.canvas_px = plot_canvas;
    const std::string svg = render_svg(
        env, needs_skeleton ? &p.skeleton : nullptr,
        needs_skeleton ? &p.ann : nullptr,
        needs_plan ? &res.final_regions : nullptr,
        needs_plan ? &res.roadmap : nullptr,
        spec.path ? &path : nullptr, spec);
    const std::string out = out_path(plot_out);
    ensure_parent_dir(out);
    write_file(out, svg);
    if (plot_path && !planned_ok) {
      std::cout << "no path within budget; figure written without the path "
                << "layer -> " << out << "\n";
      return 1;
    }
    std::cout << "figure -> " << out << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "skelplan: " << e.what() << "\n";
    return 2;
  }
}

inline int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace skelplan
