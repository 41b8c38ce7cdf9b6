#include <catch2/catch_amalgamated.hpp>

#include "skelplan/bench.hpp"
#include "skelplan/svg.hpp"

using namespace skelplan;

namespace {

int count_occurrences(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("cost colors run green to red and clamp", "[svg]") {
  const Rgb best = cost_color(kCostFloor);
  const Rgb worst = cost_color(1.0);
  CHECK(best.g > best.r);
  CHECK(best.b == 0);
  CHECK(worst.r > worst.g);

  // Monotone: more costly edges never look greener. The green channel alone
  // is not monotone across the yellow midpoint, so compare green minus red.
  int prev = 1 << 20;
  for (double c = kCostFloor; c <= 1.0; c += 0.05) {
    const Rgb rgb = cost_color(c);
    CHECK(rgb.g - rgb.r <= prev);
    prev = rgb.g - rgb.r;
  }
  // Out-of-range inputs clamp instead of wrapping.
  CHECK(rgb_hex(cost_color(-5.0)) == rgb_hex(cost_color(kCostFloor)));
  CHECK(rgb_hex(cost_color(7.0)) == rgb_hex(cost_color(1.0)));
  CHECK(rgb_hex({0, 160, 0}) == "#00a000");
}

TEST_CASE("environment-only render is deterministic and complete", "[svg]") {
  const Environment env = builtin_env("boxes2d");
  RenderSpec spec;
  const std::string svg =
      render_svg(env, nullptr, nullptr, nullptr, nullptr, nullptr, spec);
  CHECK(svg ==
        render_svg(env, nullptr, nullptr, nullptr, nullptr, nullptr, spec));

  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") !=
        std::string::npos);
  CHECK(count_occurrences(svg, "<polygon") ==
        static_cast<int>(env.obstacles.size()));
  CHECK(count_occurrences(svg, "<circle") == 2);  // start and goal markers
  CHECK(svg.find("id=\"skeleton\"") == std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  // Canvas preserves the world aspect ratio (20 x 12 world, 800 px long side).
  CHECK(svg.find("width=\"800\" height=\"480\"") != std::string::npos);
}

TEST_CASE("annotated skeleton layer colors corridors by cost", "[svg]") {
  BenchmarkSpec bspec = default_benchmark("walls", 1);
  const BenchContext ctx = prepare_benchmark(bspec);

  RenderSpec spec;
  spec.skeleton = true;
  spec.metric = "clearance";
  const std::string svg = render_svg(ctx.env, &ctx.skeleton, &ctx.ann, nullptr,
                                     nullptr, nullptr, spec);
  CHECK(svg.find("id=\"skeleton\"") != std::string::npos);
  CHECK(count_occurrences(svg, "<polyline") ==
        static_cast<int>(ctx.skeleton.edges.size()));

  // The wide corridor's stroke must be greener (lower cost) than the
  // narrow slit's stroke, and both colors must appear in the document.
  const int wide =
      detail::nearest_edge_id(ctx.skeleton, builtin_probe("walls", true));
  const int narrow =
      detail::nearest_edge_id(ctx.skeleton, builtin_probe("walls", false));
  const Rgb cw = cost_color(edge_cost(ctx.ann, wide, "clearance"));
  const Rgb cn = cost_color(edge_cost(ctx.ann, narrow, "clearance"));
  CHECK(cw.g - cw.r > cn.g - cn.r);
  CHECK(svg.find(rgb_hex(cw)) != std::string::npos);
  CHECK(svg.find(rgb_hex(cn)) != std::string::npos);

  // Without a metric the skeleton renders in neutral gray.
  RenderSpec plain;
  plain.skeleton = true;
  const std::string gray = render_svg(ctx.env, &ctx.skeleton, nullptr, nullptr,
                                      nullptr, nullptr, plain);
  CHECK(gray.find("stroke=\"#707070\"") != std::string::npos);
}

TEST_CASE("requested layers demand their inputs", "[svg]") {
  const Environment env = builtin_env("boxes2d");
  RenderSpec none;
  none.environment = false;
  CHECK_THROWS_AS(
      render_svg(env, nullptr, nullptr, nullptr, nullptr, nullptr, none),
      std::invalid_argument);

  RenderSpec spec;
  spec.skeleton = true;
  CHECK_THROWS_AS(
      render_svg(env, nullptr, nullptr, nullptr, nullptr, nullptr, spec),
      std::invalid_argument);
  spec = {};
  spec.regions = true;
  CHECK_THROWS_AS(
      render_svg(env, nullptr, nullptr, nullptr, nullptr, nullptr, spec),
      std::invalid_argument);
  spec = {};
  spec.roadmap = true;
  CHECK_THROWS_AS(
      render_svg(env, nullptr, nullptr, nullptr, nullptr, nullptr, spec),
      std::invalid_argument);
  spec = {};
  spec.path = true;
  CHECK_THROWS_AS(
      render_svg(env, nullptr, nullptr, nullptr, nullptr, nullptr, spec),
      std::invalid_argument);
  spec = {};
  spec.canvas_px = 4;
  CHECK_THROWS_AS(
      render_svg(env, nullptr, nullptr, nullptr, nullptr, nullptr, spec),
      std::invalid_argument);
}

TEST_CASE("full-stack render with roadmap and path layers", "[svg]") {
  BenchmarkSpec bspec = default_benchmark("boxes2d", 1);
  const BenchContext ctx = prepare_benchmark(bspec);

  PlannerConfig cfg;
  cfg.strategy = Strategy::AB;
  cfg.bias_metric = "clearance";
  cfg.rng_seed = 0;
  cfg.max_iterations = 2000;
  const PlanResult res = plan(ctx.env, &ctx.ann, ctx.env.query, cfg);
  REQUIRE(res.stats.success);
  const Path path = extract_path(res.roadmap, ctx.env.query);

  RenderSpec spec;
  spec.skeleton = true;
  spec.regions = true;
  spec.roadmap = true;
  spec.path = true;
  spec.metric = "clearance";
  const std::string svg = render_svg(ctx.env, &ctx.skeleton, &ctx.ann,
                                     &res.final_regions, &res.roadmap, &path, spec);
  CHECK(svg.find("id=\"regions\"") != std::string::npos);
  CHECK(svg.find("id=\"roadmap\"") != std::string::npos);
  CHECK(svg.find("id=\"path\"") != std::string::npos);
  CHECK(svg == render_svg(ctx.env, &ctx.skeleton, &ctx.ann, &res.final_regions,
                          &res.roadmap, &path, spec));
}
