#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zome/instance.hpp"
#include "zome/pipeline.hpp"

using namespace zome;

namespace {

const double kLong = 2.0 + 2.0 * kPhi;

PipelineConfig square_config() {
  PipelineConfig cfg;
  cfg.delta = 0.1;
  cfg.scheme = SamplingScheme::CurvSeparation;
  cfg.k = 4;
  cfg.lambda = 0.5;
  cfg.t = 5;
  cfg.solver.time_limit_s = 60.0;
  return cfg;
}

}  // namespace

TEST_CASE("instance json round-trips losslessly") {
  const ThreePartitionInstance p{{3, 3, 4, 3, 3, 4}, 10};
  const ReducedInstance inst = reduce_3partition_to_dcas(p);
  const json j = instance_to_json(inst);
  const ReducedInstance back = instance_from_json(j);
  CHECK(instance_to_json(back) == j);
  CHECK(back.kind == inst.kind);
  CHECK(back.delta == inst.delta);
  CHECK(back.samples.size() == inst.samples.size());
  REQUIRE(back.das.struts.size() == inst.das.struts.size());
  for (std::size_t i = 0; i < inst.das.struts.size(); ++i) {
    CHECK(back.das.struts[i].name == inst.das.struts[i].name);
    CHECK(back.das.struts[i].columns == inst.das.struts[i].columns);
    CHECK(back.das.struts[i].budget == inst.das.struts[i].budget);
  }
}

TEST_CASE("instance json rejects unknown fields and bad payloads") {
  const ReducedInstance inst = reduce_partition_to_dpc({{1, 1, 2, 2}});
  json j = instance_to_json(inst);
  j["surprise"] = 1;
  CHECK_THROWS_AS(instance_from_json(j), Error);
  json j2 = instance_to_json(inst);
  j2["target"] = {1, 2, 3};
  CHECK_THROWS_AS(instance_from_json(j2), Error);
  json j3 = instance_to_json(inst);
  j3["kind"] = "dpa";
  CHECK_THROWS_AS(instance_from_json(j3), Error);
}

TEST_CASE("absent budgets mean infinite availability") {
  json j;
  j["kind"] = "dpc";
  j["target"] = {2, 0, 2, 0};
  j["catalog"] = json::array({{{"name", "e2"},
                               {"columns", json::array({{2, 0, 0, 0}, {0, 0, 2, 0}})}}});
  const ReducedInstance inst = instance_from_json(j);
  CHECK_FALSE(inst.das.struts[0].budget.has_value());
  // standard catalog when the field is omitted entirely
  json j2;
  j2["kind"] = "dpc";
  j2["target"] = {0, 2, 0, 0};
  const ReducedInstance std_inst = instance_from_json(j2);
  CHECK(std_inst.das.struts.size() == 9);
}

TEST_CASE("budget overrides apply by strut name") {
  json budgets;
  budgets["blue_long"] = 2;
  const StrutCatalog cat = apply_budget_overrides(catalog_standard(), budgets);
  CHECK(cat.find(StrutColor::Blue, LengthClass::Long).budget == 2);
  CHECK_FALSE(cat.find(StrutColor::Red, LengthClass::Short).budget.has_value());
  json bad;
  bad["chartreuse_epic"] = 1;
  CHECK_THROWS_AS(apply_budget_overrides(catalog_standard(), bad), Error);
}

TEST_CASE("pipeline: lattice-aligned square solves to four long blues") {
  const DistanceField field = testing::square_field(kLong, 0.025);
  const PipelineResult res = run_pipeline(field, square_config());

  REQUIRE(res.report.status == SolveStatus::Optimal);
  CHECK(res.report.k == 4);
  CHECK(res.report.objective == doctest::Approx(4.0));
  CHECK(res.report.gap == 0.0);
  CHECK(res.report.strut_count == 4);
  CHECK(res.report.crossings == 0);
  REQUIRE(res.cycle.has_value());
  for (const auto& seg : res.cycle->segments) {
    REQUIRE(seg.size() == 1);
    CHECK(seg[0].strut.type == 2);  // blue long
  }
  // sampling found the corners (within the chamfer tolerance)
  for (const Vec2& s : res.samples) {
    const double dx = std::min(std::fabs(s.x), std::fabs(s.x - kLong));
    const double dy = std::min(std::fabs(s.y), std::fabs(s.y - kLong));
    CHECK(dx < 0.08);
    CHECK(dy < 0.08);
  }
  // emitted solution re-validates in full
  const json sol = solution_to_json(res, catalog_standard(), 0.1);
  CHECK_NOTHROW(revalidate_solution(sol, &field));
}

TEST_CASE("revalidation rejects tampered solutions") {
  const DistanceField field = testing::square_field(kLong, 0.025);
  const PipelineResult res = run_pipeline(field, square_config());
  REQUIRE(res.decode.has_value());
  const json good = solution_to_json(res, catalog_standard(), 0.1);

  json bad_chain = good;
  bad_chain["segments"][0][0]["count"] = 2;
  CHECK_THROWS_AS(revalidate_solution(bad_chain, &field), Error);

  json bad_box = good;
  bad_box["shift"] = {5.0, 5.0};
  CHECK_THROWS_AS(revalidate_solution(bad_box, &field), Error);

  json bad_cost = good;
  bad_cost["total_cost"] = good["total_cost"].get<double>() + 1.0;
  CHECK_THROWS_AS(revalidate_solution(bad_cost, &field), Error);

  json bad_gap = good;
  bad_gap["gap"] = 0.5;
  CHECK_THROWS_AS(revalidate_solution(bad_gap, &field), Error);
}

TEST_CASE("pipeline: all-positive field fails with no zero crossing") {
  DistanceField f;
  f.width = 8;
  f.height = 8;
  f.cell_size = 1.0;
  f.values.assign(64, 2.0);
  CHECK_THROWS_WITH_AS(run_pipeline(f, square_config()),
                       doctest::Contains("no zero crossing"), Error);
}

TEST_CASE("pipeline: small blob with defaults returns a validated solution") {
  // compact blob so the default 3(b) sampling yields few segments
  const DistanceField field = testing::blob_field(7.0, 0.35);
  PipelineConfig cfg;
  cfg.delta = 1.6;
  cfg.k_c = 6;
  cfg.solver.time_limit_s = 90.0;
  const PipelineResult res = run_pipeline(field, cfg);
  REQUIRE((res.report.status == SolveStatus::Optimal ||
           res.report.status == SolveStatus::FeasibleTimeLimit));
  REQUIRE(res.decode.has_value());
  CHECK(res.report.k >= 4);
  CHECK(std::isfinite(res.report.gap));
  const json sol = solution_to_json(res, catalog_standard(), cfg.delta);
  CHECK_NOTHROW(revalidate_solution(sol, &field));
  // nodes satisfy their boxes (postcondition re-check through decode)
  for (std::size_t i = 0; i < res.decode->nodes.size(); ++i) {
    const Vec2 pos = project_to_plane(res.decode->nodes[i]) + res.decode->shift;
    CHECK(std::fabs(pos.x - res.samples[i].x) <= cfg.delta + 1e-6);
    CHECK(std::fabs(pos.y - res.samples[i].y) <= cfg.delta + 1e-6);
  }
}

TEST_CASE("svg output is structurally well formed") {
  const DistanceField field = testing::square_field(kLong, 0.025);
  const PipelineResult res = run_pipeline(field, square_config());
  REQUIRE(res.cycle.has_value());
  const std::string svg =
      render_svg(*res.cycle, res.contour, res.samples, 0.1, catalog_standard());
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  // 4 sample boxes, 4 struts
  std::size_t rects = 0, lines = 0, pos = 0;
  while ((pos = svg.find("<rect", pos)) != std::string::npos) {
    ++rects;
    pos += 5;
  }
  pos = 0;
  while ((pos = svg.find("<line", pos)) != std::string::npos) {
    ++lines;
    pos += 5;
  }
  CHECK(rects == 4);
  CHECK(lines == 4);
  // every element is self-closed or closed
  CHECK(svg.find("stroke=\"#1f62c4\"") != std::string::npos);  // blue struts

  // empty cycle still renders contour and boxes
  const std::string empty =
      render_svg(ZomeCycle{}, res.contour, res.samples, 0.1, catalog_standard());
  CHECK(empty.find("<rect") != std::string::npos);
  CHECK(empty.find("<line") == std::string::npos);

  const std::string tikz =
      render_tikz(*res.cycle, res.contour, res.samples, 0.1, catalog_standard());
  CHECK(tikz.rfind("\\begin{tikzpicture}", 0) == 0);
  CHECK(tikz.find("\\end{tikzpicture}") != std::string::npos);
}

#ifdef ZOME_CLI_PATH
TEST_CASE("cli: square field end to end with outputs") {
  const DistanceField field = testing::square_field(kLong, 0.025);
  {
    std::ofstream out("cli_square.df");
    save_field(field, out);
  }
  const std::string cmd = std::string(ZOME_CLI_PATH) +
                          " --mode dcas --input cli_square.df --delta 0.1 --sampling "
                          "curv-separation --k 4 --lambda 0.5 --time-limit 60 "
                          "--out-json cli_square.json --out-svg cli_square.svg > cli_square.log";
  const int rc = std::system(cmd.c_str());
  CHECK(rc == 0);
  std::ifstream jin("cli_square.json");
  REQUIRE(jin.good());
  const json sol = json::parse(jin);
  CHECK(sol.at("status").get<std::string>() == "optimal");
  CHECK(sol.at("objective").get<double>() == doctest::Approx(4.0));
  CHECK_NOTHROW(revalidate_solution(sol, &field));
}

TEST_CASE("cli: input error exit code") {
  const int rc = std::system((std::string(ZOME_CLI_PATH) +
                              " --mode dcas --input missing_file.df 2> /dev/null")
                                 .c_str());
  CHECK(WEXITSTATUS(rc) == 4);
}

TEST_CASE("cli: infeasible instance exit code") {
  {
    std::ofstream out("cli_no.json");
    out << instance_to_json(reduce_partition_to_dpc({{1, 1, 4}})).dump();
  }
  const int rc = std::system(
      (std::string(ZOME_CLI_PATH) + " --mode dpc --input cli_no.json > /dev/null").c_str());
  CHECK(WEXITSTATUS(rc) == 2);
}

TEST_CASE("cli: no-solution-within-limit exit code") {
  // far-apart samples with a tiny time limit: no incumbent can be found
  json inst;
  inst["kind"] = "dcas";
  inst["delta"] = 0.05;
  inst["samples"] = json::array({{0.0, 0.0}, {97.13, 0.0}, {55.0, 88.21}});
  {
    std::ofstream out("cli_slow.json");
    out << inst.dump();
  }
  const int rc = std::system((std::string(ZOME_CLI_PATH) +
                              " --mode dcas --input cli_slow.json --time-limit 0.05 > /dev/null")
                                 .c_str());
  CHECK(WEXITSTATUS(rc) == 3);
}

TEST_CASE("cli: budgets file can make the square infeasible") {
  const DistanceField field = testing::square_field(kLong, 0.025);
  {
    std::ofstream out("cli_budget.df");
    save_field(field, out);
  }
  {
    // three long blues and nothing else: the fourth side cannot be built
    std::ofstream out("cli_budget.json");
    out << "{\"blue_short\":0,\"blue_medium\":0,\"blue_long\":3,\"red_short\":0,"
           "\"red_medium\":0,\"red_long\":0,\"yellow_short\":0,\"yellow_medium\":0,"
           "\"yellow_long\":0}";
  }
  const int rc = std::system((std::string(ZOME_CLI_PATH) +
                              " --mode dcas --input cli_budget.df --delta 0.1 --sampling "
                              "curv-separation --k 4 --lambda 0.5 --time-limit 60 "
                              "--budgets cli_budget.json > /dev/null")
                                 .c_str());
  CHECK(WEXITSTATUS(rc) == 2);
}
#endif

TEST_CASE("pipeline: circle with defaults returns nodes inside their boxes") {
  const DistanceField field = testing::circle_field(10.0, 0.25);
  PipelineConfig cfg;  // scheme 3(b) defaults
  cfg.delta = 1.5;
  cfg.solver.time_limit_s = 60.0;
  const PipelineResult res = run_pipeline(field, cfg);
  REQUIRE(res.decode.has_value());
  REQUIRE(res.report.k >= 3);
  for (std::size_t i = 0; i < res.decode->nodes.size(); ++i) {
    const Vec2 pos = project_to_plane(res.decode->nodes[i]) + res.decode->shift;
    CHECK(std::fabs(pos.x - res.samples[i].x) <= cfg.delta + 1e-6);
    CHECK(std::fabs(pos.y - res.samples[i].y) <= cfg.delta + 1e-6);
  }
  CHECK(std::isfinite(res.report.gap));
}
