#pragma once

// End-to-end orchestration: field -> contour -> samples -> MIP -> decode ->
// arrangement -> outputs, plus the self-contained solution JSON and its full
// re-validation (exact node chain, box membership, budgets, costs, gap).

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zome/arrange.hpp"
#include "zome/field.hpp"
#include "zome/golden.hpp"
#include "zome/instance.hpp"
#include "zome/model.hpp"
#include "zome/sampling.hpp"
#include "zome/solve.hpp"
#include "zome/svg.hpp"

namespace zome {

struct PipelineConfig {
  double scale = 1.0;
  double delta = 1.0;
  SamplingScheme scheme = SamplingScheme::CurvSepArclenFPI;
  int t = 5;
  int k = 12;        // fixed-k schemes (1, 2a-2c)
  int k_c = 25;      // curvature picks for gap-filling schemes
  int k_max = 150;
  double lambda = 0.5;                              // scheme 2(c)
  double separation = 3.0 * long_blue_length();     // schemes 3(a)/3(b)
  double insert_threshold = 1.5 * long_blue_length();
  bool use_sos1 = true;
  std::int64_t gamma_bound = 30;
  ArrangeMode arrange = ArrangeMode::Auto;
  SolveConfig solver;
  StrutCatalog catalog = catalog_standard();
};

struct RunReport {
  SolveStatus status = SolveStatus::NoSolutionTimeLimit;
  int k = 0;
  int strut_count = 0;
  double objective = kInf;
  double bound = -kInf;
  double gap = kInf;
  double total_cost = 0.0;
  int crossings = 0;
  int coincident_nodes = 0;
  double sample_time_s = 0.0;
  double solve_time_s = 0.0;
  double arrange_time_s = 0.0;
  std::string message;

  std::string oneline() const {
    std::ostringstream os;
    os.precision(4);
    os << "status=" << to_string(status) << " k=" << k << " struts=" << strut_count;
    if (gap != kInf) os << " gap=" << gap * 100.0 << "%";
    os << " cost=" << total_cost << " crossings=" << crossings << " solve_s=" << solve_time_s;
    return os.str();
  }
};

struct PipelineResult {
  RunReport report;
  SolveResult solve;
  std::optional<SolutionDecode> decode;
  std::optional<ZomeCycle> cycle;
  CrossingReport crossing_report;
  ContourPolyline contour;
  std::vector<Vec2> samples;
  DcasModel model;
};

inline SamplePlan run_sampling(const ContourPolyline& contour, const PipelineConfig& cfg) {
  switch (cfg.scheme) {
    case SamplingScheme::UniformArclength: return sample_uniform_arclength(contour, cfg.k);
    case SamplingScheme::CurvGlobal: return sample_curvature_global(contour, cfg.k, cfg.t);
    case SamplingScheme::CurvSegmentwise: return sample_curvature_segmentwise(contour, cfg.k, cfg.t);
    case SamplingScheme::CurvSeparation:
      return sample_curvature_separation(contour, cfg.k, cfg.t, cfg.lambda);
    case SamplingScheme::CurvSepEuclideanFPI:
      return sample_gap_filling(contour, cfg.k_c, cfg.k_max, cfg.t, cfg.separation,
                                GapFillMode::Euclidean, cfg.insert_threshold);
    default:
      return sample_gap_filling(contour, cfg.k_c, cfg.k_max, cfg.t, cfg.separation,
                                GapFillMode::Arclength, cfg.insert_threshold);
  }
}

// The full contour-approximation pipeline over a distance field.
inline PipelineResult run_pipeline(const DistanceField& field_in, const PipelineConfig& cfg) {
  using clock = std::chrono::steady_clock;
  PipelineResult out;
  const DistanceField field = cfg.scale == 1.0 ? field_in : scale_field(field_in, cfg.scale);

  auto t0 = clock::now();
  out.contour = extract_contour(field);
  const SamplePlan plan = run_sampling(out.contour, cfg);
  out.samples = plan_points(out.contour, plan);
  out.report.k = static_cast<int>(out.samples.size());
  out.report.sample_time_s = std::chrono::duration<double>(clock::now() - t0).count();

  ModelOptions mo;
  mo.use_sos1 = cfg.use_sos1;
  mo.gamma_default_bound = cfg.gamma_bound;
  out.model = build_dcas(cfg.catalog, out.samples, cfg.delta, mo);

  t0 = clock::now();
  out.solve = solve(out.model.mip, cfg.solver);
  out.report.solve_time_s = std::chrono::duration<double>(clock::now() - t0).count();
  out.report.status = out.solve.status;
  out.report.objective = out.solve.objective;
  out.report.bound = out.solve.best_bound;
  out.report.gap = out.solve.gap;

  if (out.solve.assignment) {
    t0 = clock::now();
    out.decode = decode_solution(out.model, *out.solve.assignment);
    out.cycle = assemble_cycle(*out.decode, cfg.catalog, field, cfg.arrange);
    out.crossing_report = detect_crossings(*out.cycle);
    out.report.arrange_time_s = std::chrono::duration<double>(clock::now() - t0).count();
    out.report.total_cost = out.cycle->total_cost;
    out.report.crossings = static_cast<int>(out.crossing_report.crossings.size());
    out.report.coincident_nodes = static_cast<int>(out.crossing_report.coincident_nodes.size());
    int struts = 0;
    for (const auto& seg : out.cycle->segments) struts += static_cast<int>(seg.size());
    out.report.strut_count = struts;
  } else if (out.solve.status == SolveStatus::NoSolutionTimeLimit) {
    out.report.message =
        "no good solution found within the limit; the model parameters (delta, scale, "
        "sampling) may not admit one";
  }
  return out;
}

// --- solution JSON ----------------------------------------------------------

inline json solution_to_json(const PipelineResult& res, const StrutCatalog& cat, double delta,
                             bool cycle_kind = true) {
  json j;
  j["status"] = to_string(res.solve.status);
  // non-finite values (no incumbent / no bound) serialize as JSON null
  j["objective"] = std::isfinite(res.solve.objective) ? json(res.solve.objective) : json();
  j["bound"] = std::isfinite(res.solve.best_bound) ? json(res.solve.best_bound) : json();
  j["gap"] = std::isfinite(res.solve.gap) ? json(res.solve.gap) : json();
  j["nodes_explored"] = res.solve.nodes_explored;
  j["wall_time_s"] = res.solve.wall_time_s;
  j["delta"] = delta;
  j["cycle"] = cycle_kind;
  j["catalog"] = catalog_to_json(cat);
  j["samples"] = json::array();
  for (const Vec2& p : res.samples) j["samples"].push_back({p.x, p.y});
  if (res.decode) {
    j["shift"] = {res.decode->shift.x, res.decode->shift.y};
    j["nodes"] = json::array();
    for (const ZomePoint& n : res.decode->nodes)
      j["nodes"].push_back({n.v[0], n.v[1], n.v[2], n.v[3]});
    j["segments"] = json::array();
    for (const auto& seg : res.decode->segments) {
      json s = json::array();
      for (const StrutUse& u : seg)
        s.push_back({{"type", u.type}, {"column", u.column}, {"sign", u.sign}, {"count", u.count}});
      j["segments"].push_back(std::move(s));
    }
  }
  if (res.cycle) {
    j["total_cost"] = res.cycle->total_cost;
    j["placed"] = json::array();
    for (const auto& seg : res.cycle->segments) {
      json s = json::array();
      for (const PlacedStrut& p : seg)
        s.push_back({{"type", p.strut.type},
                     {"column", p.strut.column},
                     {"sign", p.strut.sign},
                     {"start", {p.start.x, p.start.y}},
                     {"end", {p.end.x, p.end.y}},
                     {"cost", p.cost}});
      j["placed"].push_back(std::move(s));
    }
    j["crossings"] = json::array();
    for (const auto& [a, b] : res.crossing_report.crossings)
      j["crossings"].push_back({{a.segment, a.index}, {b.segment, b.index}});
    j["coincident_nodes"] = json::array();
    for (const auto& [a, b] : res.crossing_report.coincident_nodes)
      j["coincident_nodes"].push_back({a, b});
  }
  return j;
}

// Full re-validation of an emitted solution: the node chain recomputed in
// exact integers, cycle closure, box membership, budget compliance, cost
// recomputation against the field, and the reported gap identity.
inline void revalidate_solution(const json& j, const DistanceField* field = nullptr,
                                double tol = 1e-9) {
  const StrutCatalog cat = catalog_from_json(j.at("catalog"));
  const double delta = j.at("delta").get<double>();
  const bool cycle_kind = j.at("cycle").get<bool>();
  if (!j.contains("nodes")) throw Error("revalidate: no solution payload");
  const Vec2 shift{j.at("shift")[0].get<double>(), j.at("shift")[1].get<double>()};

  std::vector<ZomePoint> nodes;
  for (const json& n : j.at("nodes"))
    nodes.push_back(ZomePoint{n[0].get<std::int64_t>(), n[1].get<std::int64_t>(),
                              n[2].get<std::int64_t>(), n[3].get<std::int64_t>()});
  std::vector<std::int64_t> used(cat.struts.size(), 0);
  ZomePoint cur = nodes.at(0);
  const json& segments = j.at("segments");
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (const json& u : segments[s]) {
      const int type = u.at("type").get<int>();
      const int column = u.at("column").get<int>();
      const int sign = u.at("sign").get<int>();
      const std::int64_t count = u.at("count").get<std::int64_t>();
      if (count <= 0) throw Error("revalidate: nonpositive strut count");
      used[static_cast<std::size_t>(type)] += count;
      const LiftedColumn& col = cat.struts.at(static_cast<std::size_t>(type))
                                    .columns.at(static_cast<std::size_t>(column));
      for (int comp = 0; comp < 4; ++comp)
        cur.v[static_cast<std::size_t>(comp)] = checked_add(
            cur.v[static_cast<std::size_t>(comp)],
            checked_mul(count, sign * col[static_cast<std::size_t>(comp)]));
    }
    const ZomePoint& expect = nodes.at((s + 1) % nodes.size());
    if (cycle_kind || s + 1 < segments.size()) {
      if (!(cur == expect)) throw Error("revalidate: node chain mismatch at segment " +
                                        std::to_string(s));
    }
  }
  for (std::size_t t = 0; t < cat.struts.size(); ++t)
    if (cat.struts[t].budget && used[t] > *cat.struts[t].budget)
      throw Error("revalidate: budget exceeded for " + cat.struts[t].name);

  const json& samples = j.at("samples");
  if (samples.size() != nodes.size() && cycle_kind)
    throw Error("revalidate: node/sample count mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const bool interior = cycle_kind || (i > 0 && i + 1 < nodes.size());
    if (!interior) continue;
    const Vec2 pos = project_to_plane(nodes[i]) + shift;
    const double px = samples[i][0].get<double>();
    const double py = samples[i][1].get<double>();
    if (std::fabs(pos.x - px) > delta + 1e-6 || std::fabs(pos.y - py) > delta + 1e-6)
      throw Error("revalidate: node " + std::to_string(i) + " outside its sample box");
  }

  if (j.contains("placed") && field) {
    double total = 0.0;
    for (const json& seg : j.at("placed"))
      for (const json& p : seg) {
        const Vec2 a{p.at("start")[0].get<double>(), p.at("start")[1].get<double>()};
        const Vec2 b{p.at("end")[0].get<double>(), p.at("end")[1].get<double>()};
        const double c = strut_cost(*field, a, b);
        if (std::fabs(c - p.at("cost").get<double>()) > tol)
          throw Error("revalidate: strut cost mismatch");
        total += c;
      }
    if (std::fabs(total - j.at("total_cost").get<double>()) > tol * (1.0 + std::fabs(total)))
      throw Error("revalidate: total cost mismatch");
  }

  const double objective = j.at("objective").get<double>();
  const double bound = j.at("bound").get<double>();
  const double gap = j.at("gap").get<double>();
  const double expect_gap = (objective - bound) / std::max(1.0, std::fabs(objective));
  if (std::isfinite(gap) && std::fabs(gap - expect_gap) > 1e-12)
    throw Error("revalidate: reported gap does not match its definition");
}

}  // namespace zome
