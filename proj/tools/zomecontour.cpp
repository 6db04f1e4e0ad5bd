// Command-line front end: contour approximation over distance fields, point
// connectivity runs on JSON instances, and hardness-reduction instance
// generation.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "zome/arrange.hpp"
#include "zome/field.hpp"
#include "zome/hardness.hpp"
#include "zome/instance.hpp"
#include "zome/model.hpp"
#include "zome/pipeline.hpp"
#include "zome/sampling.hpp"
#include "zome/solve.hpp"
#include "zome/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitNoSolution = 3;
constexpr int kExitInputError = 4;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw zome::Error("cannot write " + path);
  out << content;
}

int status_exit_code(zome::SolveStatus s) {
  switch (s) {
    case zome::SolveStatus::Optimal:
    case zome::SolveStatus::FeasibleTimeLimit: return kExitOk;
    case zome::SolveStatus::InfeasibleProven: return kExitInfeasible;
    default: return kExitNoSolution;
  }
}

bool looks_like_json(const std::string& path) {
  std::ifstream in(path);
  char c = 0;
  while (in.get(c))
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
  return false;
}

zome::SamplingScheme parse_scheme(const std::string& s) {
  if (s == "uniform") return zome::SamplingScheme::UniformArclength;
  if (s == "curv-global") return zome::SamplingScheme::CurvGlobal;
  if (s == "curv-segment") return zome::SamplingScheme::CurvSegmentwise;
  if (s == "curv-separation") return zome::SamplingScheme::CurvSeparation;
  if (s == "gap-euclidean") return zome::SamplingScheme::CurvSepEuclideanFPI;
  if (s == "gap-arclength") return zome::SamplingScheme::CurvSepArclenFPI;
  throw zome::Error("unknown sampling scheme '" + s + "'");
}

struct CliOptions {
  std::string mode = "dcas";
  std::string input;
  double scale = 1.0;
  double delta = 1.0;
  std::string sampling = "gap-arclength";
  int t = 5;
  int k = 12;
  int kc = 25;
  int kmax = 150;
  double lambda = 0.5;
  double separation = 3.0 * zome::long_blue_length();
  double insert_threshold = 1.5 * zome::long_blue_length();
  double time_limit = 900.0;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string arrange = "auto";
  bool no_sos1 = false;
  bool sos1_big_m = false;
  std::int64_t gamma_bound = 30;
  std::string budgets_path;
  std::string out_json, out_svg, out_tikz, out_report, dump_lp;
  std::string reduction;
  std::string values;
  std::string shape = "blob";
  double shape_size = 7.0;
  double cell = 0.35;
  std::string out_field;
};

zome::SolveConfig solver_config(const CliOptions& o) {
  zome::SolveConfig cfg;
  cfg.time_limit_s = o.time_limit;
  cfg.threads = o.threads;
  cfg.rng_seed = o.seed;
  cfg.sos1_big_m = o.sos1_big_m;
  return cfg;
}

std::vector<std::int64_t> parse_values(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoll(tok));
  }
  if (out.empty()) throw zome::Error("--values: no integers given");
  return out;
}

int run_dcas_field(const CliOptions& opt) {
  std::ifstream in(opt.input, std::ios::binary);
  if (!in) throw zome::Error("cannot open " + opt.input);
  const zome::DistanceField field = zome::load_field(in);

  zome::PipelineConfig cfg;
  cfg.scale = opt.scale;
  cfg.delta = opt.delta;
  cfg.scheme = parse_scheme(opt.sampling);
  cfg.t = opt.t;
  cfg.k = opt.k;
  cfg.k_c = opt.kc;
  cfg.k_max = opt.kmax;
  cfg.lambda = opt.lambda;
  cfg.separation = opt.separation;
  cfg.insert_threshold = opt.insert_threshold;
  cfg.use_sos1 = !opt.no_sos1;
  cfg.gamma_bound = opt.gamma_bound;
  cfg.arrange = opt.arrange == "exact"    ? zome::ArrangeMode::Exact
                : opt.arrange == "greedy" ? zome::ArrangeMode::Greedy
                                          : zome::ArrangeMode::Auto;
  cfg.solver = solver_config(opt);
  if (!opt.budgets_path.empty()) {
    std::ifstream bin(opt.budgets_path);
    if (!bin) throw zome::Error("cannot open " + opt.budgets_path);
    zome::json b = zome::json::parse(bin);
    cfg.catalog = zome::apply_budget_overrides(cfg.catalog, b);
  }

  const zome::PipelineResult res = zome::run_pipeline(field, cfg);
  if (!opt.dump_lp.empty()) {
    std::ostringstream os;
    zome::write_lp(res.model.mip, os);
    write_file(opt.dump_lp, os.str());
  }
  if (!opt.out_json.empty())
    write_file(opt.out_json, zome::solution_to_json(res, cfg.catalog, cfg.delta).dump(2) + "\n");
  if (!opt.out_svg.empty() || !opt.out_tikz.empty()) {
    const zome::ZomeCycle cycle = res.cycle.value_or(zome::ZomeCycle{});
    if (!opt.out_svg.empty())
      write_file(opt.out_svg,
                 zome::render_svg(cycle, res.contour, res.samples, cfg.delta, cfg.catalog));
    if (!opt.out_tikz.empty())
      write_file(opt.out_tikz,
                 zome::render_tikz(cycle, res.contour, res.samples, cfg.delta, cfg.catalog));
  }
  const std::string line = res.report.oneline();
  std::cout << line << "\n";
  if (!res.report.message.empty()) std::cout << res.report.message << "\n";
  if (!opt.out_report.empty()) write_file(opt.out_report, line + "\n" + res.report.message + "\n");
  return status_exit_code(res.report.status);
}

int run_instance(const CliOptions& opt, bool force_shortest) {
  std::ifstream in(opt.input);
  if (!in) throw zome::Error("cannot open " + opt.input);
  const zome::ReducedInstance inst = zome::instance_from_json(zome::json::parse(in));

  zome::ModelOptions mo;
  mo.use_sos1 = !opt.no_sos1 && inst.kind != zome::ReducedKind::Dpc;
  mo.gamma_default_bound = opt.gamma_bound;

  if (inst.kind == zome::ReducedKind::Dpc) {
    const zome::DpcModel model = force_shortest
                                     ? zome::build_dpc_shortest(inst.das, inst.target)
                                     : zome::build_dpc_feasibility(inst.das, inst.target, mo);
    if (!opt.dump_lp.empty()) {
      std::ostringstream os;
      zome::write_lp(model.mip, os);
      write_file(opt.dump_lp, os.str());
    }
    const zome::SolveResult r = zome::solve(model.mip, solver_config(opt));
    std::cout << "status=" << zome::to_string(r.status);
    if (r.assignment && force_shortest)
      std::cout << " struts=" << static_cast<std::int64_t>(std::llround(r.objective));
    std::cout << " bound=" << r.best_bound << " nodes=" << r.nodes_explored
              << " time_s=" << r.wall_time_s << "\n";
    if (!opt.out_json.empty()) {
      zome::json j;
      j["status"] = zome::to_string(r.status);
      j["objective"] = r.objective;
      j["bound"] = r.best_bound;
      j["gap"] = r.gap;
      if (r.assignment) {
        j["gamma"] = zome::json::array();
        for (std::size_t v = 0; v < r.assignment->size(); ++v)
          if ((*r.assignment)[v] > 0.5)
            j["gamma"].push_back({{"var", model.mip.vars[v].name},
                                  {"count", static_cast<std::int64_t>(std::llround((*r.assignment)[v]))}});
      }
      write_file(opt.out_json, j.dump(2) + "\n");
    }
    return status_exit_code(r.status);
  }

  // DPA-S / DCA-S instances
  zome::DcasModel model;
  if (inst.kind == zome::ReducedKind::Dcas) {
    model = zome::build_dcas(inst.das, inst.samples, inst.delta, mo);
  } else {
    const zome::Vec2 x1 = inst.samples.front(), x2 = inst.samples.back();
    const zome::ZomePoint start{static_cast<std::int64_t>(std::llround(x1.x)), 0,
                                static_cast<std::int64_t>(std::llround(x1.y)), 0};
    const zome::ZomePoint end{static_cast<std::int64_t>(std::llround(x2.x)), 0,
                              static_cast<std::int64_t>(std::llround(x2.y)), 0};
    model = zome::build_dpas(inst.das, inst.samples, start, end, inst.delta, mo);
  }
  if (!opt.dump_lp.empty()) {
    std::ostringstream os;
    zome::write_lp(model.mip, os);
    write_file(opt.dump_lp, os.str());
  }
  zome::PipelineResult res;
  res.model = model;
  res.samples = inst.samples;
  res.solve = zome::solve(model.mip, solver_config(opt));
  res.report.status = res.solve.status;
  res.report.k = static_cast<int>(inst.samples.size());
  res.report.objective = res.solve.objective;
  res.report.bound = res.solve.best_bound;
  res.report.gap = res.solve.gap;
  if (res.solve.assignment) {
    res.decode = zome::decode_solution(model, *res.solve.assignment);
    // no field for reduced instances: arrange against a zero field
    zome::DistanceField flat;
    flat.width = flat.height = 2;
    flat.cell_size = 1.0;
    flat.values.assign(4, 0.0);
    res.cycle = zome::assemble_cycle(*res.decode, inst.das, flat, zome::ArrangeMode::Greedy);
    res.crossing_report = zome::detect_crossings(*res.cycle);
    int struts = 0;
    for (const auto& seg : res.cycle->segments) struts += static_cast<int>(seg.size());
    res.report.strut_count = struts;
  }
  if (!opt.out_json.empty())
    write_file(opt.out_json,
               zome::solution_to_json(res, inst.das, inst.delta,
                                      inst.kind == zome::ReducedKind::Dcas)
                       .dump(2) +
                   "\n");
  if (!opt.out_svg.empty()) {
    const zome::ZomeCycle cycle = res.cycle.value_or(zome::ZomeCycle{});
    zome::ContourPolyline poly;
    poly.points = inst.samples;
    poly.closed = inst.kind == zome::ReducedKind::Dcas;
    write_file(opt.out_svg, zome::render_svg(cycle, poly, inst.samples, inst.delta, inst.das));
  }
  std::cout << res.report.oneline() << "\n";
  return status_exit_code(res.report.status);
}

// synthetic test shapes so the tool is usable without an external field source
int run_make_field(const CliOptions& opt) {
  if (opt.out_field.empty()) throw zome::Error("make-field requires --out-field");
  const double s = opt.shape_size;
  const double margin = 0.35 * s + 2.0;
  std::function<double(zome::Vec2)> sdf;
  double xmin = -s - margin, xmax = s + margin, ymin = -s - margin, ymax = s + margin;
  if (opt.shape == "circle") {
    sdf = [s](zome::Vec2 p) { return std::hypot(p.x, p.y) - s; };
  } else if (opt.shape == "square") {
    sdf = [s](zome::Vec2 p) { return std::max(std::fabs(p.x), std::fabs(p.y)) - s / 2.0; };
  } else if (opt.shape == "blob") {
    sdf = [s](zome::Vec2 p) {
      const double d1 = std::hypot(p.x + 0.7 * s, p.y) - 1.1 * s;
      const double d2 = std::hypot(p.x - 0.8 * s, p.y + 0.3 * s) - 0.9 * s;
      const double d3 = std::hypot(p.x - 0.1 * s, p.y - 0.8 * s) - 0.8 * s;
      return std::min(d1, std::min(d2, d3));
    };
    xmin = -2.0 * s - margin;
    xmax = 2.2 * s + margin;
    ymin = -1.8 * s - margin;
    ymax = 2.0 * s + margin;
  } else {
    throw zome::Error("unknown --shape (circle | square | blob)");
  }
  zome::DistanceField f;
  f.width = static_cast<int>(std::ceil((xmax - xmin) / opt.cell));
  f.height = static_cast<int>(std::ceil((ymax - ymin) / opt.cell));
  f.cell_size = opt.cell;
  f.origin = {xmin + opt.cell / 2.0, ymin + opt.cell / 2.0};
  f.values.resize(static_cast<std::size_t>(f.width) * f.height);
  for (int j = 0; j < f.height; ++j)
    for (int i = 0; i < f.width; ++i) f.at(i, j) = sdf(f.cell_center(i, j));
  std::ofstream out(opt.out_field, std::ios::binary);
  if (!out) throw zome::Error("cannot write " + opt.out_field);
  zome::save_field(f, out);
  std::cout << "wrote " << opt.out_field << " (" << f.width << "x" << f.height << ")\n";
  return kExitOk;
}

int run_hardness_gen(const CliOptions& opt) {
  if (opt.out_json.empty()) throw zome::Error("hardness-gen requires --out-json");
  const std::vector<std::int64_t> values = parse_values(opt.values);
  zome::ReducedInstance inst;
  if (opt.reduction == "partition-dpc") {
    inst = zome::reduce_partition_to_dpc({values});
  } else if (opt.reduction == "3partition-dpas" || opt.reduction == "3partition-dcas") {
    if (values.size() % 3 != 0) throw zome::Error("3-partition needs 3m values");
    std::int64_t sum = 0;
    for (std::int64_t v : values) sum += v;
    const std::int64_t m = static_cast<std::int64_t>(values.size()) / 3;
    if (sum % m != 0) throw zome::Error("3-partition: total not divisible by m");
    const zome::ThreePartitionInstance p{values, sum / m};
    inst = opt.reduction == "3partition-dpas" ? zome::reduce_3partition_to_dpas(p)
                                              : zome::reduce_3partition_to_dcas(p);
  } else {
    throw zome::Error("unknown --reduction (partition-dpc | 3partition-dpas | 3partition-dcas)");
  }
  write_file(opt.out_json, zome::instance_to_json(inst).dump(2) + "\n");
  std::cout << "wrote " << opt.out_json << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zometool-style shape contour approximation"};
  CliOptions opt;
  app.add_option("--mode", opt.mode, "dcas | dpc | dpc-shortest | hardness-gen | make-field")
      ->check(CLI::IsMember({"dcas", "dpc", "dpc-shortest", "hardness-gen", "make-field"}));
  app.add_option("--input", opt.input, "distance field (DFIELD v1) or instance JSON");
  app.add_option("--scale", opt.scale, "scaling parameter s (struts get longer for s > 1)");
  app.add_option("--delta", opt.delta, "sample box half-width");
  app.add_option("--sampling", opt.sampling,
                 "uniform | curv-global | curv-segment | curv-separation | gap-euclidean | "
                 "gap-arclength");
  app.add_option("--t", opt.t, "curvature offset");
  app.add_option("--k", opt.k, "sample count for fixed-k schemes");
  app.add_option("--kc", opt.kc, "curvature picks before gap filling");
  app.add_option("--kmax", opt.kmax, "total sample cap");
  app.add_option("--lambda", opt.lambda, "separation factor for curv-separation");
  app.add_option("--separation", opt.separation, "absolute arclength separation (gap schemes)");
  app.add_option("--insert-threshold", opt.insert_threshold, "farthest-point insertion stop");
  app.add_option("--time-limit", opt.time_limit, "solver wall-clock limit in seconds");
  app.add_option("--threads", opt.threads, "solver worker threads");
  app.add_option("--seed", opt.seed, "solver random seed");
  app.add_option("--arrange", opt.arrange, "exact | greedy | auto")
      ->check(CLI::IsMember({"exact", "greedy", "auto"}));
  app.add_flag("--no-sos1", opt.no_sos1, "drop SOS-1 pairs from the model");
  app.add_flag("--sos1-big-m", opt.sos1_big_m, "reformulate SOS-1 with binaries");
  app.add_option("--gamma-bound", opt.gamma_bound, "per-segment bound on unbudgeted struts");
  app.add_option("--budgets", opt.budgets_path, "JSON map strut name -> budget");
  app.add_option("--out-json", opt.out_json, "solution / instance JSON path");
  app.add_option("--out-svg", opt.out_svg, "SVG rendering path");
  app.add_option("--out-tikz", opt.out_tikz, "tikz rendering path");
  app.add_option("--out-report", opt.out_report, "one-line report path");
  app.add_option("--dump-lp", opt.dump_lp, "write the model in LP format");
  app.add_option("--reduction", opt.reduction,
                 "hardness-gen: partition-dpc | 3partition-dpas | 3partition-dcas");
  app.add_option("--values", opt.values, "hardness-gen: comma-separated integers");
  app.add_option("--shape", opt.shape, "make-field: circle | square | blob");
  app.add_option("--size", opt.shape_size, "make-field: shape size (radius / side / scale)");
  app.add_option("--cell", opt.cell, "make-field: grid cell size");
  app.add_option("--out-field", opt.out_field, "make-field: output DFIELD path");
  CLI11_PARSE(app, argc, argv);

  try {
    if (opt.mode == "make-field") return run_make_field(opt);
    if (opt.mode == "hardness-gen") return run_hardness_gen(opt);
    if (opt.input.empty()) throw zome::Error("--input is required");
    if (opt.mode == "dpc" || opt.mode == "dpc-shortest")
      return run_instance(opt, opt.mode == "dpc-shortest");
    // dcas: distance field or instance JSON
    if (looks_like_json(opt.input)) return run_instance(opt, false);
    return run_dcas_field(opt);
  } catch (const zome::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
