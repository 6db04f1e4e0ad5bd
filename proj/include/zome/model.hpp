#pragma once

// Solver-agnostic integer programs: point connectivity (feasibility and
// fewest-strut variants) and cycle/path contour approximation over a strut
// catalog, all in the lifted 4-integer representation so that connectivity
// rows carry only small integer coefficients. Only the sample-box rows use
// phi as a floating-point coefficient.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zome/golden.hpp"

namespace zome {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Le, Eq, Ge };

struct MipVar {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  bool integer = false;
};

struct MipTerm {
  int var;
  double coef;
};

struct MipRow {
  std::string name;
  std::vector<MipTerm> terms;
  Sense sense = Sense::Eq;
  double rhs = 0.0;
  // True when every coefficient, the rhs and all referenced variables are
  // integral, so the row can be re-verified in exact integer arithmetic.
  bool all_integer = false;
};

// SOS-1 pair: at most one of the two variables may be nonzero.
struct Sos1Pair {
  int first;
  int second;
};

struct MipModel {
  std::vector<MipVar> vars;
  std::vector<MipRow> rows;
  std::vector<Sos1Pair> sos1;
  std::vector<double> objective;  // dense, minimize

  int add_var(std::string name, double lb, double ub, bool integer) {
    vars.push_back({std::move(name), lb, ub, integer});
    objective.push_back(0.0);
    return static_cast<int>(vars.size()) - 1;
  }

  void add_row(MipRow row) {
    bool all_int = std::fabs(row.rhs - std::round(row.rhs)) < 1e-12;
    for (const MipTerm& t : row.terms) {
      if (!vars[static_cast<std::size_t>(t.var)].integer ||
          std::fabs(t.coef - std::round(t.coef)) >= 1e-12)
        all_int = false;
    }
    row.all_integer = all_int;
    rows.push_back(std::move(row));
  }

  int num_integer_vars() const {
    int n = 0;
    for (const MipVar& v : vars) n += v.integer ? 1 : 0;
    return n;
  }
  int num_continuous_vars() const { return static_cast<int>(vars.size()) - num_integer_vars(); }
};

// Where the variables of a strut-selection model live. gamma variables are
// laid out per segment, then per catalog type, per column, sign + before -.
struct StrutVarLayout {
  int segments = 0;          // k for cycles, m for open paths
  int nodes = 0;             // node count (k for cycles, m+1 for paths)
  int g_var = -1;            // first of 2 continuous shift vars, -1 if absent
  int x_base = -1;           // x_hat variables: 4 per node
  int gamma_base = -1;
  int gamma_per_segment = 0; // 2 * total catalog columns

  int x_var(int node, int comp) const { return x_base + 4 * node + comp; }
  int gamma_var(int segment, int col_offset, bool positive) const {
    return gamma_base + segment * gamma_per_segment + 2 * col_offset + (positive ? 0 : 1);
  }
};

struct ModelOptions {
  bool use_sos1 = false;
  // Bound on each gamma component when the type carries no budget; keeps
  // branch and bound finite.
  std::int64_t gamma_default_bound = 30;
};

namespace detail {

// gamma column offsets: running index over (type, column) in catalog order.
inline int catalog_col_offset(const StrutCatalog& cat, int type, int col) {
  int off = 0;
  for (int t = 0; t < type; ++t) off += static_cast<int>(cat.struts[t].columns.size());
  return off + col;
}

inline void add_gamma_vars(MipModel& m, StrutVarLayout& lay, const StrutCatalog& cat,
                           int segments, const ModelOptions& opt) {
  lay.segments = segments;
  lay.gamma_per_segment = 2 * cat.total_columns();
  lay.gamma_base = static_cast<int>(m.vars.size());
  for (int s = 0; s < segments; ++s) {
    for (std::size_t t = 0; t < cat.struts.size(); ++t) {
      const StrutType& st = cat.struts[t];
      const double ub = static_cast<double>(st.budget.value_or(opt.gamma_default_bound));
      for (std::size_t c = 0; c < st.columns.size(); ++c) {
        for (const char* sign : {"+", "-"}) {
          std::string name = "g[" + std::to_string(s) + "]." + st.name + "." +
                             std::to_string(c) + sign;
          m.add_var(std::move(name), 0.0, ub, true);
        }
      }
    }
  }
  if (opt.use_sos1) {
    for (int s = 0; s < segments; ++s)
      for (std::size_t t = 0; t < cat.struts.size(); ++t)
        for (std::size_t c = 0; c < cat.struts[t].columns.size(); ++c) {
          const int off = catalog_col_offset(cat, static_cast<int>(t), static_cast<int>(c));
          m.sos1.push_back({lay.gamma_var(s, off, true), lay.gamma_var(s, off, false)});
        }
  }
}

// Four connectivity rows: x_to - x_from - sum_e M_hat_e (gamma+ - gamma-) = 0.
// Node indices of -1 drop that variable; fixed_delta is the pinned part of
// x_to - x_from (used when both ends are constants, as in point connectivity).
inline void add_connectivity(MipModel& m, const StrutVarLayout& lay, const StrutCatalog& cat,
                             int segment, int node_from, int node_to,
                             const ZomePoint& fixed_delta = {}) {
  for (int comp = 0; comp < 4; ++comp) {
    MipRow row;
    row.name = "conn[" + std::to_string(segment) + "][" + std::to_string(comp) + "]";
    row.sense = Sense::Eq;
    row.rhs = -static_cast<double>(fixed_delta.v[static_cast<std::size_t>(comp)]);
    if (node_to >= 0) row.terms.push_back({lay.x_var(node_to, comp), 1.0});
    if (node_from >= 0) row.terms.push_back({lay.x_var(node_from, comp), -1.0});
    for (std::size_t t = 0; t < cat.struts.size(); ++t) {
      for (std::size_t c = 0; c < cat.struts[t].columns.size(); ++c) {
        const double mcoef =
            static_cast<double>(cat.struts[t].columns[c][static_cast<std::size_t>(comp)]);
        if (mcoef == 0.0) continue;
        const int off = catalog_col_offset(cat, static_cast<int>(t), static_cast<int>(c));
        row.terms.push_back({lay.gamma_var(segment, off, true), -mcoef});
        row.terms.push_back({lay.gamma_var(segment, off, false), mcoef});
      }
    }
    m.add_row(std::move(row));
  }
}

// Budget rows over all segments: sum of gamma+ and gamma- per type <= B.
inline void add_budget_rows(MipModel& m, const StrutVarLayout& lay, const StrutCatalog& cat) {
  for (std::size_t t = 0; t < cat.struts.size(); ++t) {
    if (!cat.struts[t].budget) continue;
    MipRow row;
    row.name = "budget." + cat.struts[t].name;
    row.sense = Sense::Le;
    row.rhs = static_cast<double>(*cat.struts[t].budget);
    for (int s = 0; s < lay.segments; ++s)
      for (std::size_t c = 0; c < cat.struts[t].columns.size(); ++c) {
        const int off = catalog_col_offset(cat, static_cast<int>(t), static_cast<int>(c));
        row.terms.push_back({lay.gamma_var(s, off, true), 1.0});
        row.terms.push_back({lay.gamma_var(s, off, false), 1.0});
      }
    m.add_row(std::move(row));
  }
}

// Two-sided sample box rows for one node: each plane coordinate of
// proj(x_hat) (+ g) must lie within delta of the sample point.
inline void add_box_rows(MipModel& m, const StrutVarLayout& lay, int node, const Vec2& p,
                         double delta, bool with_shift) {
  const double target[2] = {p.x, p.y};
  for (int coord = 0; coord < 2; ++coord) {
    MipRow base;
    base.terms.push_back({lay.x_var(node, 2 * coord), 1.0});
    base.terms.push_back({lay.x_var(node, 2 * coord + 1), kPhi});
    if (with_shift) base.terms.push_back({lay.g_var + coord, 1.0});
    MipRow up = base;
    up.name = "box[" + std::to_string(node) + "][" + std::to_string(coord) + "]hi";
    up.sense = Sense::Le;
    up.rhs = target[coord] + delta;
    m.add_row(std::move(up));
    MipRow lo = std::move(base);
    lo.name = "box[" + std::to_string(node) + "][" + std::to_string(coord) + "]lo";
    lo.sense = Sense::Ge;
    lo.rhs = target[coord] - delta;
    m.add_row(std::move(lo));
  }
}

inline void set_cardinality_objective(MipModel& m, const StrutVarLayout& lay) {
  for (int s = 0; s < lay.segments; ++s)
    for (int c = 0; c < lay.gamma_per_segment; ++c)
      m.objective[static_cast<std::size_t>(lay.gamma_base + s * lay.gamma_per_segment + c)] = 1.0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Point connectivity (single segment, no nodes): find gamma >= 0 integer with
// sum_e M_hat_e (gamma+ - gamma-) = target.

struct DpcModel {
  MipModel mip;
  StrutVarLayout layout;
  StrutCatalog catalog;
  ZomePoint target;
};

inline DpcModel build_dpc_feasibility(const StrutCatalog& cat, const ZomePoint& target,
                                      ModelOptions opt = {}) {
  DpcModel out;
  out.catalog = cat;
  out.target = target;
  detail::add_gamma_vars(out.mip, out.layout, cat, 1, opt);
  detail::add_connectivity(out.mip, out.layout, cat, 0, -1, -1, target);
  detail::add_budget_rows(out.mip, out.layout, cat);
  return out;
}

// Fewest-strut variant: minimize the sum of all gamma variables. The
// objective itself induces the complementarity of + and - uses, so no SOS-1
// pairs are added.
inline DpcModel build_dpc_shortest(const StrutCatalog& cat, const ZomePoint& target,
                                   ModelOptions opt = {}) {
  opt.use_sos1 = false;
  DpcModel out = build_dpc_feasibility(cat, target, opt);
  detail::set_cardinality_objective(out.mip, out.layout);
  return out;
}

// ---------------------------------------------------------------------------
// Cycle approximation: k nodes in delta-boxes around the sample points, a
// global continuous shift g, cyclic connectivity, fewest struts.

struct DcasModel {
  MipModel mip;
  StrutVarLayout layout;
  StrutCatalog catalog;
  std::vector<Vec2> samples;
  double delta = 0.0;
  bool cycle = true;
  // Open-path variants pin the end nodes to these lifted points.
  std::optional<ZomePoint> fixed_start;
  std::optional<ZomePoint> fixed_end;
};

inline DcasModel build_dcas(const StrutCatalog& cat, const std::vector<Vec2>& samples,
                            double delta, ModelOptions opt = {}) {
  if (samples.size() < 3) throw Error("dcas: need at least 3 sample points");
  if (delta < 0.0) throw Error("dcas: delta must be nonnegative");
  const int k = static_cast<int>(samples.size());
  DcasModel out;
  out.catalog = cat;
  out.samples = samples;
  out.delta = delta;
  out.cycle = true;
  MipModel& m = out.mip;
  StrutVarLayout& lay = out.layout;

  lay.g_var = m.add_var("shift.x", -kInf, kInf, false);
  m.add_var("shift.y", -kInf, kInf, false);
  lay.nodes = k;
  lay.x_base = static_cast<int>(m.vars.size());
  for (int i = 0; i < k; ++i)
    for (const char* c : {"a1", "b1", "a2", "b2"})
      m.add_var("x[" + std::to_string(i) + "]." + c, -kInf, kInf, true);
  detail::add_gamma_vars(m, lay, cat, k, opt);

  // anchor: the first node is the lattice origin; g carries the placement
  for (int comp = 0; comp < 4; ++comp) {
    MipRow row;
    row.name = "anchor[" + std::to_string(comp) + "]";
    row.sense = Sense::Eq;
    row.rhs = 0.0;
    row.terms.push_back({lay.x_var(0, comp), 1.0});
    m.add_row(std::move(row));
  }
  for (int i = 0; i < k; ++i) detail::add_box_rows(m, lay, i, samples[i], delta, true);
  for (int s = 0; s < k; ++s) detail::add_connectivity(m, lay, cat, s, s, (s + 1) % k);
  detail::add_budget_rows(m, lay, cat);
  detail::set_cardinality_objective(m, lay);
  return out;
}

// Open-path variant: fixed integral end points, no shift, boxes only around
// the interior sample points.
inline DcasModel build_dpas(const StrutCatalog& cat, const std::vector<Vec2>& samples,
                            const ZomePoint& start, const ZomePoint& end, double delta,
                            ModelOptions opt = {}) {
  if (samples.size() < 2) throw Error("dpas: need at least 2 sample points");
  if (delta < 0.0) throw Error("dpas: delta must be nonnegative");
  const int nodes = static_cast<int>(samples.size());
  DcasModel out;
  out.catalog = cat;
  out.samples = samples;
  out.delta = delta;
  out.cycle = false;
  out.fixed_start = start;
  out.fixed_end = end;
  MipModel& m = out.mip;
  StrutVarLayout& lay = out.layout;

  lay.g_var = -1;
  lay.nodes = nodes;
  lay.x_base = static_cast<int>(m.vars.size());
  for (int i = 0; i < nodes; ++i)
    for (const char* c : {"a1", "b1", "a2", "b2"})
      m.add_var("x[" + std::to_string(i) + "]." + c, -kInf, kInf, true);
  detail::add_gamma_vars(m, lay, cat, nodes - 1, opt);

  auto pin = [&m, &lay](int node, const ZomePoint& p, const char* tag) {
    for (int comp = 0; comp < 4; ++comp) {
      MipRow row;
      row.name = std::string(tag) + "[" + std::to_string(comp) + "]";
      row.sense = Sense::Eq;
      row.rhs = static_cast<double>(p.v[static_cast<std::size_t>(comp)]);
      row.terms.push_back({lay.x_var(node, comp), 1.0});
      m.add_row(std::move(row));
    }
  };
  pin(0, start, "start");
  pin(nodes - 1, end, "end");
  for (int i = 1; i + 1 < nodes; ++i) detail::add_box_rows(m, lay, i, samples[i], delta, false);
  for (int s = 0; s + 1 < nodes; ++s) detail::add_connectivity(m, lay, cat, s, s, s + 1);
  detail::add_budget_rows(m, lay, cat);
  return out;
}

// ---------------------------------------------------------------------------
// Solution decoding

struct StrutUse {
  int type = 0;
  int column = 0;
  int sign = +1;
  std::int64_t count = 0;
};

struct SolutionDecode {
  Vec2 shift{0.0, 0.0};
  std::vector<ZomePoint> nodes;                 // one per node, lattice coordinates
  std::vector<std::vector<StrutUse>> segments;  // per segment, nonzero uses
};

namespace detail {

inline std::int64_t round_int(double v, double tol, const std::string& what) {
  const double r = std::round(v);
  if (std::fabs(v - r) > tol) throw Error("decode: non-integral value for " + what);
  return static_cast<std::int64_t>(r);
}

}  // namespace detail

// Rebuilds the exact integer node chain from the gamma values of a feasible
// assignment. The chain is recomputed from the strut counts, not read off the
// rounded node variables, and then checked against them.
inline SolutionDecode decode_solution(const DcasModel& model, const std::vector<double>& x,
                                      double tol = 1e-6) {
  if (x.size() != model.mip.vars.size()) throw Error("decode: assignment size mismatch");
  const StrutVarLayout& lay = model.layout;
  const StrutCatalog& cat = model.catalog;
  SolutionDecode out;
  if (lay.g_var >= 0)
    out.shift = {x[static_cast<std::size_t>(lay.g_var)], x[static_cast<std::size_t>(lay.g_var) + 1]};

  ZomePoint cur;
  if (model.fixed_start) cur = *model.fixed_start;
  out.nodes.push_back(cur);
  for (int s = 0; s < lay.segments; ++s) {
    std::vector<StrutUse> uses;
    ZomePoint delta;
    for (std::size_t t = 0; t < cat.struts.size(); ++t)
      for (std::size_t c = 0; c < cat.struts[t].columns.size(); ++c) {
        const int off = detail::catalog_col_offset(cat, static_cast<int>(t), static_cast<int>(c));
        for (int sign : {+1, -1}) {
          const int var = lay.gamma_var(s, off, sign > 0);
          const std::int64_t n = detail::round_int(x[static_cast<std::size_t>(var)], tol,
                                                   model.mip.vars[static_cast<std::size_t>(var)].name);
          if (n < 0) throw Error("decode: negative strut count");
          if (n == 0) continue;
          uses.push_back({static_cast<int>(t), static_cast<int>(c), sign, n});
          for (int comp = 0; comp < 4; ++comp) {
            const std::int64_t step = checked_mul(
                n, sign * cat.struts[t].columns[c][static_cast<std::size_t>(comp)]);
            delta.v[static_cast<std::size_t>(comp)] =
                checked_add(delta.v[static_cast<std::size_t>(comp)], step);
          }
        }
      }
    out.segments.push_back(std::move(uses));
    cur = cur + delta;
    if (!model.cycle || s + 1 < lay.segments) {
      if (s + 1 < lay.nodes) out.nodes.push_back(cur);
    }
  }
  // closure / endpoint consistency, exact in integers
  if (model.cycle) {
    if (!(cur == out.nodes.front())) throw Error("decode: cycle does not close");
  } else if (model.fixed_end && !(cur == *model.fixed_end)) {
    throw Error("decode: path does not reach its end point");
  }
  // the chain must agree with the assignment's node variables
  for (int i = 0; i < lay.nodes; ++i)
    for (int comp = 0; comp < 4; ++comp) {
      const std::int64_t v = detail::round_int(
          x[static_cast<std::size_t>(lay.x_var(i, comp))], tol, "node variable");
      if (v != out.nodes[static_cast<std::size_t>(i)].v[static_cast<std::size_t>(comp)])
        throw Error("decode: node chain disagrees with assignment");
    }
  // delta-box membership
  for (int i = 0; i < lay.nodes; ++i) {
    const Vec2 pos = project_to_plane(out.nodes[static_cast<std::size_t>(i)]) + out.shift;
    const Vec2 p = model.samples[static_cast<std::size_t>(i)];
    const bool interior = model.cycle || (i > 0 && i + 1 < lay.nodes);
    if (interior && (std::fabs(pos.x - p.x) > model.delta + tol ||
                     std::fabs(pos.y - p.y) > model.delta + tol))
      throw Error("decode: node escapes its sample box");
  }
  return out;
}

// ---------------------------------------------------------------------------
// LP-format dump (CPLEX LP dialect) for differential testing against external
// solvers.

inline void write_lp(const MipModel& m, std::ostream& os) {
  auto term = [&m](const MipTerm& t) {
    std::string s = (t.coef < 0 ? " - " : " + ");
    s += std::to_string(std::fabs(t.coef)) + " " + m.vars[static_cast<std::size_t>(t.var)].name;
    return s;
  };
  os << "Minimize\n obj:";
  bool any = false;
  for (std::size_t j = 0; j < m.objective.size(); ++j)
    if (m.objective[j] != 0.0) {
      os << term({static_cast<int>(j), m.objective[j]});
      any = true;
    }
  if (!any) os << " 0 " << m.vars.front().name;
  os << "\nSubject To\n";
  for (const MipRow& r : m.rows) {
    os << " " << r.name << ":";
    for (const MipTerm& t : r.terms) os << term(t);
    os << (r.sense == Sense::Le ? " <= " : r.sense == Sense::Ge ? " >= " : " = ") << r.rhs
       << "\n";
  }
  os << "Bounds\n";
  for (const MipVar& v : m.vars) {
    os << " ";
    if (v.lb == -kInf)
      os << "-inf";
    else
      os << v.lb;
    os << " <= " << v.name << " <= ";
    if (v.ub == kInf)
      os << "+inf";
    else
      os << v.ub;
    os << "\n";
  }
  os << "Generals\n";
  for (const MipVar& v : m.vars)
    if (v.integer) os << " " << v.name;
  os << "\nSOS\n";
  int si = 0;
  for (const Sos1Pair& p : m.sos1)
    os << " s" << si++ << ": S1 :: " << m.vars[static_cast<std::size_t>(p.first)].name
       << ":1 " << m.vars[static_cast<std::size_t>(p.second)].name << ":2\n";
  os << "End\n";
}

}  // namespace zome
