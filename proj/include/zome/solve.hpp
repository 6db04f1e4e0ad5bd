#pragma once

// Branch-and-bound mixed-integer solver over MipModel: LP relaxations via the
// bounded-variable primal simplex, most-fractional integer branching, SOS-1
// branching, best-bound node selection with depth-first plunging, a rounding
// heuristic with exact integer re-verification, bound tightening presolve,
// time/node limits and optimality-gap reporting.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "zome/model.hpp"
#include "zome/simplex.hpp"

namespace zome {

struct SolveConfig {
  double time_limit_s = 900.0;
  double gap_tolerance = 1e-6;       // relative
  double integrality_tol = 1e-6;
  double feasibility_tol = 1e-7;
  std::optional<std::int64_t> node_limit;
  std::uint64_t rng_seed = 0;
  int threads = 1;
  // Reformulate SOS-1 pairs with auxiliary binaries and big-M rows instead of
  // branching on them (cross-validation path). Requires finite upper bounds.
  bool sos1_big_m = false;
  // Observer for (incumbent, proven bound) improvements; used by tests.
  std::function<void(double, double)> progress;
};

enum class SolveStatus {
  Optimal,
  FeasibleTimeLimit,
  InfeasibleProven,
  NoSolutionTimeLimit,
  Unbounded,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleTimeLimit: return "feasible-time-limit";
    case SolveStatus::InfeasibleProven: return "infeasible";
    case SolveStatus::NoSolutionTimeLimit: return "no-solution-within-limit";
    default: return "unbounded";
  }
}

struct SolveResult {
  SolveStatus status = SolveStatus::NoSolutionTimeLimit;
  std::optional<std::vector<double>> assignment;
  double objective = kInf;
  double best_bound = -kInf;
  double gap = kInf;  // (incumbent - bound) / max(1, |incumbent|)
  std::int64_t nodes_explored = 0;
  double wall_time_s = 0.0;
};

// Branching decision on an LP point: integer branching on the most fractional
// integer variable (ties to the lowest index) into floor/ceil children; when
// all integers sit on integers, SOS-1 branching on the most violated pair,
// fixing one side to zero in each child; otherwise the node is integral.
struct BranchDecision {
  enum class Kind { None, Integer, Sos1 } kind = Kind::None;
  int var = -1;          // integer branching: variable index
  double floor_ub = 0.0; // down-child upper bound
  double ceil_lb = 0.0;  // up-child lower bound
  int sos_index = -1;    // SOS-1 branching: pair index
  std::vector<int> near_best;  // integer candidates within 0.05 of the best score
};

inline BranchDecision choose_branch(const MipModel& model, const std::vector<double>& x,
                                    double int_tol = 1e-6) {
  BranchDecision d;
  double best = -1.0;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (!model.vars[j].integer) continue;
    const double frac = x[j] - std::floor(x[j]);
    const double dist = std::min(frac, 1.0 - frac);
    if (dist <= int_tol) continue;
    if (dist > best + 1e-12) {
      best = dist;
      d.var = static_cast<int>(j);
      d.near_best.clear();
      d.near_best.push_back(d.var);
    } else if (dist > best - 0.05) {
      d.near_best.push_back(static_cast<int>(j));
    }
  }
  if (d.var >= 0) {
    d.kind = BranchDecision::Kind::Integer;
    d.floor_ub = std::floor(x[static_cast<std::size_t>(d.var)]);
    d.ceil_lb = std::ceil(x[static_cast<std::size_t>(d.var)]);
    return d;
  }
  double worst = int_tol;
  for (std::size_t s = 0; s < model.sos1.size(); ++s) {
    const double a = std::fabs(x[static_cast<std::size_t>(model.sos1[s].first)]);
    const double b = std::fabs(x[static_cast<std::size_t>(model.sos1[s].second)]);
    if (std::min(a, b) > worst) {
      worst = std::min(a, b);
      d.sos_index = static_cast<int>(s);
    }
  }
  if (d.sos_index >= 0) d.kind = BranchDecision::Kind::Sos1;
  return d;
}

namespace detail {

inline double relative_gap(double incumbent, double bound) {
  if (incumbent == kInf) return kInf;
  return (incumbent - bound) / std::max(1.0, std::fabs(incumbent));
}

// Feasibility check of a candidate point: integer variables must sit on
// integers (then get rounded exactly), integer-only rows are re-verified in
// exact 64-bit arithmetic, everything else within tolerance.
inline bool check_assignment(const MipModel& model, std::vector<double>& x, double int_tol,
                             double feas_tol, double* objective_out) {
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    const MipVar& v = model.vars[j];
    if (v.integer) {
      const double r = std::round(x[j]);
      if (std::fabs(x[j] - r) > int_tol) return false;
      x[j] = r;
    }
    if (x[j] < v.lb - feas_tol || x[j] > v.ub + feas_tol) return false;
  }
  for (const MipRow& row : model.rows) {
    if (row.all_integer) {
      std::int64_t act = 0;
      bool ok = true;
      try {
        for (const MipTerm& t : row.terms)
          act = checked_add(act, checked_mul(static_cast<std::int64_t>(std::llround(t.coef)),
                                             static_cast<std::int64_t>(std::llround(
                                                 x[static_cast<std::size_t>(t.var)]))));
      } catch (const OverflowError&) {
        ok = false;
      }
      if (!ok) return false;
      const std::int64_t rhs = static_cast<std::int64_t>(std::llround(row.rhs));
      if (row.sense == Sense::Eq && act != rhs) return false;
      if (row.sense == Sense::Le && act > rhs) return false;
      if (row.sense == Sense::Ge && act < rhs) return false;
    } else {
      double act = 0.0, scale = 1.0;
      for (const MipTerm& t : row.terms) {
        act += t.coef * x[static_cast<std::size_t>(t.var)];
        scale = std::max(scale, std::fabs(t.coef * x[static_cast<std::size_t>(t.var)]));
      }
      const double slack = feas_tol * 16.0 * scale;
      if (row.sense == Sense::Eq && std::fabs(act - row.rhs) > slack) return false;
      if (row.sense == Sense::Le && act > row.rhs + slack) return false;
      if (row.sense == Sense::Ge && act < row.rhs - slack) return false;
    }
  }
  for (const Sos1Pair& pr : model.sos1) {
    if (std::fabs(x[static_cast<std::size_t>(pr.first)]) > int_tol &&
        std::fabs(x[static_cast<std::size_t>(pr.second)]) > int_tol)
      return false;
  }
  if (objective_out) {
    double obj = 0.0;
    for (std::size_t j = 0; j < model.vars.size(); ++j) obj += model.objective[j] * x[j];
    *objective_out = obj;
  }
  return true;
}

// Activity-based bound tightening; returns false when some variable domain
// becomes empty (proving infeasibility).
inline bool tighten_bounds(const MipModel& model, std::vector<double>& lb,
                           std::vector<double>& ub, int max_passes = 256) {
  auto tighten_var = [&](int j, double lo, double hi) {
    const bool integer = model.vars[static_cast<std::size_t>(j)].integer;
    if (lo > -kInf && integer) lo = std::ceil(lo - 1e-9);
    if (hi < kInf && integer) hi = std::floor(hi + 1e-9);
    bool changed = false;
    if (lo > lb[static_cast<std::size_t>(j)] + 1e-12) {
      lb[static_cast<std::size_t>(j)] = lo;
      changed = true;
    }
    if (hi < ub[static_cast<std::size_t>(j)] - 1e-12) {
      ub[static_cast<std::size_t>(j)] = hi;
      changed = true;
    }
    return changed;
  };
  for (int pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    for (const MipRow& row : model.rows) {
      double min_act = 0.0, max_act = 0.0;
      int min_inf = 0, max_inf = 0;  // count of infinite contributions
      for (const MipTerm& t : row.terms) {
        const double l = lb[static_cast<std::size_t>(t.var)];
        const double u = ub[static_cast<std::size_t>(t.var)];
        const double a = t.coef;
        const double cmin = a > 0 ? a * l : a * u;
        const double cmax = a > 0 ? a * u : a * l;
        if (std::isfinite(cmin)) min_act += cmin; else ++min_inf;
        if (std::isfinite(cmax)) max_act += cmax; else ++max_inf;
      }
      // quick infeasibility tests
      if (min_inf == 0 && (row.sense != Sense::Ge) && min_act > row.rhs + 1e-7) return false;
      if (max_inf == 0 && (row.sense != Sense::Le) && max_act < row.rhs - 1e-7) return false;
      for (const MipTerm& t : row.terms) {
        const double l = lb[static_cast<std::size_t>(t.var)];
        const double u = ub[static_cast<std::size_t>(t.var)];
        const double a = t.coef;
        if (a == 0.0) continue;
        const double cmin = a > 0 ? a * l : a * u;
        const double cmax = a > 0 ? a * u : a * l;
        // upper side: sum <= rhs applies for Le and Eq
        if (row.sense != Sense::Ge) {
          const bool rest_finite = min_inf == (std::isfinite(cmin) ? 0 : 1);
          if (rest_finite) {
            const double rest = min_act - (std::isfinite(cmin) ? cmin : 0.0);
            const double room = row.rhs - rest;
            if (a > 0)
              changed |= tighten_var(t.var, -kInf, room / a);
            else
              changed |= tighten_var(t.var, room / a, kInf);
          }
        }
        // lower side: sum >= rhs applies for Ge and Eq
        if (row.sense != Sense::Le) {
          const bool rest_finite = max_inf == (std::isfinite(cmax) ? 0 : 1);
          if (rest_finite) {
            const double rest = max_act - (std::isfinite(cmax) ? cmax : 0.0);
            const double room = row.rhs - rest;
            if (a > 0)
              changed |= tighten_var(t.var, room / a, kInf);
            else
              changed |= tighten_var(t.var, -kInf, room / a);
          }
        }
      }
    }
    for (std::size_t j = 0; j < model.vars.size(); ++j)
      if (lb[j] > ub[j] + 1e-9) return false;
    if (!changed) break;
  }
  return true;
}

struct SharedIncumbent {
  std::mutex mu;
  double objective = kInf;
  std::vector<double> x;
  bool have = false;
  std::atomic<bool> stop{false};
};

class BnbWorker {
 public:
  BnbWorker(const MipModel& model, const SolveConfig& cfg, SharedIncumbent& shared,
            const std::vector<double>& root_lb, const std::vector<double>& root_ub,
            std::uint64_t seed, bool jitter,
            std::chrono::steady_clock::time_point deadline)
      : model_(model),
        cfg_(cfg),
        shared_(shared),
        lp_(to_lp(model)),
        rng_(seed),
        jitter_(jitter),
        deadline_(deadline),
        root_lb_(root_lb),
        root_ub_(root_ub) {
    integral_objective_ = true;
    for (std::size_t j = 0; j < model.vars.size(); ++j) {
      if (model.objective[j] == 0.0) continue;
      if (!model.vars[j].integer ||
          std::fabs(model.objective[j] - std::round(model.objective[j])) > 1e-12)
        integral_objective_ = false;
    }
  }

  // true when the tree was exhausted (optimality or infeasibility proven)
  bool run() {
    Node root;
    root.lb = root_lb_;
    root.ub = root_ub_;
    root.bound = -kInf;
    push_open(std::move(root));
    while (true) {
      if (shared_.stop.load(std::memory_order_relaxed)) return exhausted_ = false;
      if (std::chrono::steady_clock::now() >= deadline_) return exhausted_ = false;
      if (cfg_.node_limit && nodes_ >= *cfg_.node_limit) return exhausted_ = false;
      std::optional<Node> node = pop_node();
      if (!node) return exhausted_ = true;
      process(*node);
    }
  }

  double worker_bound() const {
    if (exhausted_) return incumbent_value();
    double b = open_bounds_.empty() ? kInf : *open_bounds_.begin();
    return std::min(b, incumbent_value());
  }
  std::int64_t nodes() const { return nodes_; }
  bool unbounded() const { return unbounded_; }

 private:
  struct Node {
    std::vector<double> lb, ub;
    double bound = -kInf;
    std::int64_t seq = 0;
    int depth = 0;
  };
  struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
      return a.seq > b.seq;
    }
  };

  const MipModel& model_;
  const SolveConfig& cfg_;
  SharedIncumbent& shared_;
  LpProblem lp_;
  std::mt19937_64 rng_;
  bool jitter_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<double> root_lb_, root_ub_;
  bool integral_objective_ = false;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue_;
  std::vector<Node> dive_;
  std::multiset<double> open_bounds_;
  std::int64_t nodes_ = 0, seq_ = 0;
  bool exhausted_ = false;
  bool unbounded_ = false;

  double incumbent_value() const {
    std::lock_guard<std::mutex> lock(const_cast<std::mutex&>(shared_.mu));
    return shared_.objective;
  }

  void push_open(Node n) {
    open_bounds_.insert(n.bound);
    queue_.push(std::move(n));
  }
  void push_dive(Node n) {
    open_bounds_.insert(n.bound);
    dive_.push_back(std::move(n));
  }
  std::optional<Node> pop_node() {
    while (!dive_.empty() || !queue_.empty()) {
      Node n;
      if (!dive_.empty()) {
        n = std::move(dive_.back());
        dive_.pop_back();
      } else {
        n = queue_.top();
        queue_.pop();
      }
      open_bounds_.erase(open_bounds_.find(n.bound));
      if (n.bound < cutoff()) return n;
      // else fathomed by bound; keep draining
    }
    return std::nullopt;
  }

  double cutoff() const {
    const double inc = incumbent_value();
    if (inc == kInf) return kInf;
    return integral_objective_ ? inc - 0.5 : inc - 1e-9;
  }

  void offer_incumbent(std::vector<double> x) {
    double obj = 0.0;
    if (!check_assignment(model_, x, cfg_.integrality_tol, cfg_.feasibility_tol, &obj)) return;
    std::lock_guard<std::mutex> lock(shared_.mu);
    if (obj < shared_.objective - 1e-12) {
      shared_.objective = obj;
      shared_.x = std::move(x);
      shared_.have = true;
    }
  }

  void process(Node node) {
    ++nodes_;
    if (cfg_.progress && !jitter_) {
      double b = open_bounds_.empty() ? node.bound : std::min(node.bound, *open_bounds_.begin());
      cfg_.progress(incumbent_value(), std::min(b, incumbent_value()));
    }
    // integer interval propagation under the branching bounds; empty domains
    // fathom the node before any LP work
    if (node.depth > 0 && !tighten_bounds(model_, node.lb, node.ub, 8)) return;
    LpResult lp = solve_lp(lp_, node.lb, node.ub, cfg_.feasibility_tol);
    if (lp.status == LpStatus::NumericalFailure) {
      // perturbation retry: loosen the feasibility tolerance slightly
      lp = solve_lp(lp_, node.lb, node.ub, cfg_.feasibility_tol * 64.0);
    }
    if (lp.status == LpStatus::Infeasible) return;
    if (lp.status == LpStatus::Unbounded) {
      if (node.depth == 0) unbounded_ = true;
      // an unbounded relaxation cannot prune; branch blindly on some int var
      blind_branch(node);
      return;
    }
    if (lp.status == LpStatus::NumericalFailure) {
      // cannot prune without a proof; keep exploring below this node
      blind_branch(node);
      return;
    }
    double bound = std::max(node.bound, lp.objective);
    if (integral_objective_) bound = std::ceil(bound - 1e-6);
    if (bound >= cutoff()) return;

    BranchDecision dec = choose_branch(model_, lp.x, cfg_.integrality_tol);
    int branch_var = dec.var;
    if (dec.kind == BranchDecision::Kind::Integer && jitter_ && dec.near_best.size() > 1) {
      branch_var = dec.near_best[std::uniform_int_distribution<std::size_t>(
          0, dec.near_best.size() - 1)(rng_)];
    }

    if (dec.kind == BranchDecision::Kind::None) {
      offer_incumbent(std::move(lp.x));
      return;
    }
    if (dec.kind == BranchDecision::Kind::Sos1) {
      const Sos1Pair pr = model_.sos1[static_cast<std::size_t>(dec.sos_index)];
      Node a = node, b = node;
      a.bound = b.bound = bound;
      a.seq = ++seq_;
      b.seq = ++seq_;
      a.depth = b.depth = node.depth + 1;
      a.ub[static_cast<std::size_t>(pr.first)] = 0.0;   // keep 'second'
      b.ub[static_cast<std::size_t>(pr.second)] = 0.0;  // keep 'first'
      const bool keep_first = std::fabs(lp.x[static_cast<std::size_t>(pr.first)]) >=
                              std::fabs(lp.x[static_cast<std::size_t>(pr.second)]);
      if (keep_first) {
        push_open(std::move(a));
        push_dive(std::move(b));
      } else {
        push_open(std::move(b));
        push_dive(std::move(a));
      }
      return;
    }

    // rounding heuristic before branching
    rounding_heuristic(lp.x, node);

    const double v = lp.x[static_cast<std::size_t>(branch_var)];
    Node down = node, up = node;
    down.bound = up.bound = bound;
    down.depth = up.depth = node.depth + 1;
    down.seq = ++seq_;
    up.seq = ++seq_;
    down.ub[static_cast<std::size_t>(branch_var)] = std::floor(v);
    up.lb[static_cast<std::size_t>(branch_var)] = std::ceil(v);
    const bool dive_up = (v - std::floor(v)) >= 0.5;
    if (dive_up) {
      push_open(std::move(down));
      push_dive(std::move(up));
    } else {
      push_open(std::move(up));
      push_dive(std::move(down));
    }
  }

  void blind_branch(Node& node) {
    for (std::size_t j = 0; j < model_.vars.size(); ++j) {
      if (!model_.vars[j].integer) continue;
      if (!std::isfinite(node.lb[j]) || !std::isfinite(node.ub[j])) continue;
      if (node.ub[j] - node.lb[j] < 0.5) continue;
      const double mid = std::floor(0.5 * (node.lb[j] + node.ub[j]));
      Node down = node, up = node;
      down.seq = ++seq_;
      up.seq = ++seq_;
      down.depth = up.depth = node.depth + 1;
      down.ub[j] = mid;
      up.lb[j] = mid + 1.0;
      push_open(std::move(up));
      push_dive(std::move(down));
      return;
    }
    // no branching candidate left: drop the node (cannot certify anything)
  }

  void rounding_heuristic(const std::vector<double>& xlp, const Node& node) {
    std::vector<double> x = xlp;
    bool has_cont = false;
    for (std::size_t j = 0; j < model_.vars.size(); ++j) {
      if (model_.vars[j].integer) {
        double r = std::round(x[j]);
        r = std::clamp(r, node.lb[j], node.ub[j]);
        x[j] = r;
      } else {
        has_cont = true;
      }
    }
    if (has_cont) {
      // re-solve the continuous part with the integers fixed
      std::vector<double> lo = node.lb, hi = node.ub;
      for (std::size_t j = 0; j < model_.vars.size(); ++j)
        if (model_.vars[j].integer) lo[j] = hi[j] = x[j];
      LpResult rep = solve_lp(lp_, lo, hi, cfg_.feasibility_tol);
      if (rep.status != LpStatus::Optimal) return;
      x = std::move(rep.x);
    }
    offer_incumbent(std::move(x));
  }
};

// SOS-1 via auxiliary binaries: u <= M z_u, v <= M z_v, z_u + z_v <= 1.
inline MipModel big_m_reformulation(const MipModel& model) {
  MipModel m = model;
  m.sos1.clear();
  for (const Sos1Pair& pr : model.sos1) {
    const MipVar& a = model.vars[static_cast<std::size_t>(pr.first)];
    const MipVar& b = model.vars[static_cast<std::size_t>(pr.second)];
    if (a.ub == kInf || b.ub == kInf || a.lb < 0.0 || b.lb < 0.0)
      throw Error("big-M SOS-1 reformulation needs finite nonnegative bounds");
    const int za = m.add_var(a.name + ".z", 0.0, 1.0, true);
    const int zb = m.add_var(b.name + ".z", 0.0, 1.0, true);
    m.add_row({a.name + ".bigM", {{pr.first, 1.0}, {za, -a.ub}}, Sense::Le, 0.0, false});
    m.add_row({b.name + ".bigM", {{pr.second, 1.0}, {zb, -b.ub}}, Sense::Le, 0.0, false});
    m.add_row({a.name + ".sos", {{za, 1.0}, {zb, 1.0}}, Sense::Le, 1.0, false});
  }
  return m;
}

}  // namespace detail

inline SolveResult solve(const MipModel& model_in, const SolveConfig& cfg = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(cfg.time_limit_s));
  const MipModel model = (cfg.sos1_big_m && !model_in.sos1.empty())
                             ? detail::big_m_reformulation(model_in)
                             : model_in;
  SolveResult res;
  auto finish = [&](SolveResult r) {
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };

  std::vector<double> lb, ub;
  lb.reserve(model.vars.size());
  ub.reserve(model.vars.size());
  for (const MipVar& v : model.vars) {
    lb.push_back(v.lb);
    ub.push_back(v.ub);
  }
  if (!detail::tighten_bounds(model, lb, ub)) {
    res.status = SolveStatus::InfeasibleProven;
    res.best_bound = kInf;
    res.gap = kInf;
    return finish(res);
  }

  detail::SharedIncumbent shared;
  const int threads = std::max(1, cfg.threads);
  std::vector<std::unique_ptr<detail::BnbWorker>> workers;
  for (int w = 0; w < threads; ++w)
    workers.push_back(std::make_unique<detail::BnbWorker>(
        model, cfg, shared, lb, ub, cfg.rng_seed + static_cast<std::uint64_t>(w) * 7919,
        /*jitter=*/w > 0, deadline));

  std::vector<char> worker_exhausted(static_cast<std::size_t>(threads), 0);
  if (threads == 1) {
    worker_exhausted[0] = workers[0]->run() ? 1 : 0;
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        worker_exhausted[static_cast<std::size_t>(w)] = workers[static_cast<std::size_t>(w)]->run() ? 1 : 0;
        if (worker_exhausted[static_cast<std::size_t>(w)]) shared.stop.store(true);
      });
    for (std::thread& th : pool) th.join();
  }

  bool any_exhausted = false;
  bool any_unbounded = false;
  double bound = -kInf;
  for (int w = 0; w < threads; ++w) {
    any_exhausted = any_exhausted || worker_exhausted[static_cast<std::size_t>(w)] != 0;
    any_unbounded = any_unbounded || workers[static_cast<std::size_t>(w)]->unbounded();
    bound = std::max(bound, workers[static_cast<std::size_t>(w)]->worker_bound());
    res.nodes_explored += workers[static_cast<std::size_t>(w)]->nodes();
  }

  if (shared.have) {
    res.assignment = shared.x;
    res.objective = shared.objective;
    bound = std::min(bound, res.objective);
  }
  res.best_bound = bound;

  if (any_exhausted) {
    if (shared.have) {
      res.status = SolveStatus::Optimal;
      res.best_bound = res.objective;
      res.gap = 0.0;
    } else if (any_unbounded) {
      res.status = SolveStatus::Unbounded;
      res.gap = kInf;
    } else {
      res.status = SolveStatus::InfeasibleProven;
      res.best_bound = kInf;
      res.gap = kInf;
    }
    return finish(res);
  }
  if (any_unbounded && !shared.have) {
    res.status = SolveStatus::Unbounded;
    res.gap = kInf;
    return finish(res);
  }
  res.status = shared.have ? SolveStatus::FeasibleTimeLimit : SolveStatus::NoSolutionTimeLimit;
  res.gap = detail::relative_gap(res.objective, res.best_bound);
  return finish(res);
}

}  // namespace zome
