#pragma once

// Ordering each segment's strut multiset against the distance field: per-strut
// cost, exact enumeration with partial-cost pruning, greedy construction,
// cycle assembly and crossing detection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <tuple>
#include <vector>

#include "zome/field.hpp"
#include "zome/golden.hpp"
#include "zome/model.hpp"

namespace zome {

// Averaged-area approximation error of a strut between p1 and p2: mean of
// |d(.)| over 5 evenly spaced points times the strut length.
inline double strut_cost(const DistanceField& f, const Vec2& p1, const Vec2& p2) {
  constexpr int kSamples = 3;  // interior sample count, 5 evaluation points total
  double acc = 0.0;
  for (int i = 0; i <= kSamples + 1; ++i) {
    const double t = static_cast<double>(i) / (kSamples + 1);
    const Vec2 p{t * p1.x + (1.0 - t) * p2.x, t * p1.y + (1.0 - t) * p2.y};
    acc += std::fabs(sample_distance(f, p));
  }
  return norm(p1 - p2) / (kSamples + 2) * acc;
}

struct PlacedStrut {
  StrutUse strut;  // count is always 1 here
  Vec2 start, end;
  double cost = 0.0;
};

struct ZomeCycle {
  Vec2 shift{0.0, 0.0};
  std::vector<Vec2> nodes;  // shifted plane positions, one per segment start
  std::vector<std::vector<PlacedStrut>> segments;
  double total_cost = 0.0;
  bool closed = true;  // open chains come from path (fixed-endpoint) models
};

namespace detail {

// A segment's struts expanded to unit counts and grouped by identity
// (type, column, sign), in catalog order.
struct StrutGroup {
  StrutUse use;  // count = multiplicity
  Vec2 step;
};

inline std::vector<StrutGroup> group_struts(const StrutCatalog& cat,
                                            const std::vector<StrutUse>& multiset) {
  std::vector<StrutGroup> groups;
  for (const StrutUse& u : multiset) {
    if (u.count <= 0) continue;
    bool merged = false;
    for (StrutGroup& g : groups)
      if (g.use.type == u.type && g.use.column == u.column && g.use.sign == u.sign) {
        g.use.count += u.count;
        merged = true;
        break;
      }
    if (!merged) {
      const Vec2 col = cat.struts[static_cast<std::size_t>(u.type)].plane_column(u.column);
      groups.push_back({u, {u.sign * col.x, u.sign * col.y}});
    }
  }
  // catalog order: type, column, positive use before negative
  std::sort(groups.begin(), groups.end(), [](const StrutGroup& a, const StrutGroup& b) {
    return std::make_tuple(a.use.type, a.use.column, -a.use.sign) <
           std::make_tuple(b.use.type, b.use.column, -b.use.sign);
  });
  return groups;
}

inline std::vector<PlacedStrut> place_order(const DistanceField& f, const Vec2& start,
                                            const std::vector<const StrutGroup*>& order) {
  std::vector<PlacedStrut> placed;
  Vec2 cur = start;
  for (const StrutGroup* g : order) {
    const Vec2 nxt = cur + g->step;
    PlacedStrut ps;
    ps.strut = g->use;
    ps.strut.count = 1;
    ps.start = cur;
    ps.end = nxt;
    ps.cost = strut_cost(f, cur, nxt);
    placed.push_back(ps);
    cur = nxt;
  }
  return placed;
}

}  // namespace detail

inline constexpr int kExactArrangeCap = 15;

// Minimum-cost permutation of the segment's strut multiset by depth-first
// enumeration over multiset permutations, pruning once the accumulated cost
// reaches the best known (costs are nonnegative). First optimum in catalog
// order wins ties.
inline std::vector<PlacedStrut> exact_arrange(const StrutCatalog& cat, const DistanceField& f,
                                              const std::vector<StrutUse>& multiset,
                                              const Vec2& start, int cap = kExactArrangeCap) {
  std::vector<detail::StrutGroup> groups = detail::group_struts(cat, multiset);
  std::int64_t total = 0;
  for (const detail::StrutGroup& g : groups) total += g.use.count;
  if (total > cap) throw Error("exact_arrange: strut count exceeds enumeration cap");
  if (total == 0) return {};

  std::vector<std::int64_t> remaining(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) remaining[i] = groups[i].use.count;
  std::vector<int> order, best_order;
  double best_cost = kInf;
  std::vector<Vec2> pos_stack{start};

  // partial-sum bound; the tie margin keeps the first (catalog-order) optimum
  // against summation-order noise
  std::function<void(double)> dfs = [&](double acc) {
    if (acc >= best_cost - 1e-12) return;
    if (static_cast<std::int64_t>(order.size()) == total) {
      best_cost = acc;
      best_order = order;
      return;
    }
    const Vec2 cur = pos_stack.back();
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      if (remaining[gi] == 0) continue;
      const Vec2 nxt = cur + groups[gi].step;
      const double c = strut_cost(f, cur, nxt);
      remaining[gi]--;
      order.push_back(static_cast<int>(gi));
      pos_stack.push_back(nxt);
      dfs(acc + c);
      pos_stack.pop_back();
      order.pop_back();
      remaining[gi]++;
    }
  };
  dfs(0.0);

  std::vector<const detail::StrutGroup*> ptr_order;
  ptr_order.reserve(best_order.size());
  for (int gi : best_order) ptr_order.push_back(&groups[static_cast<std::size_t>(gi)]);
  return detail::place_order(f, start, ptr_order);
}

// Greedy construction: repeatedly append the cheapest remaining strut from the
// current end point; ties fall to catalog order.
inline std::vector<PlacedStrut> greedy_arrange(const StrutCatalog& cat, const DistanceField& f,
                                               const std::vector<StrutUse>& multiset,
                                               const Vec2& start) {
  std::vector<detail::StrutGroup> groups = detail::group_struts(cat, multiset);
  std::vector<std::int64_t> remaining(groups.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) total += remaining[i] = groups[i].use.count;
  std::vector<const detail::StrutGroup*> order;
  Vec2 cur = start;
  for (std::int64_t step = 0; step < total; ++step) {
    int best = -1;
    double best_cost = kInf;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      if (remaining[gi] == 0) continue;
      const double c = strut_cost(f, cur, cur + groups[gi].step);
      if (c < best_cost - 1e-12) {
        best_cost = c;
        best = static_cast<int>(gi);
      }
    }
    order.push_back(&groups[static_cast<std::size_t>(best)]);
    remaining[static_cast<std::size_t>(best)]--;
    cur = cur + groups[static_cast<std::size_t>(best)].step;
  }
  return detail::place_order(f, start, order);
}

enum class ArrangeMode { Exact, Greedy, Auto };

// Builds the output cycle from a decoded solution: per segment, an
// approximation-error minimizing order of that segment's struts between the
// decoded node positions. Segments are independent and arranged in parallel.
inline ZomeCycle assemble_cycle(const SolutionDecode& decode, const StrutCatalog& cat,
                                const DistanceField& f, ArrangeMode mode = ArrangeMode::Auto,
                                int cap = kExactArrangeCap) {
  ZomeCycle cycle;
  cycle.shift = decode.shift;
  cycle.closed = decode.segments.size() == decode.nodes.size();
  for (const ZomePoint& p : decode.nodes) cycle.nodes.push_back(project_to_plane(p) + decode.shift);
  const std::size_t nseg = decode.segments.size();
  cycle.segments.resize(nseg);
  auto arrange_one = [&](std::size_t s) {
    const Vec2 start = project_to_plane(decode.nodes[s % decode.nodes.size()]) + decode.shift;
    const std::vector<StrutUse>& multi = decode.segments[s];
    std::int64_t total = 0;
    for (const StrutUse& u : multi) total += u.count;
    const bool exact = mode == ArrangeMode::Exact || (mode == ArrangeMode::Auto && total <= cap);
    return exact ? exact_arrange(cat, f, multi, start, std::max<int>(cap, static_cast<int>(total)))
                 : greedy_arrange(cat, f, multi, start);
  };
  if (nseg > 1) {
    std::vector<std::future<std::vector<PlacedStrut>>> futs;
    futs.reserve(nseg);
    for (std::size_t s = 0; s < nseg; ++s)
      futs.push_back(std::async(std::launch::async, arrange_one, s));
    for (std::size_t s = 0; s < nseg; ++s) cycle.segments[s] = futs[s].get();
  } else if (nseg == 1) {
    cycle.segments[0] = arrange_one(0);
  }
  for (const auto& seg : cycle.segments)
    for (const PlacedStrut& ps : seg) cycle.total_cost += ps.cost;
  return cycle;
}

// ---------------------------------------------------------------------------
// Crossing detection

struct StrutRef {
  int segment = 0;
  int index = 0;
  friend bool operator==(const StrutRef&, const StrutRef&) = default;
};

struct CrossingReport {
  std::vector<std::pair<StrutRef, StrutRef>> crossings;
  std::vector<std::pair<int, int>> coincident_nodes;  // node index pairs at one spot
};

namespace detail {

inline bool open_segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                                    double eps = 1e-9) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  // collinear overlap of interiors
  auto on_open = [eps](const Vec2& p, const Vec2& q, const Vec2& r) {
    if (std::fabs(cross(q - p, r - p)) > eps) return false;
    const double t = dot(r - p, q - p) / dot(q - p, q - p);
    return t > eps && t < 1.0 - eps;
  };
  return on_open(a, b, c) || on_open(a, b, d) || on_open(c, d, a) || on_open(c, d, b);
}

}  // namespace detail

// All pairs of non-adjacent placed struts whose open segments intersect, plus
// coincident-node reports (two cycle nodes collapsing onto one spot).
inline CrossingReport detect_crossings(const ZomeCycle& cycle, double eps = 1e-9) {
  CrossingReport rep;
  struct Item {
    StrutRef ref;
    Vec2 a, b;
    int order;  // position along the whole cycle
  };
  std::vector<Item> items;
  int order = 0;
  for (std::size_t s = 0; s < cycle.segments.size(); ++s)
    for (std::size_t i = 0; i < cycle.segments[s].size(); ++i)
      items.push_back({{static_cast<int>(s), static_cast<int>(i)},
                       cycle.segments[s][i].start,
                       cycle.segments[s][i].end,
                       order++});
  const int n = static_cast<int>(items.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool adjacent =
          (items[static_cast<std::size_t>(j)].order - items[static_cast<std::size_t>(i)].order == 1) ||
          (cycle.closed && items[static_cast<std::size_t>(i)].order == 0 &&
           items[static_cast<std::size_t>(j)].order == n - 1);
      if (adjacent) continue;
      if (detail::open_segments_intersect(items[static_cast<std::size_t>(i)].a,
                                          items[static_cast<std::size_t>(i)].b,
                                          items[static_cast<std::size_t>(j)].a,
                                          items[static_cast<std::size_t>(j)].b, eps))
        rep.crossings.push_back(
            {items[static_cast<std::size_t>(i)].ref, items[static_cast<std::size_t>(j)].ref});
    }
  // node coincidences ("double Zome node")
  std::vector<Vec2> nodes = cycle.nodes;
  if (nodes.empty())
    for (const auto& seg : cycle.segments)
      if (!seg.empty()) nodes.push_back(seg.front().start);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (norm(nodes[i] - nodes[j]) <= eps)
        rep.coincident_nodes.push_back({static_cast<int>(i), static_cast<int>(j)});
  return rep;
}

}  // namespace zome
