#pragma once

// Sample-point selection along a closed contour polyline: uniform arclength,
// curvature-based schemes, and farthest-point gap filling.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "zome/field.hpp"
#include "zome/golden.hpp"

namespace zome {

enum class SamplingScheme {
  UniformArclength,
  CurvGlobal,
  CurvSegmentwise,
  CurvSeparation,
  CurvSepEuclideanFPI,
  CurvSepArclenFPI,
};

struct SamplePlan {
  std::vector<int> indices;  // polyline vertex indices, traversal order
  SamplingScheme scheme = SamplingScheme::UniformArclength;
  bool exhausted_early = false;  // separation masking ran out of points
};

// Discrete curvature at vertex i: the angle between the vectors to the t-th
// predecessor and t-th successor (indices wrap). pi means flat, pi/2 a right
// angle.
inline double curvature(const ContourPolyline& c, int i, int t) {
  const int n = static_cast<int>(c.points.size());
  if (!c.closed) throw Error("curvature: polyline must be closed");
  if (t < 1) throw Error("curvature: t must be >= 1");
  if (n <= 2 * t) throw Error("curvature: polyline too short for offset t");
  auto wrap = [n](int j) { return ((j % n) + n) % n; };
  const Vec2 u = c.points[wrap(i - t)] - c.points[i];
  const Vec2 w = c.points[wrap(i + t)] - c.points[i];
  const double nu = norm(u), nw = norm(w);
  if (nu <= 0.0 || nw <= 0.0) throw Error("curvature: duplicate points give zero-length vector");
  const double q = std::clamp(dot(u, w) / (nu * nw), -1.0, 1.0);
  return std::acos(q);
}

// Folds the flat-at-pi range back so steep turns get large values: in [0, pi/2].
inline double adjusted_curvature(double c_i) { return std::min(c_i, M_PI - c_i); }

namespace detail {

inline std::vector<double> adjusted_curvatures(const ContourPolyline& c, int t) {
  std::vector<double> cb(c.points.size());
  for (int i = 0; i < static_cast<int>(c.points.size()); ++i)
    cb[i] = adjusted_curvature(curvature(c, i, t));
  return cb;
}

// prefix[i] = arclength from vertex 0 to vertex i; prefix[n] = total.
inline std::vector<double> arclength_prefix(const ContourPolyline& c) {
  const std::size_t n = c.points.size();
  std::vector<double> s(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = c.points[i];
    const Vec2& q = c.points[(i + 1) % n];
    s[i + 1] = s[i] + norm(q - p);
  }
  return s;
}

inline double cyclic_arcdist(const std::vector<double>& prefix, int i, int j) {
  const double total = prefix.back();
  const double d = std::fabs(prefix[i] - prefix[j]);
  return std::min(d, total - d);
}

inline void finish(SamplePlan& plan) {
  std::sort(plan.indices.begin(), plan.indices.end());
  plan.indices.erase(std::unique(plan.indices.begin(), plan.indices.end()), plan.indices.end());
}

// Greedy largest-curvature picking with an absolute arclength separation.
inline SamplePlan separation_by_arclength(const ContourPolyline& c, int k, int t,
                                          double separation) {
  const int n = static_cast<int>(c.points.size());
  const std::vector<double> cb = adjusted_curvatures(c, t);
  const std::vector<double> prefix = arclength_prefix(c);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&cb](int a, int b) { return cb[a] > cb[b]; });  // ties keep lower index
  std::vector<bool> available(n, true);
  SamplePlan plan;
  plan.scheme = SamplingScheme::CurvSeparation;
  for (int picks = 0; picks < k;) {
    int best = -1;
    for (int idx : order) {
      if (available[idx]) {
        best = idx;
        break;
      }
    }
    if (best < 0) {
      plan.exhausted_early = true;
      break;
    }
    plan.indices.push_back(best);
    ++picks;
    for (int j = 0; j < n; ++j)
      if (cyclic_arcdist(prefix, best, j) <= separation) available[j] = false;
  }
  finish(plan);
  return plan;
}

}  // namespace detail

// Scheme 1: walk the polyline from vertex 0 and select a vertex whenever the
// traversed arclength since the previous selection reaches a/k.
inline SamplePlan sample_uniform_arclength(const ContourPolyline& c, int k) {
  const int n = static_cast<int>(c.points.size());
  if (k < 3) throw Error("sampling: need k >= 3");
  if (k > n) throw Error("sampling: k exceeds vertex count");
  const std::vector<double> prefix = detail::arclength_prefix(c);
  const double target = prefix.back() / k;
  SamplePlan plan;
  plan.scheme = SamplingScheme::UniformArclength;
  plan.indices.push_back(0);
  double last = 0.0;
  for (int i = 1; i < n && static_cast<int>(plan.indices.size()) < k; ++i) {
    if (prefix[i] - last >= target - 1e-12) {
      plan.indices.push_back(i);
      last = prefix[i];
    }
  }
  return plan;
}

// Scheme 2(a): the k vertices with largest adjusted curvature.
inline SamplePlan sample_curvature_global(const ContourPolyline& c, int k, int t) {
  const int n = static_cast<int>(c.points.size());
  if (k > n) throw Error("sampling: k exceeds vertex count");
  const std::vector<double> cb = detail::adjusted_curvatures(c, t);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&cb](int a, int b) { return cb[a] > cb[b]; });
  SamplePlan plan;
  plan.scheme = SamplingScheme::CurvGlobal;
  plan.indices.assign(order.begin(), order.begin() + k);
  detail::finish(plan);
  return plan;
}

// Scheme 2(b): arclength segments first, then the per-segment curvature argmax.
inline SamplePlan sample_curvature_segmentwise(const ContourPolyline& c, int k, int t) {
  const int n = static_cast<int>(c.points.size());
  if (k > n) throw Error("sampling: k exceeds vertex count");
  if (k < 1) throw Error("sampling: need k >= 1");
  const std::vector<double> cb = detail::adjusted_curvatures(c, t);
  const std::vector<double> prefix = detail::arclength_prefix(c);
  const double seg = prefix.back() / k;
  SamplePlan plan;
  plan.scheme = SamplingScheme::CurvSegmentwise;
  for (int s = 0; s < k; ++s) {
    const double lo = s * seg;
    const double hi = (s + 1) * seg;
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (prefix[i] >= lo - 1e-12 && prefix[i] < hi - 1e-12) {
        if (best < 0 || cb[i] > cb[best]) best = i;
      }
    }
    if (best >= 0) plan.indices.push_back(best);
  }
  detail::finish(plan);
  return plan;
}

// Scheme 2(c): repeatedly pick the available vertex of largest adjusted
// curvature and mask all vertices within arclength lambda*a/k of it. May
// return fewer than k points (flagged) when everything gets masked.
inline SamplePlan sample_curvature_separation(const ContourPolyline& c, int k, int t,
                                              double lambda) {
  if (!(lambda > 0.0)) throw Error("sampling: lambda must be positive");
  const std::vector<double> prefix = detail::arclength_prefix(c);
  SamplePlan plan = detail::separation_by_arclength(c, k, t, lambda * prefix.back() / k);
  plan.scheme = SamplingScheme::CurvSeparation;
  return plan;
}

// Schemes 3(a)/3(b): curvature+separation seed, then farthest-point insertion
// under the chosen metric until k_max points or until the best insertion's
// min-distance falls below min_insert_dist. The separation is an absolute
// arclength here.
enum class GapFillMode { Euclidean, Arclength };

inline SamplePlan sample_gap_filling(const ContourPolyline& c, int k_c, int k_max, int t,
                                     double separation, GapFillMode mode,
                                     double min_insert_dist) {
  const int n = static_cast<int>(c.points.size());
  if (k_c < 0 || k_max < k_c) throw Error("sampling: need 0 <= k_c <= k_max");
  SamplePlan plan =
      k_c > 0 ? detail::separation_by_arclength(c, k_c, t, separation) : SamplePlan{};
  plan.scheme =
      mode == GapFillMode::Euclidean ? SamplingScheme::CurvSepEuclideanFPI
                                     : SamplingScheme::CurvSepArclenFPI;
  std::vector<int> chosen = plan.indices;
  if (chosen.empty() && k_max > 0) chosen.push_back(0);  // seed for pure insertion runs
  const std::vector<double> prefix = detail::arclength_prefix(c);
  auto dist = [&](int i, int j) {
    return mode == GapFillMode::Euclidean ? norm(c.points[i] - c.points[j])
                                          : detail::cyclic_arcdist(prefix, i, j);
  };
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i)
    for (int s : chosen) mind[i] = std::min(mind[i], dist(i, s));
  while (static_cast<int>(chosen.size()) < k_max) {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (best < 0 || mind[i] > mind[best]) best = i;
    if (best < 0 || mind[best] < min_insert_dist) break;
    chosen.push_back(best);
    for (int i = 0; i < n; ++i) mind[i] = std::min(mind[i], dist(i, best));
  }
  plan.indices = std::move(chosen);
  detail::finish(plan);
  return plan;
}

inline std::vector<Vec2> plan_points(const ContourPolyline& c, const SamplePlan& plan) {
  std::vector<Vec2> pts;
  pts.reserve(plan.indices.size());
  for (int i : plan.indices) pts.push_back(c.points[static_cast<std::size_t>(i)]);
  return pts;
}

}  // namespace zome
