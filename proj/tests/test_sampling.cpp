#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "zome/sampling.hpp"

using namespace zome;

namespace {

ContourPolyline regular_ngon(int n, double r = 1.0) {
  ContourPolyline c;
  c.closed = true;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    c.points.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return c;
}

// axis-aligned unit square with midpoints: 8 vertices
ContourPolyline square_with_midpoints() {
  ContourPolyline c;
  c.closed = true;
  c.points = {{0, 0}, {0.5, 0}, {1, 0}, {1, 0.5}, {1, 1}, {0.5, 1}, {0, 1}, {0, 0.5}};
  return c;
}

ContourPolyline random_closed_polyline(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> jitter(0.6, 1.4);
  ContourPolyline c;
  c.closed = true;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    const double r = jitter(rng);
    c.points.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return c;
}

std::vector<double> all_adjusted(const ContourPolyline& c, int t) {
  std::vector<double> out(c.points.size());
  for (int i = 0; i < static_cast<int>(c.points.size()); ++i)
    out[static_cast<std::size_t>(i)] = adjusted_curvature(curvature(c, i, t));
  return out;
}

double cyclic_gap(const ContourPolyline& c, int i, int j) {
  double total = 0.0;
  std::vector<double> prefix(c.points.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    prefix[k + 1] =
        prefix[k] + norm(c.points[(k + 1) % c.points.size()] - c.points[k]);
  }
  total = prefix.back();
  const double d = std::fabs(prefix[static_cast<std::size_t>(i)] - prefix[static_cast<std::size_t>(j)]);
  return std::min(d, total - d);
}

}  // namespace

TEST_CASE("curvature: collinear, right angle, hexagon") {
  ContourPolyline line;
  line.closed = true;
  line.points = {{0, 0}, {1, 0}, {2, 0}};
  CHECK(curvature(line, 1, 1) == doctest::Approx(M_PI));

  ContourPolyline corner;
  corner.closed = true;
  corner.points = {{0, 1}, {0, 0}, {1, 0}};
  CHECK(curvature(corner, 1, 1) == doctest::Approx(M_PI / 2.0));

  const ContourPolyline hex = regular_ngon(6);
  CHECK(curvature(hex, 2, 1) == doctest::Approx(2.0 * M_PI / 3.0));
}

TEST_CASE("curvature errors") {
  ContourPolyline degenerate;
  degenerate.closed = true;
  degenerate.points = {{0, 0}, {0, 0}, {1, 0}, {1, 1}};
  CHECK_THROWS_AS(curvature(degenerate, 0, 1), Error);
  ContourPolyline open;
  open.points = {{0, 0}, {1, 0}, {1, 1}};
  open.closed = false;
  CHECK_THROWS_AS(curvature(open, 1, 1), Error);
  const ContourPolyline tri = regular_ngon(3);
  CHECK_THROWS_AS(curvature(tri, 0, 2), Error);  // n <= 2t
}

TEST_CASE("adjusted curvature") {
  CHECK(adjusted_curvature(M_PI) == doctest::Approx(0.0));
  CHECK(adjusted_curvature(M_PI / 2.0) == doctest::Approx(M_PI / 2.0));
  CHECK(adjusted_curvature(0.3) == doctest::Approx(0.3));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.0, M_PI);
  for (int i = 0; i < 200; ++i) {
    const double v = adjusted_curvature(d(rng));
    CHECK(v >= 0.0);
    CHECK(v <= M_PI / 2.0 + 1e-15);
  }
}

TEST_CASE("uniform arclength: exact divisions") {
  ContourPolyline sq;
  sq.closed = true;
  sq.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const SamplePlan p4 = sample_uniform_arclength(sq, 4);
  CHECK(p4.indices == std::vector<int>{0, 1, 2, 3});

  const ContourPolyline circ = regular_ngon(360);
  const SamplePlan p6 = sample_uniform_arclength(circ, 6);
  CHECK(p6.indices == std::vector<int>{0, 60, 120, 180, 240, 300});
}

TEST_CASE("uniform arclength: k=3 gap property") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const ContourPolyline c = random_closed_polyline(rng, 40 + static_cast<int>(rng() % 60));
    const SamplePlan p = sample_uniform_arclength(c, 3);
    REQUIRE(p.indices.size() == 3);
    CHECK(p.indices[0] == 0);
    const double a = arclength(c);
    double max_spacing = 0.0;
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i)
      max_spacing = std::max(max_spacing, norm(c.points[i + 1] - c.points[i]));
    // consecutive picks are at least a/3 apart along the walk
    for (int i = 0; i + 1 < 3; ++i) {
      double gap = 0.0;
      for (int j = p.indices[static_cast<std::size_t>(i)]; j < p.indices[static_cast<std::size_t>(i) + 1]; ++j)
        gap += norm(c.points[static_cast<std::size_t>(j + 1) % c.points.size()] -
                    c.points[static_cast<std::size_t>(j)]);
      CHECK(gap >= a / 3.0 - max_spacing - 1e-9);
    }
  }
}

TEST_CASE("curvature global: corners beat midpoints, k=n returns all") {
  const ContourPolyline sq = square_with_midpoints();
  const SamplePlan p = sample_curvature_global(sq, 4, 1);
  CHECK(p.indices == std::vector<int>{0, 2, 4, 6});
  const SamplePlan all = sample_curvature_global(sq, 8, 1);
  CHECK(all.indices.size() == 8);
  CHECK_THROWS_AS(sample_curvature_global(sq, 9, 1), Error);
}

TEST_CASE("curvature global matches full-sort oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ContourPolyline c = random_closed_polyline(rng, 50);
    const int k = 5 + static_cast<int>(rng() % 10);
    const SamplePlan p = sample_curvature_global(c, k, 2);
    // oracle: stable sort by adjusted curvature, take top k, sort indices
    const std::vector<double> cb = all_adjusted(c, 2);
    std::vector<int> order(c.points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&cb](int a, int b) { return cb[static_cast<std::size_t>(a)] > cb[static_cast<std::size_t>(b)]; });
    std::vector<int> expect(order.begin(), order.begin() + k);
    std::sort(expect.begin(), expect.end());
    CHECK(p.indices == expect);
  }
}

TEST_CASE("curvature segmentwise: square corners; k=1 global argmax; oracle") {
  const ContourPolyline sq = square_with_midpoints();
  const SamplePlan p = sample_curvature_segmentwise(sq, 4, 1);
  CHECK(p.indices == std::vector<int>{0, 2, 4, 6});

  std::mt19937_64 rng(23);
  const ContourPolyline c = random_closed_polyline(rng, 60);
  const SamplePlan p1 = sample_curvature_segmentwise(c, 1, 1);
  const std::vector<double> cb = all_adjusted(c, 1);
  const int argmax =
      static_cast<int>(std::max_element(cb.begin(), cb.end()) - cb.begin());
  REQUIRE(p1.indices.size() == 1);
  CHECK(p1.indices[0] == argmax);
}

TEST_CASE("separation: tiny lambda equals global; huge lambda exhausts") {
  std::mt19937_64 rng(31);
  const ContourPolyline c = random_closed_polyline(rng, 50);
  const SamplePlan glob = sample_curvature_global(c, 7, 1);
  const SamplePlan sep = sample_curvature_separation(c, 7, 1, 1e-9);
  CHECK(sep.indices == glob.indices);

  const SamplePlan ex = sample_curvature_separation(c, 5, 1, 1000.0);
  CHECK(ex.indices.size() < 5);
  CHECK(ex.exhausted_early);
}

TEST_CASE("separation: pairwise arclength distance property") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const ContourPolyline c = random_closed_polyline(rng, 64);
    const int k = 6;
    const double lambda = 0.4;
    const SamplePlan p = sample_curvature_separation(c, k, 1, lambda);
    const double min_gap = lambda * arclength(c) / k;
    for (std::size_t i = 0; i < p.indices.size(); ++i)
      for (std::size_t j = i + 1; j < p.indices.size(); ++j)
        CHECK(cyclic_gap(c, p.indices[i], p.indices[j]) > min_gap);
  }
}

TEST_CASE("separation matches greedy masking oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const ContourPolyline c = random_closed_polyline(rng, 40);
    const int k = 5, t = 1;
    const double lambda = 0.3;
    const SamplePlan p = sample_curvature_separation(c, k, t, lambda);
    // oracle: literal greedy masking
    const std::vector<double> cb = all_adjusted(c, t);
    const double sep = lambda * arclength(c) / k;
    std::vector<bool> avail(c.points.size(), true);
    std::vector<int> expect;
    for (int pick = 0; pick < k; ++pick) {
      int best = -1;
      for (int i = 0; i < static_cast<int>(c.points.size()); ++i)
        if (avail[static_cast<std::size_t>(i)] &&
            (best < 0 || cb[static_cast<std::size_t>(i)] > cb[static_cast<std::size_t>(best)]))
          best = i;
      if (best < 0) break;
      expect.push_back(best);
      for (int i = 0; i < static_cast<int>(c.points.size()); ++i)
        if (cyclic_gap(c, best, i) <= sep) avail[static_cast<std::size_t>(i)] = false;
    }
    std::sort(expect.begin(), expect.end());
    CHECK(p.indices == expect);
  }
}

TEST_CASE("gap filling: pure arclength insertion spreads nearly uniformly") {
  const ContourPolyline circ = regular_ngon(200);
  const double a = arclength(circ);
  const SamplePlan p = sample_gap_filling(circ, 0, 4, 1, 0.0, GapFillMode::Arclength, 1e-9);
  REQUIRE(p.indices.size() == 4);
  // max-min arclength gap between neighbors <= a/4 + one vertex spacing
  const double spacing = a / 200.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double gap = cyclic_gap(circ, p.indices[i], p.indices[(i + 1) % 4]);
    CHECK(gap <= a / 4.0 + spacing + 1e-9);
  }
}

TEST_CASE("gap filling: huge stop threshold keeps only curvature picks") {
  std::mt19937_64 rng(47);
  const ContourPolyline c = random_closed_polyline(rng, 60);
  const double a = arclength(c);
  const SamplePlan seed = sample_curvature_separation(c, 3, 1, 0.3);
  SamplePlan p = sample_gap_filling(c, 3, 10, 1, 0.3 * a / 3.0, GapFillMode::Arclength, 2.0 * a);
  CHECK(p.indices == seed.indices);
}

TEST_CASE("gap filling: notch corners survive in the sample") {
  // square with a notch: the notch corners have the largest curvature
  ContourPolyline c;
  c.closed = true;
  const int per_side = 20;
  auto add_edge = [&c](Vec2 a, Vec2 b, int n) {
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      c.points.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  };
  add_edge({0, 0}, {4, 0}, per_side);
  add_edge({4, 0}, {4, 4}, per_side);
  add_edge({4, 4}, {2.2, 4}, 8);
  add_edge({2.2, 4}, {2.2, 2.5}, 8);  // notch down
  add_edge({2.2, 2.5}, {1.8, 2.5}, 4);
  add_edge({1.8, 2.5}, {1.8, 4}, 8);  // notch up
  add_edge({1.8, 4}, {0, 4}, 8);
  add_edge({0, 4}, {0, 0}, per_side);
  const SamplePlan p = sample_gap_filling(c, 3, 12, 1, 1.0, GapFillMode::Arclength, 0.2);
  // at least one selected vertex inside the notch
  bool notch = false;
  for (int i : p.indices) {
    const Vec2& v = c.points[static_cast<std::size_t>(i)];
    if (v.x >= 1.7 && v.x <= 2.3 && v.y >= 2.4 && v.y <= 4.01) notch = true;
  }
  CHECK(notch);
}

TEST_CASE("gap filling: euclidean mode respects min insert distance") {
  const ContourPolyline circ = regular_ngon(120);
  const SamplePlan p =
      sample_gap_filling(circ, 0, 30, 1, 0.0, GapFillMode::Euclidean, 0.4);
  for (std::size_t i = 0; i < p.indices.size(); ++i)
    for (std::size_t j = i + 1; j < p.indices.size(); ++j)
      CHECK(norm(circ.points[static_cast<std::size_t>(p.indices[i])] -
                 circ.points[static_cast<std::size_t>(p.indices[j])]) >= 0.4 - 1e-9);
}

TEST_CASE("all schemes return sorted in-bounds indices") {
  std::mt19937_64 rng(53);
  const ContourPolyline c = random_closed_polyline(rng, 80);
  const std::vector<SamplePlan> plans = {
      sample_uniform_arclength(c, 7),
      sample_curvature_global(c, 7, 2),
      sample_curvature_segmentwise(c, 7, 2),
      sample_curvature_separation(c, 7, 2, 0.5),
      sample_gap_filling(c, 3, 9, 2, 0.1, GapFillMode::Arclength, 0.05),
      sample_gap_filling(c, 3, 9, 2, 0.1, GapFillMode::Euclidean, 0.05),
  };
  for (const SamplePlan& p : plans) {
    CHECK(!p.indices.empty());
    CHECK(std::is_sorted(p.indices.begin(), p.indices.end()));
    CHECK(std::adjacent_find(p.indices.begin(), p.indices.end()) == p.indices.end());
    for (int i : p.indices) {
      CHECK(i >= 0);
      CHECK(i < static_cast<int>(c.points.size()));
    }
  }
}

TEST_CASE("segmentwise sampling matches the brute-force per-segment argmax") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 15; ++trial) {
    const ContourPolyline c = random_closed_polyline(rng, 48 + static_cast<int>(rng() % 32));
    const int k = 3 + static_cast<int>(rng() % 6);
    const int t = 1 + static_cast<int>(rng() % 3);
    const SamplePlan p = sample_curvature_segmentwise(c, k, t);
    // oracle: prefix sums, then scan each segment for its argmax
    const std::vector<double> cb = all_adjusted(c, t);
    std::vector<double> prefix(c.points.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.points.size(); ++i)
      prefix[i + 1] = prefix[i] + norm(c.points[(i + 1) % c.points.size()] - c.points[i]);
    const double seg = prefix.back() / k;
    std::vector<int> expect;
    for (int s = 0; s < k; ++s) {
      int best = -1;
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (prefix[i] >= s * seg - 1e-12 && prefix[i] < (s + 1) * seg - 1e-12) {
          if (best < 0 || cb[i] > cb[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
        }
      }
      if (best >= 0) expect.push_back(best);
    }
    std::sort(expect.begin(), expect.end());
    CHECK(p.indices == expect);
    CHECK(static_cast<int>(p.indices.size()) == k);  // dense polylines fill every segment
  }
}
