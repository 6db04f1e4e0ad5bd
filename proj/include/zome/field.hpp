#pragma once

// Distance-field ingestion, signed-distance queries with out-of-bounds
// penalty, and piecewise-linear contour extraction (2D marching squares).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "zome/golden.hpp"

namespace zome {

// Rectangular grid of averaged signed distances, negative inside the shape.
// Cell (i,j) is centered at origin + (i,j)*cell_size; row j=0 is the bottom
// row of the file format.
struct DistanceField {
  int width = 0;
  int height = 0;
  double cell_size = 1.0;
  Vec2 origin{0.0, 0.0};
  std::vector<double> values;  // row-major, bottom row first

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }

  Vec2 cell_center(int i, int j) const {
    return {origin.x + i * cell_size, origin.y + j * cell_size};
  }
};

// Index of the cell containing p along one axis; points exactly on a shared
// border belong to the lower-index cell.
inline int cell_index_1d(double coord, double origin, double cell_size) {
  const double r = (coord - origin) / cell_size;
  double idx = std::floor(r + 0.5);
  if (r + 0.5 == idx) idx -= 1.0;  // border tie: lower cell wins
  return static_cast<int>(idx);
}

inline constexpr double kOutOfBoundsPenalty = 100.0;

// Value of the distance-field cell containing p; beyond the grid, the value
// of the closest cell multiplied by the penalty factor.
inline double sample_distance(const DistanceField& f, const Vec2& p) {
  int i = cell_index_1d(p.x, f.origin.x, f.cell_size);
  int j = cell_index_1d(p.y, f.origin.y, f.cell_size);
  const bool outside = i < 0 || i >= f.width || j < 0 || j >= f.height;
  i = std::clamp(i, 0, f.width - 1);
  j = std::clamp(j, 0, f.height - 1);
  const double v = f.at(i, j);
  return outside ? v * kOutOfBoundsPenalty : v;
}

// --- DFIELD v1 file format -------------------------------------------------
//
//   line 1:  DFIELD v1
//   line 2:  width height cell_size origin_x origin_y
//   line 3:  text | binary
//   then width*height values, row-major with the bottom row first; text mode
//   is whitespace-separated decimals, binary mode is little-endian float64.

inline DistanceField load_field(std::istream& in) {
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "DFIELD" || version != "v1")
    throw Error("distance field: malformed header (expected 'DFIELD v1')");
  DistanceField f;
  if (!(in >> f.width >> f.height >> f.cell_size >> f.origin.x >> f.origin.y))
    throw Error("distance field: malformed dimension line");
  if (f.width <= 0 || f.height <= 0) throw Error("distance field: non-positive dimensions");
  if (!(f.cell_size > 0.0) || !std::isfinite(f.cell_size))
    throw Error("distance field: cell_size must be positive");
  if (!std::isfinite(f.origin.x) || !std::isfinite(f.origin.y))
    throw Error("distance field: non-finite origin");
  std::string mode;
  if (!(in >> mode) || (mode != "text" && mode != "binary"))
    throw Error("distance field: mode must be 'text' or 'binary'");
  const std::size_t n = static_cast<std::size_t>(f.width) * static_cast<std::size_t>(f.height);
  f.values.resize(n);
  if (mode == "text") {
    for (std::size_t k = 0; k < n; ++k)
      if (!(in >> f.values[k])) throw Error("distance field: truncated value list");
  } else {
    in.get();  // newline terminating the header
    static_assert(sizeof(double) == 8);
    in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(n * 8));
    if (static_cast<std::size_t>(in.gcount()) != n * 8)
      throw Error("distance field: truncated binary payload");
  }
  for (double v : f.values)
    if (!std::isfinite(v)) throw Error("distance field: non-finite value");
  return f;
}

inline void save_field(const DistanceField& f, std::ostream& out, bool binary = false) {
  out << "DFIELD v1\n"
      << f.width << " " << f.height << " " << f.cell_size << " " << f.origin.x << " "
      << f.origin.y << "\n"
      << (binary ? "binary" : "text") << "\n";
  if (binary) {
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * 8));
  } else {
    out.precision(17);
    for (int j = 0; j < f.height; ++j) {
      for (int i = 0; i < f.width; ++i) out << f.at(i, j) << (i + 1 == f.width ? '\n' : ' ');
    }
  }
}

// Geometry rescale: divides lengths by s, so larger s makes the strut catalog
// coarser relative to the shape. Distance values are lengths too.
inline DistanceField scale_field(DistanceField f, double s) {
  if (!(s > 0.0)) throw Error("scale must be positive");
  f.cell_size /= s;
  f.origin.x /= s;
  f.origin.y /= s;
  for (double& v : f.values) v /= s;
  return f;
}

struct ContourPolyline {
  std::vector<Vec2> points;
  bool closed = false;
};

inline double arclength(const ContourPolyline& c) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) a += norm(c.points[i + 1] - c.points[i]);
  if (c.closed && c.points.size() > 1) a += norm(c.points.front() - c.points.back());
  return a;
}

inline double signed_area(const ContourPolyline& c) {
  double s = 0.0;
  const std::size_t n = c.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = c.points[i];
    const Vec2& q = c.points[(i + 1) % n];
    s += cross(p, q);
  }
  return 0.5 * s;
}

struct ExtractReport {
  int components = 0;       // closed loops found
  int open_chains = 0;      // contour pieces leaving the grid (dropped)
  bool multiple = false;    // more than one closed component (longest kept)
};

namespace detail {

// Marching-squares case table. Dual-cell corners c0..c3 are the centers of
// cells (i,j),(i+1,j),(i+1,j+1),(i,j+1); edges 0..3 are bottom,right,top,left.
// Segments are directed so the negative (inside) region lies on the left,
// which makes extracted outer contours counter-clockwise.
struct MsSegment {
  int from_edge;
  int to_edge;
};

inline const std::vector<MsSegment>& ms_case(int mask, bool center_inside) {
  static const std::vector<MsSegment> table[16] = {
      /* 0*/ {},
      /* 1*/ {{0, 3}},
      /* 2*/ {{1, 0}},
      /* 3*/ {{1, 3}},
      /* 4*/ {{2, 1}},
      /* 5*/ {},  // saddle, resolved below
      /* 6*/ {{2, 0}},
      /* 7*/ {{2, 3}},
      /* 8*/ {{3, 2}},
      /* 9*/ {{0, 2}},
      /*10*/ {},  // saddle, resolved below
      /*11*/ {{1, 2}},
      /*12*/ {{3, 1}},
      /*13*/ {{0, 1}},
      /*14*/ {{3, 0}},
      /*15*/ {},
  };
  static const std::vector<MsSegment> saddle5_in = {{0, 1}, {2, 3}};
  static const std::vector<MsSegment> saddle5_out = {{0, 3}, {2, 1}};
  static const std::vector<MsSegment> saddle10_in = {{3, 0}, {1, 2}};
  static const std::vector<MsSegment> saddle10_out = {{1, 0}, {3, 2}};
  if (mask == 5) return center_inside ? saddle5_in : saddle5_out;
  if (mask == 10) return center_inside ? saddle10_in : saddle10_out;
  return table[mask];
}

}  // namespace detail

// Traces the zero level set of the field by marching squares over the grid of
// cell centers, interpolating linearly along dual edges. Saddle cells are
// disambiguated by the sign of the cell-center average. Returns the longest
// closed component, counter-clockwise for negative-inside fields.
inline ContourPolyline extract_contour(const DistanceField& f, ExtractReport* report = nullptr) {
  if (f.width < 2 || f.height < 2) throw Error("contour extraction: field too small");
  bool any_neg = false, any_nonneg = false;
  for (double v : f.values) (v < 0.0 ? any_neg : any_nonneg) = true;
  if (!any_neg || !any_nonneg) throw Error("contour extraction: no zero crossing");

  // Edge key: horizontal edge (i,j)-(i+1,j) is {0,i,j}; vertical (i,j)-(i,j+1)
  // is {1,i,j}.
  struct EdgeKey {
    int axis, i, j;
    bool operator<(const EdgeKey& o) const {
      return std::tie(axis, i, j) < std::tie(o.axis, o.i, o.j);
    }
  };
  struct Seg {
    EdgeKey from, to;
  };

  auto edge_point = [&f](const EdgeKey& e) -> Vec2 {
    const int i2 = e.axis == 0 ? e.i + 1 : e.i;
    const int j2 = e.axis == 0 ? e.j : e.j + 1;
    const double va = f.at(e.i, e.j);
    const double vb = f.at(i2, j2);
    double t = va / (va - vb);
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 a = f.cell_center(e.i, e.j);
    const Vec2 b = f.cell_center(i2, j2);
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  };

  std::vector<Seg> segs;
  std::map<EdgeKey, int> leaving;  // edge -> segment index whose 'from' is that edge
  for (int j = 0; j + 1 < f.height; ++j) {
    for (int i = 0; i + 1 < f.width; ++i) {
      const double v0 = f.at(i, j), v1 = f.at(i + 1, j), v2 = f.at(i + 1, j + 1),
                   v3 = f.at(i, j + 1);
      const int mask = (v0 < 0.0 ? 1 : 0) | (v1 < 0.0 ? 2 : 0) | (v2 < 0.0 ? 4 : 0) |
                       (v3 < 0.0 ? 8 : 0);
      if (mask == 0 || mask == 15) continue;
      const bool center_inside = (v0 + v1 + v2 + v3) < 0.0;
      const EdgeKey edges[4] = {{0, i, j}, {1, i + 1, j}, {0, i, j + 1}, {1, i, j}};
      for (const detail::MsSegment& s : detail::ms_case(mask, center_inside)) {
        segs.push_back({edges[s.from_edge], edges[s.to_edge]});
        leaving[edges[s.from_edge]] = static_cast<int>(segs.size()) - 1;
      }
    }
  }
  if (segs.empty()) throw Error("contour extraction: no zero crossing");

  ExtractReport local;
  std::vector<ContourPolyline> loops;
  std::vector<bool> used(segs.size(), false);
  for (std::size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    std::vector<Vec2> pts;
    std::size_t cur = start;
    bool closed = false;
    while (!used[cur]) {
      used[cur] = true;
      pts.push_back(edge_point(segs[cur].from));
      auto it = leaving.find(segs[cur].to);
      if (it == leaving.end()) break;  // contour leaves the grid
      cur = static_cast<std::size_t>(it->second);
      if (cur == start) {
        closed = true;
        break;
      }
    }
    if (!closed) {
      local.open_chains++;
      continue;
    }
    // drop consecutive duplicates (interpolation can land on a shared corner)
    std::vector<Vec2> clean;
    for (const Vec2& p : pts) {
      if (clean.empty() || norm(p - clean.back()) > 1e-12) clean.push_back(p);
    }
    while (clean.size() > 1 && norm(clean.front() - clean.back()) <= 1e-12) clean.pop_back();
    if (clean.size() < 3) continue;
    loops.push_back({std::move(clean), true});
  }
  local.components = static_cast<int>(loops.size());
  local.multiple = loops.size() > 1;
  if (report) *report = local;
  if (loops.empty()) throw Error("contour extraction: no closed contour inside the grid");
  auto longest = std::max_element(loops.begin(), loops.end(),
                                  [](const ContourPolyline& a, const ContourPolyline& b) {
                                    return arclength(a) < arclength(b);
                                  });
  return std::move(*longest);
}

}  // namespace zome
