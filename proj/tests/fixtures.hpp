#pragma once

// Synthetic distance-field fixtures shared by the pipeline and acceptance
// tests, sampled from analytic SDFs at cell centers.

#include <cmath>
#include <functional>

#include "zome/field.hpp"

namespace zome::testing {

inline DistanceField field_from_sdf(double xmin, double ymin, double xmax, double ymax,
                                    double cell, const std::function<double(Vec2)>& sdf) {
  DistanceField f;
  f.width = static_cast<int>(std::ceil((xmax - xmin) / cell));
  f.height = static_cast<int>(std::ceil((ymax - ymin) / cell));
  f.cell_size = cell;
  f.origin = {xmin + cell / 2.0, ymin + cell / 2.0};
  f.values.resize(static_cast<std::size_t>(f.width) * f.height);
  for (int j = 0; j < f.height; ++j)
    for (int i = 0; i < f.width; ++i) f.at(i, j) = sdf(f.cell_center(i, j));
  return f;
}

inline DistanceField circle_field(double r, double cell, double margin = 3.0) {
  return field_from_sdf(-r - margin, -r - margin, r + margin, r + margin, cell,
                        [r](Vec2 p) { return std::hypot(p.x, p.y) - r; });
}

// axis-aligned square with corners (0,0) .. (side, side)
inline DistanceField square_field(double side, double cell, double margin = 1.5) {
  const double h = side / 2.0;
  return field_from_sdf(-margin, -margin, side + margin, side + margin, cell, [h](Vec2 p) {
    return std::max(std::fabs(p.x - h), std::fabs(p.y - h)) - h;
  });
}

// smooth blob: union of three discs
inline DistanceField blob_field(double scale, double cell, double margin = 4.0) {
  return field_from_sdf(-2.0 * scale - margin, -1.8 * scale - margin, 2.2 * scale + margin,
                        2.0 * scale + margin, cell, [scale](Vec2 p) {
                          const double d1 = std::hypot(p.x + 0.7 * scale, p.y) - 1.1 * scale;
                          const double d2 = std::hypot(p.x - 0.8 * scale, p.y + 0.3 * scale) -
                                            0.9 * scale;
                          const double d3 = std::hypot(p.x - 0.1 * scale, p.y - 0.8 * scale) -
                                            0.8 * scale;
                          return std::min(d1, std::min(d2, d3));
                        });
}

}  // namespace zome::testing
