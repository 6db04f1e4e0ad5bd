#pragma once

// Exact arithmetic over Z[phi] (numbers a + b*phi with integer a, b) and the
// catalog of Zome strut types with their lifted integer column matrices.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zome {

inline constexpr double kPhi = 1.6180339887498949;  // (1 + sqrt(5)) / 2

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OverflowError : Error {
  using Error::Error;
};

inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw OverflowError("int64 overflow in add");
  return r;
}

inline std::int64_t checked_sub(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_sub_overflow(x, y, &r)) throw OverflowError("int64 overflow in sub");
  return r;
}

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("int64 overflow in mul");
  return r;
}

// Element of Z[phi]; value = a + b*phi. Closed under multiplication since
// phi^2 = 1 + phi.
struct GoldenNum {
  std::int64_t a = 0;  // rational unit coefficient
  std::int64_t b = 0;  // phi unit coefficient

  constexpr GoldenNum() = default;
  constexpr GoldenNum(std::int64_t a_, std::int64_t b_) : a(a_), b(b_) {}

  double to_double() const { return static_cast<double>(a) + static_cast<double>(b) * kPhi; }

  friend bool operator==(const GoldenNum&, const GoldenNum&) = default;
};

inline GoldenNum gold_add(const GoldenNum& x, const GoldenNum& y) {
  return {checked_add(x.a, y.a), checked_add(x.b, y.b)};
}

inline GoldenNum gold_sub(const GoldenNum& x, const GoldenNum& y) {
  return {checked_sub(x.a, y.a), checked_sub(x.b, y.b)};
}

inline GoldenNum gold_mul(const GoldenNum& x, const GoldenNum& y) {
  // (a1 + b1 phi)(a2 + b2 phi) = a1 a2 + b1 b2 + (a1 b2 + a2 b1 + b1 b2) phi
  const std::int64_t a = checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.b));
  std::int64_t b = checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.a));
  b = checked_add(b, checked_mul(x.b, y.b));
  return {a, b};
}

inline GoldenNum operator+(const GoldenNum& x, const GoldenNum& y) { return gold_add(x, y); }
inline GoldenNum operator-(const GoldenNum& x, const GoldenNum& y) { return gold_sub(x, y); }
inline GoldenNum operator*(const GoldenNum& x, const GoldenNum& y) { return gold_mul(x, y); }
inline GoldenNum operator-(const GoldenNum& x) { return {checked_sub(0, x.a), checked_sub(0, x.b)}; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(const Vec2& p, const Vec2& q) { return {p.x + q.x, p.y + q.y}; }
  friend Vec2 operator-(const Vec2& p, const Vec2& q) { return {p.x - q.x, p.y - q.y}; }
  friend Vec2 operator*(double s, const Vec2& p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& p, const Vec2& q) { return p.x * q.x + p.y * q.y; }
inline double cross(const Vec2& p, const Vec2& q) { return p.x * q.y - p.y * q.x; }
inline double norm(const Vec2& p) { return std::hypot(p.x, p.y); }

// Lifted integer representation (alpha1, beta1, alpha2, beta2) of the plane
// point (alpha1 + beta1*phi, alpha2 + beta2*phi).
struct ZomePoint {
  std::array<std::int64_t, 4> v{0, 0, 0, 0};

  constexpr ZomePoint() = default;
  constexpr ZomePoint(std::int64_t a1, std::int64_t b1, std::int64_t a2, std::int64_t b2)
      : v{a1, b1, a2, b2} {}

  GoldenNum x_golden() const { return {v[0], v[1]}; }
  GoldenNum y_golden() const { return {v[2], v[3]}; }

  friend bool operator==(const ZomePoint&, const ZomePoint&) = default;

  friend ZomePoint operator+(const ZomePoint& p, const ZomePoint& q) {
    return {checked_add(p.v[0], q.v[0]), checked_add(p.v[1], q.v[1]),
            checked_add(p.v[2], q.v[2]), checked_add(p.v[3], q.v[3])};
  }
  friend ZomePoint operator-(const ZomePoint& p, const ZomePoint& q) {
    return {checked_sub(p.v[0], q.v[0]), checked_sub(p.v[1], q.v[1]),
            checked_sub(p.v[2], q.v[2]), checked_sub(p.v[3], q.v[3])};
  }
};

inline Vec2 project_to_plane(const ZomePoint& p) {
  return {p.x_golden().to_double(), p.y_golden().to_double()};
}

enum class StrutColor { Blue, Red, Yellow, Custom };
enum class LengthClass { Short, Medium, Long, Custom };

inline const char* to_string(StrutColor c) {
  switch (c) {
    case StrutColor::Blue: return "blue";
    case StrutColor::Red: return "red";
    case StrutColor::Yellow: return "yellow";
    default: return "custom";
  }
}

inline const char* to_string(LengthClass l) {
  switch (l) {
    case LengthClass::Short: return "short";
    case LengthClass::Medium: return "medium";
    case LengthClass::Long: return "long";
    default: return "custom";
  }
}

// One column of a lifted strut matrix.
using LiftedColumn = std::array<std::int64_t, 4>;

inline Vec2 column_plane(const LiftedColumn& c) {
  return project_to_plane(ZomePoint{c[0], c[1], c[2], c[3]});
}

// A strut (edge) type: its admissible base orientations as lifted integer
// columns. Zome struts carry two columns (the negative directions are modeled
// by the solver's sign split, not stored); custom assembly systems may
// restrict a type to a single orientation.
struct StrutType {
  std::string name;
  StrutColor color = StrutColor::Custom;
  LengthClass length_class = LengthClass::Custom;
  std::vector<LiftedColumn> columns;
  std::optional<std::int64_t> budget;  // absent = infinite

  GoldenNum plane_entry(int coord, int col) const {
    const LiftedColumn& c = columns.at(static_cast<std::size_t>(col));
    return coord == 0 ? GoldenNum{c[0], c[1]} : GoldenNum{c[2], c[3]};
  }

  Vec2 plane_column(int col) const { return column_plane(columns.at(static_cast<std::size_t>(col))); }
};

struct StrutCatalog {
  std::vector<StrutType> struts;

  const StrutType& find(StrutColor c, LengthClass l) const {
    for (const StrutType& s : struts)
      if (s.color == c && s.length_class == l) return s;
    throw Error("strut type not in catalog");
  }

  int total_columns() const {
    int n = 0;
    for (const StrutType& s : struts) n += static_cast<int>(s.columns.size());
    return n;
  }
};

// The standard planar Zome system: 9 strut types, scaling b_short = 2, two
// base orientations each. Lifted entries all lie in {-2,...,2}. The red and
// yellow columns fix one of the two possible mirror conventions; the other
// is its reflection across the x axis.
inline StrutCatalog catalog_standard() {
  StrutCatalog cat;
  auto add = [&cat](StrutColor c, LengthClass l, LiftedColumn c0, LiftedColumn c1) {
    StrutType s;
    s.name = std::string(to_string(c)) + "_" + to_string(l);
    s.color = c;
    s.length_class = l;
    s.columns = {c0, c1};
    cat.struts.push_back(std::move(s));
  };
  add(StrutColor::Blue, LengthClass::Short, {2, 0, 0, 0}, {0, 0, 2, 0});
  add(StrutColor::Blue, LengthClass::Medium, {0, 2, 0, 0}, {0, 0, 0, 2});
  add(StrutColor::Blue, LengthClass::Long, {2, 2, 0, 0}, {0, 0, 2, 2});
  add(StrutColor::Red, LengthClass::Short, {0, 1, -1, 0}, {0, 1, 1, 0});
  add(StrutColor::Red, LengthClass::Medium, {1, 1, 0, -1}, {1, 1, 0, 1});
  add(StrutColor::Red, LengthClass::Long, {1, 2, -1, -1}, {1, 2, 1, 1});
  add(StrutColor::Yellow, LengthClass::Short, {-1, 1, 0, -1}, {-1, 1, 0, 1});
  add(StrutColor::Yellow, LengthClass::Medium, {1, 0, -1, -1}, {1, 0, 1, 1});
  add(StrutColor::Yellow, LengthClass::Long, {0, 1, -1, -2}, {0, 1, 1, 2});
  return cat;
}

// Length of the long blue strut (2 + 2*phi) under the b_short = 2 scaling;
// the sampling defaults are expressed in multiples of it.
inline double long_blue_length() { return 2.0 + 2.0 * kPhi; }

inline StrutCatalog with_budgets(StrutCatalog cat,
                                 const std::vector<std::optional<std::int64_t>>& budgets) {
  if (budgets.size() != cat.struts.size()) throw Error("budget list size mismatch");
  for (std::size_t i = 0; i < budgets.size(); ++i) cat.struts[i].budget = budgets[i];
  return cat;
}

}  // namespace zome
