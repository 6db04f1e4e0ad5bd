#pragma once

// JSON instance files for the point-connectivity and contour-approximation
// problems, including the custom-catalog extension used by the reduction
// generators. Parsing is strict: unknown keys are rejected.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "zome/golden.hpp"
#include "zome/hardness.hpp"
#include "zome/model.hpp"

namespace zome {

using nlohmann::json;

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw Error("instance: unknown field '" + it.key() + "' in " + where);
}

inline StrutColor color_from_string(const std::string& s) {
  if (s == "blue") return StrutColor::Blue;
  if (s == "red") return StrutColor::Red;
  if (s == "yellow") return StrutColor::Yellow;
  if (s == "custom") return StrutColor::Custom;
  throw Error("instance: bad color '" + s + "'");
}

inline LengthClass length_from_string(const std::string& s) {
  if (s == "short") return LengthClass::Short;
  if (s == "medium") return LengthClass::Medium;
  if (s == "long") return LengthClass::Long;
  if (s == "custom") return LengthClass::Custom;
  throw Error("instance: bad length class '" + s + "'");
}

}  // namespace detail

inline json catalog_to_json(const StrutCatalog& cat) {
  json arr = json::array();
  for (const StrutType& s : cat.struts) {
    json t;
    t["name"] = s.name;
    t["color"] = to_string(s.color);
    t["length_class"] = to_string(s.length_class);
    t["columns"] = json::array();
    for (const LiftedColumn& c : s.columns) t["columns"].push_back({c[0], c[1], c[2], c[3]});
    if (s.budget) t["budget"] = *s.budget;
    arr.push_back(std::move(t));
  }
  return arr;
}

inline StrutCatalog catalog_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "standard") return catalog_standard();
  if (!j.is_array()) throw Error("instance: catalog must be 'standard' or an array");
  StrutCatalog cat;
  for (const json& t : j) {
    detail::reject_unknown(t, {"name", "color", "length_class", "columns", "budget"}, "catalog entry");
    StrutType s;
    s.name = t.at("name").get<std::string>();
    s.color = t.contains("color") ? detail::color_from_string(t.at("color").get<std::string>())
                                  : StrutColor::Custom;
    s.length_class = t.contains("length_class")
                         ? detail::length_from_string(t.at("length_class").get<std::string>())
                         : LengthClass::Custom;
    for (const json& c : t.at("columns")) {
      if (!c.is_array() || c.size() != 4) throw Error("instance: lifted column must have 4 entries");
      s.columns.push_back({c[0].get<std::int64_t>(), c[1].get<std::int64_t>(),
                           c[2].get<std::int64_t>(), c[3].get<std::int64_t>()});
    }
    if (s.columns.empty()) throw Error("instance: strut type without columns");
    if (t.contains("budget")) {
      const std::int64_t b = t.at("budget").get<std::int64_t>();
      if (b < 0) throw Error("instance: negative budget");
      s.budget = b;
    }
    cat.struts.push_back(std::move(s));
  }
  if (cat.struts.empty()) throw Error("instance: empty catalog");
  return cat;
}

// Budgets for the standard catalog keyed "<color>_<length>"; absent keys mean
// infinite availability.
inline StrutCatalog apply_budget_overrides(StrutCatalog cat, const json& budgets) {
  for (auto it = budgets.begin(); it != budgets.end(); ++it) {
    bool found = false;
    for (StrutType& s : cat.struts)
      if (s.name == it.key()) {
        const std::int64_t b = it.value().get<std::int64_t>();
        if (b < 0) throw Error("budgets: negative budget for " + it.key());
        s.budget = b;
        found = true;
      }
    if (!found) throw Error("budgets: unknown strut type '" + it.key() + "'");
  }
  return cat;
}

inline json instance_to_json(const ReducedInstance& inst) {
  json j;
  j["kind"] = inst.kind == ReducedKind::Dpc ? "dpc" : inst.kind == ReducedKind::Dpas ? "dpas" : "dcas";
  j["catalog"] = catalog_to_json(inst.das);
  if (inst.kind == ReducedKind::Dpc) {
    j["target"] = {inst.target.v[0], inst.target.v[1], inst.target.v[2], inst.target.v[3]};
  } else {
    j["delta"] = inst.delta;
    j["samples"] = json::array();
    for (const Vec2& p : inst.samples) j["samples"].push_back({p.x, p.y});
  }
  return j;
}

inline ReducedInstance instance_from_json(const json& j) {
  detail::reject_unknown(j, {"kind", "catalog", "target", "delta", "samples", "budgets"},
                         "instance");
  ReducedInstance inst;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dpc")
    inst.kind = ReducedKind::Dpc;
  else if (kind == "dpas")
    inst.kind = ReducedKind::Dpas;
  else if (kind == "dcas")
    inst.kind = ReducedKind::Dcas;
  else
    throw Error("instance: bad kind '" + kind + "'");
  inst.das = j.contains("catalog") ? catalog_from_json(j.at("catalog")) : catalog_standard();
  if (j.contains("budgets")) inst.das = apply_budget_overrides(inst.das, j.at("budgets"));
  if (inst.kind == ReducedKind::Dpc) {
    const json& t = j.at("target");
    if (!t.is_array() || t.size() != 4) throw Error("instance: target must have 4 entries");
    inst.target = ZomePoint{t[0].get<std::int64_t>(), t[1].get<std::int64_t>(),
                            t[2].get<std::int64_t>(), t[3].get<std::int64_t>()};
  } else {
    inst.delta = j.at("delta").get<double>();
    if (inst.delta < 0.0) throw Error("instance: negative delta");
    for (const json& p : j.at("samples")) {
      if (!p.is_array() || p.size() != 2) throw Error("instance: sample point must have 2 entries");
      inst.samples.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (inst.samples.size() < 2) throw Error("instance: need at least 2 sample points");
  }
  return inst;
}

}  // namespace zome
