#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractrans/error.hpp"
#include "fractrans/geometry.hpp"
#include "fractrans/ifs.hpp"
#include "fractrans/imaging.hpp"
#include "fractrans/random.hpp"
#include "fractrans/sections.hpp"
#include "fractrans/settings.hpp"
#include "fractrans/transform.hpp"

namespace fractrans {

using Json = nlohmann::json;

struct MaskEntry {
  std::string system;
  Mask mask;
  bool tops = false;      // regions derived from the system's image tiles
  bool validate = true;   // run validate_mask when the config is loaded
  bool operator==(const MaskEntry&) const = default;
};

struct PairEntry {
  std::string source;  // mask names
  std::string target;
  bool operator==(const PairEntry&) const = default;
};

// A parsed configuration document: named systems, masks and probability
// vectors, plus the run-wide seed, depth policy and tolerances.
struct Config {
  std::uint64_t seed = 0;
  std::optional<int> depth;
  double epsilon = kDefaultEpsilon;
  Tolerances tolerances;
  std::map<std::string, IfsSystem> systems;
  std::map<std::string, MaskEntry> masks;
  std::map<std::string, ProbabilityVector> probabilities;
  std::optional<PairEntry> pair;

  bool operator==(const Config&) const = default;

  const IfsSystem& system(const std::string& name) const {
    auto it = systems.find(name);
    if (it == systems.end()) throw ConfigError("unknown system '" + name + "'");
    return it->second;
  }
  const MaskEntry& mask(const std::string& name) const {
    auto it = masks.find(name);
    if (it == masks.end()) throw ConfigError("unknown mask '" + name + "'");
    return it->second;
  }
  const ProbabilityVector& probs(const std::string& name) const {
    auto it = probabilities.find(name);
    if (it == probabilities.end()) throw ConfigError("unknown probability vector '" + name + "'");
    return it->second;
  }

  int depth_for(const IfsSystem& ifs) const { return depth ? *depth : recommended_depth(ifs, epsilon); }

  SectionSystem section(const std::string& mask_name, std::optional<int> forced_depth = {}) const {
    const MaskEntry& m = mask(mask_name);
    const IfsSystem& ifs = system(m.system);
    return SectionSystem(ifs, m.mask, forced_depth ? *forced_depth : depth_for(ifs), false);
  }

  /// Homeomorphism pair between two masked systems; both directions use the
  /// larger of the two depths.
  HomeoPair homeo_pair(const std::string& source, const std::string& target) const {
    const int k = std::max(depth_for(system(mask(source).system)), depth_for(system(mask(target).system)));
    return make_homeo_pair(section(source, k), section(target, k));
  }
};

namespace detail {

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

inline const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return j.at(key);
}

inline Json point_json(Point2 p) { return Json::array({p.x, p.y}); }
inline Point2 point_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": a point is [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::string side_name(Side s) { return s == Side::Below ? "below" : "above"; }
inline Side side_from(const Json& j, const std::string& where) {
  const auto s = j.get<std::string>();
  if (s == "below") return Side::Below;
  if (s == "above") return Side::Above;
  throw ConfigError(where + ": side must be 'below' or 'above'");
}

inline Json interval_json(const Interval& i) {
  return {{"lo", i.lo}, {"hi", i.hi}, {"lo_closed", i.lo_closed}, {"hi_closed", i.hi_closed}};
}
inline Interval interval_from(const Json& j, const std::string& where) {
  check_keys(j, {"lo", "hi", "lo_closed", "hi_closed"}, where);
  return {require(j, "lo", where).get<double>(), require(j, "hi", where).get<double>(),
          j.value("lo_closed", true), j.value("hi_closed", true)};
}

inline Json region_json(const Region& r);

struct RegionWriter {
  Json operator()(const region::HalfPlane& h) const {
    return {{"half_plane",
             {{"axis", h.axis == Axis::X ? "x" : "y"}, {"side", side_name(h.side)},
              {"threshold", h.threshold}, {"closed", h.closed}}}};
  }
  Json operator()(const region::Box& b) const {
    return {{"box", {{"x", interval_json(b.x)}, {"y", interval_json(b.y)}}}};
  }
  Json operator()(const region::Quad& q) const {
    return {{"quad", Json::array({point_json(q.map.P), point_json(q.map.Q), point_json(q.map.R),
                                  point_json(q.map.S)})}};
  }
  Json operator()(const region::Diagonal& d) const {
    return {{"diagonal", {{"side", side_name(d.side)}, {"closed", d.closed}}}};
  }
  Json operator()(const region::Complement& c) const { return {{"not", region_json(c.inner.at(0))}}; }
  Json operator()(const region::Intersection& i) const {
    Json parts = Json::array();
    for (const auto& r : i.parts) parts.push_back(region_json(r));
    return {{"all", parts}};
  }
  Json operator()(const region::Union& u) const {
    Json parts = Json::array();
    for (const auto& r : u.parts) parts.push_back(region_json(r));
    return {{"any", parts}};
  }
};

inline Json region_json(const Region& r) { return std::visit(RegionWriter{}, r.node()); }

inline Region region_from(const Json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) throw ConfigError(where + ": a region has exactly one key");
  const auto& [key, body] = *j.items().begin();
  const std::string at = where + "." + key;
  if (key == "half_plane") {
    check_keys(body, {"axis", "side", "threshold", "closed"}, at);
    const auto axis = require(body, "axis", at).get<std::string>();
    if (axis != "x" && axis != "y") throw ConfigError(at + ": axis must be 'x' or 'y'");
    return region::HalfPlane{axis == "x" ? Axis::X : Axis::Y, require(body, "threshold", at).get<double>(),
                             side_from(require(body, "side", at), at), body.value("closed", true)};
  }
  if (key == "box") {
    check_keys(body, {"x", "y"}, at);
    return Region::box(interval_from(require(body, "x", at), at + ".x"),
                       interval_from(require(body, "y", at), at + ".y"));
  }
  if (key == "quad") {
    if (!body.is_array() || body.size() != 4) throw ConfigError(at + ": a quad has four corners");
    return Region::quad(BilinearMap2(point_from(body[0], at), point_from(body[1], at),
                                     point_from(body[2], at), point_from(body[3], at)));
  }
  if (key == "diagonal") {
    check_keys(body, {"side", "closed"}, at);
    return Region::diagonal(side_from(require(body, "side", at), at), body.value("closed", true));
  }
  if (key == "not") return Region::complement(region_from(body, at));
  if (key == "all" || key == "any") {
    if (!body.is_array()) throw ConfigError(at + ": expected a list of regions");
    std::vector<Region> parts;
    for (std::size_t i = 0; i < body.size(); ++i)
      parts.push_back(region_from(body[i], at + "[" + std::to_string(i) + "]"));
    return key == "all" ? Region::intersection(std::move(parts)) : Region::union_of(std::move(parts));
  }
  throw ConfigError(where + ": unknown region kind '" + key + "'");
}

inline Json map_json(const MapVariant& m) {
  if (const auto* a = std::get_if<AffineMap2>(&m)) return {{"affine", {a->a, a->b, a->c, a->d, a->e, a->f}}};
  if (const auto* p = std::get_if<ProjectiveMap2>(&m))
    return {{"projective", {p->a, p->b, p->c, p->d, p->e, p->k, p->g, p->h, p->j}}};
  const auto& b = std::get<BilinearMap2>(m);
  return {{"bilinear", Json::array({point_json(b.P), point_json(b.Q), point_json(b.R), point_json(b.S)})}};
}

inline MapVariant map_from(const Json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) throw ConfigError(where + ": a map has exactly one key");
  const auto& [key, body] = *j.items().begin();
  const auto numbers = [&](std::size_t n) {
    if (!body.is_array() || body.size() != n)
      throw ConfigError(where + ": " + key + " needs " + std::to_string(n) + " coefficients");
    return body.get<std::vector<double>>();
  };
  if (key == "affine") {
    const auto c = numbers(6);
    return AffineMap2(c[0], c[1], c[2], c[3], c[4], c[5]);
  }
  if (key == "projective") {
    const auto c = numbers(9);
    return ProjectiveMap2(c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7], c[8]);
  }
  if (key == "bilinear") {
    if (!body.is_array() || body.size() != 4) throw ConfigError(where + ": bilinear needs four corners");
    return BilinearMap2(point_from(body[0], where), point_from(body[1], where), point_from(body[2], where),
                        point_from(body[3], where));
  }
  throw ConfigError(where + ": unknown map kind '" + key + "'");
}

inline Json system_json(const IfsSystem& s) {
  Json maps = Json::array();
  for (const auto& m : s.maps()) maps.push_back(map_json(m));
  const Rect& d = s.domain();
  return {{"domain", {{"xmin", d.xmin}, {"xmax", d.xmax}, {"ymin", d.ymin}, {"ymax", d.ymax}}},
          {"lipschitz", s.lipschitz_bound()},
          {"self_map_check", s.checks_self_map()},
          {"maps", maps}};
}

inline IfsSystem system_from(const Json& j, const std::string& where) {
  check_keys(j, {"domain", "lipschitz", "self_map_check", "maps"}, where);
  Rect domain = Rect::unit();
  if (j.contains("domain")) {
    const Json& d = j.at("domain");
    check_keys(d, {"xmin", "xmax", "ymin", "ymax"}, where + ".domain");
    domain = {require(d, "xmin", where).get<double>(), require(d, "xmax", where).get<double>(),
              require(d, "ymin", where).get<double>(), require(d, "ymax", where).get<double>()};
  }
  const Json& maps_json = require(j, "maps", where);
  if (!maps_json.is_array()) throw ConfigError(where + ".maps: expected a list");
  std::vector<MapVariant> maps;
  for (std::size_t i = 0; i < maps_json.size(); ++i)
    maps.push_back(map_from(maps_json[i], where + ".maps[" + std::to_string(i) + "]"));
  return IfsSystem(std::move(maps), require(j, "lipschitz", where).get<double>(), domain,
                   j.value("self_map_check", true));
}

inline Json tolerances_json(const Tolerances& t) {
  return {{"projective_denominator", t.projective_denominator}, {"bilinear_slack", t.bilinear_slack},
          {"domain_clamp", t.domain_clamp}, {"self_map", t.self_map},
          {"probability_sum", t.probability_sum}};
}

inline Tolerances tolerances_from(const Json& j) {
  check_keys(j, {"projective_denominator", "bilinear_slack", "domain_clamp", "self_map", "probability_sum"},
             "tolerances");
  Tolerances t;
  t.projective_denominator = j.value("projective_denominator", t.projective_denominator);
  t.bilinear_slack = j.value("bilinear_slack", t.bilinear_slack);
  t.domain_clamp = j.value("domain_clamp", t.domain_clamp);
  t.self_map = j.value("self_map", t.self_map);
  t.probability_sum = j.value("probability_sum", t.probability_sum);
  return t;
}

}  // namespace detail

/// Parses a config document. Its tolerances are installed globally before
/// any map or mask is built, since construction and validation read them.
inline Config parse_config(const Json& doc) {
  try {
    detail::check_keys(doc, {"seed", "depth", "epsilon", "tolerances", "systems", "masks", "probabilities", "pair"},
                       "config");
    Config cfg;
    cfg.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("depth")) {
      cfg.depth = doc.at("depth").get<int>();
      if (*cfg.depth < 1) throw ConfigError("depth must be at least 1");
    }
    cfg.epsilon = doc.value("epsilon", kDefaultEpsilon);
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (doc.contains("tolerances")) cfg.tolerances = detail::tolerances_from(doc.at("tolerances"));
    tolerances() = cfg.tolerances;

    const Json systems_doc = doc.value("systems", Json::object());
    for (const auto& [name, body] : systems_doc.items())
      cfg.systems.emplace(name, detail::system_from(body, "systems." + name));

    const Json masks_doc = doc.value("masks", Json::object());
    for (const auto& [name, body] : masks_doc.items()) {
      const std::string where = "masks." + name;
      detail::check_keys(body, {"system", "regions", "tops", "validate"}, where);
      const std::string sys = detail::require(body, "system", where).get<std::string>();
      const IfsSystem& ifs = cfg.system(sys);
      const bool tops = body.value("tops", false);
      const bool validate = body.value("validate", true);
      if (tops == body.contains("regions"))
        throw ConfigError(where + ": give either 'regions' or 'tops': true");
      Mask mask = [&] {
        if (tops) return tops_mask(ifs, image_tiles(ifs), validate);
        const Json& list = body.at("regions");
        if (!list.is_array()) throw ConfigError(where + ".regions: expected a list");
        std::vector<Region> regions;
        for (std::size_t i = 0; i < list.size(); ++i)
          regions.push_back(detail::region_from(list[i], where + ".regions[" + std::to_string(i) + "]"));
        return Mask(std::move(regions));
      }();
      if (mask.size() != ifs.size())
        throw ConfigError(where + ": " + std::to_string(mask.size()) + " regions for " +
                          std::to_string(ifs.size()) + " maps");
      if (validate && !tops) validate_mask(ifs, mask);
      cfg.masks.emplace(name, MaskEntry{sys, std::move(mask), tops, validate});
    }

    const Json probabilities_doc = doc.value("probabilities", Json::object());
    for (const auto& [name, body] : probabilities_doc.items())
      cfg.probabilities.emplace(name, ProbabilityVector(body.get<std::vector<double>>()));

    if (doc.contains("pair")) {
      const Json& p = doc.at("pair");
      detail::check_keys(p, {"source", "target"}, "pair");
      cfg.pair = PairEntry{detail::require(p, "source", "pair").get<std::string>(),
                           detail::require(p, "target", "pair").get<std::string>()};
      cfg.mask(cfg.pair->source);
      cfg.mask(cfg.pair->target);
    }
    return cfg;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

inline Config parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

inline Json to_json(const Config& cfg) {
  Json doc = {{"seed", cfg.seed}, {"epsilon", cfg.epsilon}, {"tolerances", detail::tolerances_json(cfg.tolerances)}};
  if (cfg.depth) doc["depth"] = *cfg.depth;
  Json systems = Json::object();
  for (const auto& [name, s] : cfg.systems) systems[name] = detail::system_json(s);
  doc["systems"] = systems;
  Json masks = Json::object();
  for (const auto& [name, m] : cfg.masks) {
    Json body = {{"system", m.system}, {"validate", m.validate}};
    if (m.tops) {
      body["tops"] = true;
    } else {
      Json regions = Json::array();
      for (const auto& r : m.mask.regions()) regions.push_back(detail::region_json(r));
      body["regions"] = regions;
    }
    masks[name] = body;
  }
  doc["masks"] = masks;
  Json probs = Json::object();
  for (const auto& [name, p] : cfg.probabilities) probs[name] = p.values();
  doc["probabilities"] = probs;
  if (cfg.pair) doc["pair"] = {{"source", cfg.pair->source}, {"target", cfg.pair->target}};
  return doc;
}

// ---------------------------------------------------------------------------
// Built-in presets
// ---------------------------------------------------------------------------

/// The tent system (tx, 1 - tx) embedded on the diagonal of the unit square.
inline IfsSystem tent_system(double t) {
  if (!(t >= 0.5 && t < 1.0)) throw InvalidArgument("tent parameter must lie in [1/2, 1)");
  return IfsSystem({AffineMap2(t, 0, 0, t, 0, 0), AffineMap2(-t, 0, 0, -t, 1, 1)}, t);
}

/// M1 = {x <= 1/2}, M2 = {x > 1/2}.
inline Mask tent_mask() { return threshold_mask_1d(0.5, Axis::X); }

/// Four-map projective drawing system with coefficients (a, b, c, d, e, k, g, h, j).
inline IfsSystem stealing_projective_system() {
  return IfsSystem({ProjectiveMap2(19.05, 0.72, 1.86, -0.15, 16.9, -0.28, 5.63, 2.01, 20.0),
                    ProjectiveMap2(0.2, 4.4, 7.5, -0.3, -4.4, -10.4, 0.2, 8.8, 15.4),
                    ProjectiveMap2(96.5, 35.2, 5.8, -131.4, -6.5, 19.1, 134.8, 30.7, 7.5),
                    ProjectiveMap2(-32.5, 5.81, -2.9, 122.9, -0.1, -19.9, -128.1, -24.3, -5.8)},
                   0.9, Rect{0.11, 0.89, -0.902, -0.122}, false);
}

inline std::vector<std::string> preset_names() {
  return {"tent", "lenaex", "goldenlennaex", "stealingex-projective", "expack3", "expack4", "goldthm"};
}

inline Config preset(const std::string& name) {
  tolerances() = Tolerances{};
  Config cfg;
  const auto add_masked = [&](const std::string& key, IfsSystem ifs, Mask mask, bool validate = true) {
    if (validate) validate_mask(ifs, mask);
    cfg.systems.emplace(key, std::move(ifs));
    cfg.masks.emplace(key, MaskEntry{key, std::move(mask), false, validate});
  };
  if (name == "tent") {
    add_masked("tent50", tent_system(0.5), tent_mask());
    add_masked("tent75", tent_system(0.75), tent_mask());
  } else if (name == "lenaex") {
    add_masked("F", h_system(0.5), quadrant_mask(0.5));
    add_masked("G", h_system(0.6), quadrant_mask(0.6));
    cfg.pair = PairEntry{"F", "G"};
  } else if (name == "goldenlennaex") {
    constexpr double p = 0.618;
    add_masked("F", hrs_system(2.0 / 3.0, 0.5), quadrant_mask(p));
    add_masked("G", hrs_system(0.5, 2.0 / 3.0), quadrant_mask(1.0 - p));
    cfg.pair = PairEntry{"F", "G"};
  } else if (name == "stealingex-projective") {
    const IfsSystem drawing = stealing_projective_system();
    cfg.masks.emplace("F", MaskEntry{"F", tops_mask(drawing, image_tiles(drawing), false), true, false});
    cfg.systems.emplace("F", drawing);
    add_masked("P", h_system(0.5), quadrant_mask(0.5));
    cfg.pair = PairEntry{"F", "P"};
  } else if (name == "expack3") {
    cfg.systems.emplace("F", packing_source_system());
    add_masked("G", packing_carrier_system(), packing_mask(0.5));
    cfg.masks.emplace("F044", MaskEntry{"F", packing_mask(0.44), false, true});
    cfg.masks.emplace("F056", MaskEntry{"F", packing_mask(0.56), false, true});
    validate_mask(cfg.system("F"), cfg.mask("F044").mask);
    validate_mask(cfg.system("F"), cfg.mask("F056").mask);
  } else if (name == "expack4") {
    const IfsSystem f({AffineMap2(0.66, 0, 0, 0.34, 0, 0), AffineMap2(0.34, 0, 0, 0.34, 0.66, 0),
                       AffineMap2(0.34, 0, 0, 0.66, 0.66, 0.34), AffineMap2(0.66, 0, 0, 0.66, 0, 0.34)},
                      0.66);
    const IfsSystem g({AffineMap2(0.34, 0, 0, 0.66, 0, 0), AffineMap2(0.66, 0, 0, 0.66, 0.34, 0),
                       AffineMap2(0.66, 0, 0, 0.34, 0.34, 0.66), AffineMap2(0.34, 0, 0, 0.34, 0, 0.66)},
                      0.66);
    cfg.probabilities.emplace("P", area_probabilities(f));
    cfg.probabilities.emplace("Ptilde", area_probabilities(g));
    cfg.systems.emplace("F", f);
    cfg.systems.emplace("G", g);
    cfg.systems.emplace("H", h_system(0.5));
  } else if (name == "goldthm") {
    cfg.systems.emplace("H", golden_system(2.0 / 3.0, 0.5));
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return cfg;
}

}  // namespace fractrans
