#include "solidangle/manifold_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "solidangle/errors.hpp"

namespace solidangle {

namespace {

using nlohmann::json;

void require_fields(const json& j, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("manifold spec: unknown field '" + key + "'");
  }
  for (const auto& key : allowed) {
    if (!j.contains(key)) throw ConfigError("manifold spec: missing field '" + key + "'");
  }
}

double number(const json& j, const char* key) {
  if (!j.at(key).is_number()) throw ConfigError(std::string("manifold spec: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const char* key) {
  if (!j.at(key).is_number_integer()) throw ConfigError(std::string("manifold spec: '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

}  // namespace

ManifoldPtr parse_manifold(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("manifold spec: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("manifold spec: expected an object with a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  ManifoldPtr m;
  if (kind == "circle") {
    require_fields(j, {"kind"});
    m = std::make_shared<Circle>();
  } else if (kind == "torus_knot") {
    require_fields(j, {"kind", "p", "q", "R", "r"});
    m = std::make_shared<TorusKnot>(integer(j, "p"), integer(j, "q"), number(j, "R"), number(j, "r"));
  } else if (kind == "polyline") {
    require_fields(j, {"kind", "points"});
    if (!j["points"].is_array()) throw ConfigError("manifold spec: 'points' must be an array");
    std::vector<Vec3> pts;
    for (const auto& p : j["points"]) {
      if (!p.is_array() || p.size() != 3) throw ConfigError("manifold spec: each point needs 3 coordinates");
      for (const auto& c : p) {
        if (!c.is_number()) throw ConfigError("manifold spec: point coordinates must be numbers");
      }
      pts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    m = std::make_shared<SplineCurve>(std::move(pts));
  } else if (kind == "flat_torus4") {
    require_fields(j, {"kind", "R", "r"});
    m = std::make_shared<FlatTorus4>(number(j, "R"), number(j, "r"));
  } else {
    throw ConfigError("manifold spec: unknown kind '" + kind + "'");
  }
  validate_manifold(*m);
  return m;
}

ManifoldPtr load_manifold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifold spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifold(ss.str());
}

}  // namespace solidangle
