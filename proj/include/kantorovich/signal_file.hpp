#pragma once

// JSON description of a piecewise signal:
//
//   {
//     "name": "step",
//     "pieces": [
//       {"lower": null, "upper": -3, "power_tail": {"scale": 9, "exponent": -2}},
//       {"lower": -3,   "upper": 0,  "polynomial": [1.5, 0.25]},
//       {"lower": 0,    "upper": null, "polynomial": [0]}
//     ],
//     "point_values": [{"y": 0, "value": 2}]
//   }
//
// null bounds stand for -inf / +inf. Polynomial coefficients are in increasing
// degree. "point_values" is optional.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kantorovich/errors.hpp"
#include "kantorovich/signals.hpp"

namespace kantorovich {

namespace detail {

inline double json_bound(const nlohmann::json& j, const char* key, double infinite) {
  if (!j.contains(key) || j.at(key).is_null()) return infinite;
  if (!j.at(key).is_number()) throw ConfigError(std::string("signal file: '") + key + "' must be a number or null");
  return j.at(key).get<double>();
}

}  // namespace detail

inline PiecewiseSignal parse_signal_json(const nlohmann::json& doc, const std::string& fallback_name = "signal") {
  try {
    if (!doc.is_object() || !doc.contains("pieces") || !doc.at("pieces").is_array()) {
      throw ConfigError("signal file: expected an object with a 'pieces' array");
    }
    std::vector<Piece> pieces;
    for (const auto& p : doc.at("pieces")) {
      Piece piece;
      piece.lower = detail::json_bound(p, "lower", -kInf);
      piece.upper = detail::json_bound(p, "upper", kInf);
      if (p.contains("polynomial")) {
        piece.form = Polynomial{p.at("polynomial").get<std::vector<double>>()};
      } else if (p.contains("power_tail")) {
        const auto& t = p.at("power_tail");
        piece.form = PowerTail{t.at("scale").get<double>(), t.at("exponent").get<int>()};
      } else {
        throw ConfigError("signal file: each piece needs 'polynomial' or 'power_tail'");
      }
      pieces.push_back(std::move(piece));
    }
    std::vector<PointValue> points;
    if (doc.contains("point_values")) {
      for (const auto& pv : doc.at("point_values")) {
        points.push_back({pv.at("y").get<double>(), pv.at("value").get<double>()});
      }
    }
    const std::string name = doc.value("name", fallback_name);
    return PiecewiseSignal(std::move(pieces), std::move(points), name);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("signal file: ") + e.what());
  }
}

inline PiecewiseSignal load_signal_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open signal file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("signal file '" + path + "': " + e.what());
  }
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return parse_signal_json(doc, stem);
}

}  // namespace kantorovich
