// Copyright 2026 The wavebranch Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>

namespace wbcli {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + " must be finite");
  return x;
}

double positive(const json& obj, const char* key, double fallback, const std::string& where) {
  const double x = number(obj, key, fallback, where);
  if (!(x > 0.0)) throw ConfigError(where + "." + key + " must be positive");
  return x;
}

long long integer(const json& obj, const char* key, long long fallback, long long lo, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  const auto x = v.get<long long>();
  if (x < lo) throw ConfigError(where + "." + key + " must be at least " + std::to_string(lo));
  return x;
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Segment parse_segment(const json& s, const std::string& where) {
  only_keys(s, where, {"s_lo", "s_hi", "kind", "coeffs", "rate", "amplitude", "exponent"});
  if (!s.contains("s_lo") || !s.contains("s_hi")) throw ConfigError(where + " needs s_lo and s_hi");
  Segment seg;
  seg.s_lo = number(s, "s_lo", 0.0, where);
  seg.s_hi = number(s, "s_hi", 0.0, where);
  const std::string kind = s.value("kind", std::string("polyexp"));
  if (kind == "polyexp") {
    seg.kind = WBR_PIECE_POLYEXP;
    if (s.contains("amplitude") || s.contains("exponent")) {
      throw ConfigError(where + ": amplitude/exponent belong to rational pieces");
    }
    if (!s.contains("coeffs")) throw ConfigError(where + ".coeffs is required");
    seg.coeffs = numbers(s.at("coeffs"), where + ".coeffs");
    seg.rate = number(s, "rate", 0.0, where);
  } else if (kind == "rational") {
    seg.kind = WBR_PIECE_RATIONAL;
    if (s.contains("coeffs") || s.contains("rate")) throw ConfigError(where + ": coeffs/rate belong to polyexp pieces");
    seg.amplitude = number(s, "amplitude", 0.0, where);
    seg.exponent = number(s, "exponent", 0.0, where);
  } else {
    throw ConfigError(where + ".kind must be 'polyexp' or 'rational'");
  }
  return seg;
}

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override path '" + path + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override path '" + path + "' crosses a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

RunConfig parse_config(const json& doc) {
  only_keys(doc, "config",
            {"g", "p_atm", "vorticity", "grid", "dispersion", "continuation", "homotopy", "output_dir"});
  RunConfig c;
  c.g = positive(doc, "g", c.g, "config");
  c.p_atm = number(doc, "p_atm", c.p_atm, "config");

  if (!doc.contains("vorticity")) throw ConfigError("config.vorticity is required");
  const auto& v = doc.at("vorticity");
  only_keys(v, "vorticity", {"decay_exponent", "segments"});
  c.decay_exponent = number(v, "decay_exponent", c.decay_exponent, "vorticity");
  if (!v.contains("segments") || !v.at("segments").is_array() || v.at("segments").empty()) {
    throw ConfigError("vorticity.segments must be a non-empty array");
  }
  for (std::size_t k = 0; k < v.at("segments").size(); ++k) {
    c.segments.push_back(parse_segment(v.at("segments")[k], "vorticity.segments[" + std::to_string(k) + "]"));
  }

  wbr_grid_defaults(&c.grid);
  if (doc.contains("grid")) {
    const auto& gr = doc.at("grid");
    only_keys(gr, "grid", {"nq", "np_upper", "np_lower", "p_max"});
    c.grid.nq = static_cast<std::size_t>(integer(gr, "nq", static_cast<long long>(c.grid.nq), 8, "grid"));
    c.grid.np_upper =
        static_cast<std::size_t>(integer(gr, "np_upper", static_cast<long long>(c.grid.np_upper), 4, "grid"));
    c.grid.np_lower =
        static_cast<std::size_t>(integer(gr, "np_lower", static_cast<long long>(c.grid.np_lower), 4, "grid"));
    c.grid.p_max = positive(gr, "p_max", c.grid.p_max, "grid");
  }

  if (doc.contains("dispersion")) {
    const auto& d = doc.at("dispersion");
    only_keys(d, "dispersion", {"epsilon", "mode_k", "bracket"});
    c.epsilon = number(d, "epsilon", c.epsilon, "dispersion");
    if (c.epsilon < 0.0) throw ConfigError("dispersion.epsilon must be non-negative");
    c.mode_k = static_cast<int>(integer(d, "mode_k", c.mode_k, 1, "dispersion"));
    if (d.contains("bracket")) {
      const auto b = numbers(d.at("bracket"), "dispersion.bracket");
      if (b.size() != 2 || !(b[0] < b[1])) throw ConfigError("dispersion.bracket must be [lo, hi] with lo < hi");
      c.bracket = std::make_pair(b[0], b[1]);
    }
  }

  wbr_continuation_defaults(&c.continuation);
  if (doc.contains("continuation")) {
    const auto& k = doc.at("continuation");
    const std::string w = "continuation";
    only_keys(k, w, {"s0", "ds", "ds_min", "ds_max", "newton_tol", "max_newton", "max_steps", "lambda_max",
                     "hp_max", "delta"});
    auto& cc = c.continuation;
    cc.s0 = positive(k, "s0", cc.s0, w);
    cc.ds = positive(k, "ds", cc.ds, w);
    cc.ds_min = positive(k, "ds_min", cc.ds_min, w);
    cc.ds_max = positive(k, "ds_max", cc.ds_max, w);
    cc.newton_tol = positive(k, "newton_tol", cc.newton_tol, w);
    cc.max_newton = static_cast<int>(integer(k, "max_newton", cc.max_newton, 1, w));
    cc.max_steps = static_cast<int>(integer(k, "max_steps", cc.max_steps, 1, w));
    cc.lambda_max = positive(k, "lambda_max", cc.lambda_max, w);
    cc.hp_max = positive(k, "hp_max", cc.hp_max, w);
    c.delta = positive(k, "delta", c.delta, w);
    if (!(cc.ds_min <= cc.ds && cc.ds <= cc.ds_max)) {
      throw ConfigError("continuation step sizes must satisfy ds_min <= ds <= ds_max");
    }
  }
  c.continuation.epsilon = c.epsilon;
  c.continuation.mode_k = c.mode_k;

  if (doc.contains("homotopy")) {
    const auto& h = doc.at("homotopy");
    only_keys(h, "homotopy", {"schedule"});
    if (h.contains("schedule")) {
      c.schedule = numbers(h.at("schedule"), "homotopy.schedule");
      for (double e : c.schedule) {
        if (e < 0.0) throw ConfigError("homotopy.schedule entries must be non-negative");
      }
    }
  }

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("output_dir must be a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }
  return c;
}

}  // namespace wbcli
