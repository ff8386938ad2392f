#pragma once

// Job configuration parsing and report serialization (JSON documents, CSV
// series). Divergent certificates are written as null with "finite": false.

#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "diffhank/criteria.hpp"
#include "diffhank/discrete_operator.hpp"
#include "diffhank/measure.hpp"
#include "diffhank/quadrature.hpp"
#include "diffhank/transforms.hpp"

namespace diffhank {

using json = nlohmann::json;

/// Configuration problem, tagged with the dotted path of the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument("config error at '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct JobConfig {
  Measure measure;
  PowerWeight weight;
  GridSpec grid;
  std::vector<double> times;
  std::vector<complex> points;
  std::optional<int> top;
  std::optional<int> degree;
};

namespace detail {

inline const json& require_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

inline double number_field(const json& obj, const std::string& key, const std::string& path) {
  return as_number(require_field(obj, key, path), join_path(path, key));
}

inline double number_field_or(const json& obj, const std::string& key, const std::string& path,
                              double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return as_number(*it, join_path(path, key));
}

inline int integer_field_or(const json& obj, const std::string& key, const std::string& path,
                            int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) throw ConfigError(join_path(path, key), "expected an integer");
  return it->get<int>();
}

inline std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline Density parse_density(const json& d, const std::string& path) {
  const auto& kind = require_field(d, "kind", path);
  if (!kind.is_string()) throw ConfigError(path + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "power_law") {
    PowerLawDensity p;
    p.coeff = number_field(d, "coeff", path);
    p.exponent = number_field(d, "exponent", path);
    const auto& sup = require_field(d, "support", path);
    if (!sup.is_array() || sup.size() != 2)
      throw ConfigError(path + ".support", "expected [lower-or-null, upper]");
    p.lower = sup[0].is_null() ? -kInf : as_number(sup[0], path + ".support[0]");
    p.upper = as_number(sup[1], path + ".support[1]");
    return p;
  }
  if (k == "sampled") {
    SampledDensity s;
    s.nodes = number_array(require_field(d, "nodes", path), path + ".nodes");
    s.values = number_array(require_field(d, "values", path), path + ".values");
    return s;
  }
  throw ConfigError(path + ".kind", "unknown density kind '" + k + "'");
}

}  // namespace detail

inline Measure parse_measure(const json& m, const std::string& path = "measure") {
  if (!m.is_object()) throw ConfigError(path, "expected an object");
  std::vector<Atom> atoms;
  if (auto it = m.find("atoms"); it != m.end()) {
    if (!it->is_array()) throw ConfigError(path + ".atoms", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto p = path + ".atoms[" + std::to_string(i) + "]";
      const auto& a = (*it)[i];
      atoms.push_back({{detail::number_field(a, "re", p), detail::number_field_or(a, "im", p, 0.0)},
                       {detail::number_field(a, "weight_re", p),
                        detail::number_field_or(a, "weight_im", p, 0.0)}});
    }
  }
  std::vector<Density> densities;
  if (auto it = m.find("densities"); it != m.end()) {
    if (!it->is_array()) throw ConfigError(path + ".densities", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      densities.push_back(
          detail::parse_density((*it)[i], path + ".densities[" + std::to_string(i) + "]"));
  }
  Measure measure(std::move(atoms), std::move(densities));
  if (const auto v = validate(measure); !v.empty())
    throw ConfigError(path + "." + v.front().component, v.front().reason);
  return measure;
}

/// Parses and validates a job configuration document.
inline JobConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  JobConfig cfg;
  cfg.measure = parse_measure(detail::require_field(doc, "measure", ""));
  if (auto it = doc.find("weight"); it != doc.end()) {
    cfg.weight.scale = detail::number_field(*it, "scale", "weight");
    cfg.weight.alpha = detail::number_field(*it, "alpha", "weight");
    if (!(cfg.weight.scale > 0.0)) throw ConfigError("weight.scale", "must be positive");
    if (!(cfg.weight.alpha > -0.5)) throw ConfigError("weight.alpha", "must exceed -1/2");
  }
  if (auto it = doc.find("grid"); it != doc.end()) {
    const GridSpec def;
    cfg.grid.t_min = detail::number_field_or(*it, "t_min", "grid", def.t_min);
    cfg.grid.t_max = detail::number_field_or(*it, "t_max", "grid", def.t_max);
    cfg.grid.panels = detail::integer_field_or(*it, "panels", "grid", def.panels);
    cfg.grid.order = detail::integer_field_or(*it, "order", "grid", def.order);
    if (!(cfg.grid.t_min > 0.0)) throw ConfigError("grid.t_min", "must be positive");
    if (!(cfg.grid.t_max > cfg.grid.t_min) || !std::isfinite(cfg.grid.t_max))
      throw ConfigError("grid.t_max", "must be finite and exceed t_min");
    if (cfg.grid.panels < 1) throw ConfigError("grid.panels", "must be >= 1");
    if (cfg.grid.order < 2) throw ConfigError("grid.order", "must be >= 2");
  }
  if (auto it = doc.find("times"); it != doc.end()) cfg.times = detail::number_array(*it, "times");
  if (auto it = doc.find("points"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("points", "expected an array of [re, im] pairs");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto p = detail::number_array((*it)[i], "points[" + std::to_string(i) + "]");
      if (p.size() != 2) throw ConfigError("points[" + std::to_string(i) + "]", "expected [re, im]");
      cfg.points.emplace_back(p[0], p[1]);
    }
  }
  if (doc.contains("top")) cfg.top = detail::integer_field_or(doc, "top", "", 1);
  if (doc.contains("degree")) cfg.degree = detail::integer_field_or(doc, "degree", "", 0);
  return cfg;
}

inline JobConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

inline JobConfig parse_config(const char* text) { return parse_config(std::string(text)); }

// ---------------------------------------------------------------------------
// Number formatting and CSV.

/// 17 significant digits, shortest form for integers ("2", "0.5", "0").
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Parses "1", "2.5", "2+1i", "1-0.5i", "3i".
inline complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw std::invalid_argument("empty complex number");
  auto to_double = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse complex number '" + text + "'");
    }
    if (used != part.size()) throw std::invalid_argument("cannot parse complex number '" + text + "'");
    return v;
  };
  if (s.back() != 'i') return {to_double(s), 0.0};
  s.pop_back();
  // split at the last sign that is not an exponent sign or the leading sign
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      const auto im = s.substr(k);
      return {to_double(s.substr(0, k)), im == "+" ? 1.0 : im == "-" ? -1.0 : to_double(im)};
    }
  }
  if (s.empty() || s == "+") return {0.0, 1.0};
  if (s == "-") return {0.0, -1.0};
  return {0.0, to_double(s)};
}

inline std::string impulse_csv(const Measure& measure, const std::vector<double>& times) {
  std::ostringstream out;
  out << "t,re_h,im_h\n";
  for (double t : times) {
    const complex h = impulse_response(measure, t);
    out << format_double(t) << ',' << format_double(h.real()) << ',' << format_double(h.imag())
        << '\n';
  }
  return out.str();
}

inline std::string transfer_csv(const Measure& measure, const std::vector<complex>& points) {
  std::ostringstream out;
  out << "s_re,s_im,re_g,im_g\n";
  for (const auto& s : points) {
    const auto g = transfer_function(measure, s);
    out << format_double(s.real()) << ',' << format_double(s.imag()) << ',';
    if (g.finite)
      out << format_double(g.value.real()) << ',' << format_double(g.value.imag());
    else
      out << "divergent,divergent";
    out << '\n';
  }
  return out.str();
}

inline std::string spectrum_csv(const SingularSpectrum& spec, std::size_t top) {
  std::ostringstream out;
  out << "k,sigma\n";
  for (std::size_t k = 0; k < std::min(top, spec.size()); ++k)
    out << (k + 1) << ',' << format_double(spec[k]) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON reports.

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const CriterionVerdict& v) {
  return {{"status", to_string(v.status)},
          {"value", finite_or_null(v.value)},
          {"finite", std::isfinite(v.value)},
          {"necessary_and_sufficient", v.necessary_and_sufficient},
          {"note", v.note}};
}

inline CriterionVerdict verdict_from_json(const json& j) {
  CriterionVerdict v;
  v.status = status_from_string(j.at("status").get<std::string>());
  v.value = j.at("value").is_null() ? kInf : j.at("value").get<double>();
  v.necessary_and_sufficient = j.at("necessary_and_sufficient").get<bool>();
  v.note = j.at("note").get<std::string>();
  return v;
}

inline json to_json(const ClassificationReport& r) {
  return {{"bibo", to_json(r.bibo)},
          {"bounded", to_json(r.bounded)},
          {"hilbert_schmidt", to_json(r.hilbert_schmidt)},
          {"nuclear", to_json(r.nuclear)},
          {"weight", {{"scale", r.weight.scale}, {"alpha", r.weight.alpha}}},
          {"measure",
           {{"atoms", r.measure.atoms},
            {"densities", r.measure.densities},
            {"is_positive", r.measure.is_positive},
            {"on_negative_axis", r.measure.on_negative_axis}}},
          {"notes", r.notes}};
}

inline ClassificationReport report_from_json(const json& j) {
  ClassificationReport r;
  r.bibo = verdict_from_json(j.at("bibo"));
  r.bounded = verdict_from_json(j.at("bounded"));
  r.hilbert_schmidt = verdict_from_json(j.at("hilbert_schmidt"));
  r.nuclear = verdict_from_json(j.at("nuclear"));
  r.weight.scale = j.at("weight").at("scale").get<double>();
  r.weight.alpha = j.at("weight").at("alpha").get<double>();
  const auto& m = j.at("measure");
  r.measure.atoms = m.at("atoms").get<std::size_t>();
  r.measure.densities = m.at("densities").get<std::size_t>();
  r.measure.is_positive = m.at("is_positive").get<bool>();
  r.measure.on_negative_axis = m.at("on_negative_axis").get<bool>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

inline std::string report_table(const ClassificationReport& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "weight: c = %.6g, alpha = %.6g\n", r.weight.scale,
                r.weight.alpha);
  out << line;
  std::snprintf(line, sizeof line, "%-16s %-13s %-24s %s\n", "criterion", "status", "value",
                "iff");
  out << line;
  auto row = [&](const char* name, const CriterionVerdict& v) {
    std::snprintf(line, sizeof line, "%-16s %-13s %-24s %s\n", name, to_string(v.status),
                  format_double(v.value).c_str(), v.necessary_and_sufficient ? "yes" : "no");
    out << line;
  };
  row("bibo", r.bibo);
  row("bounded", r.bounded);
  row("hilbert_schmidt", r.hilbert_schmidt);
  row("nuclear", r.nuclear);
  for (const auto& n : r.notes) out << "note: " << n << '\n';
  return out.str();
}

inline json to_json(const ReductionBounds& b) {
  return {{"degree", b.degree}, {"lower", b.lower}, {"upper", b.upper}};
}

inline ReductionBounds bounds_from_json(const json& j) {
  return {j.at("degree").get<std::size_t>(), j.at("lower").get<double>(),
          j.at("upper").get<double>()};
}

inline json to_json(const OperatorNorms& n) {
  return {{"operator", n.operator_norm}, {"hilbert_schmidt", n.hilbert_schmidt},
          {"nuclear", n.nuclear}};
}

inline json to_json(const GrowthDiagnostic& g) {
  return {{"range_ratios", g.range_ratios},
          {"sigma1", g.values},
          {"growth_exponent", g.power_exponent}};
}

inline json to_json(const GridSpec& g) {
  return {{"t_min", g.t_min}, {"t_max", g.t_max}, {"panels", g.panels}, {"order", g.order}};
}

}  // namespace diffhank
