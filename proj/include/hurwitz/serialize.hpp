#pragma once

// JSON and CSV renderings. Rationals always travel as "num/den" strings.

#include "hurwitz/qseries.hpp"
#include "hurwitz/rational.hpp"
#include "hurwitz/relations.hpp"
#include "hurwitz/report.hpp"
#include "hurwitz/ternary_forms.hpp"

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace hcn {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& q) { return to_wire(q); }

// {"truncation": M, "coeffs": [[n, "num/den"], ...]}, nonzero terms, ascending n.
inline Json to_json(const QSeries& s) {
  Json coeffs = Json::array();
  for (const auto& [n, v] : s.terms()) coeffs.push_back(Json::array({n, to_wire(v)}));
  return Json{{"truncation", s.truncation()}, {"coeffs", coeffs}};
}

inline Json to_json(const Value& v) {
  return std::visit([](const auto& x) { return to_json(x); }, v);
}

inline Json to_json(const TernaryForm& q) { return Json::array({q.a, q.b, q.c, q.r, q.s, q.t}); }

inline Json to_json(const IdentityReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;  // std::map keeps keys sorted
  Json terms = Json::array();
  for (const auto& t : r.terms) terms.push_back(Json{{"label", t.label}, {"value", to_json(t.value)}});
  return Json{{"identity", r.identity}, {"params", params}, {"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)},     {"pass", r.pass},     {"terms", terms}};
}

inline Rational rational_from_json(const Json& j) { return parse_rational(j.get<std::string>()); }

inline QSeries qseries_from_json(const Json& j) {
  QSeries s(j.at("truncation").get<i64>());
  for (const auto& c : j.at("coeffs")) s[c.at(0).get<i64>()] = parse_rational(c.at(1).get<std::string>());
  return s;
}

inline Value value_from_json(const Json& j) {
  if (j.is_string()) return rational_from_json(j);
  return qseries_from_json(j);
}

inline IdentityReport report_from_json(const Json& j) {
  IdentityReport r;
  r.identity = j.at("identity").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<i64>();
  r.lhs = value_from_json(j.at("lhs"));
  r.rhs = value_from_json(j.at("rhs"));
  r.pass = j.at("pass").get<bool>();
  for (const auto& t : j.at("terms")) r.terms.push_back({t.at("label").get<std::string>(), value_from_json(t.at("value"))});
  return r;
}

namespace detail {

inline std::string value_cell(const Value& v) {
  if (const auto* q = std::get_if<Rational>(&v)) return to_wire(*q);
  return "series[" + std::to_string(std::get<QSeries>(v).truncation()) + "]";
}

inline std::string params_cell(const Params& p) {
  std::string out;
  for (const auto& [k, v] : p) {
    if (!out.empty()) out += ';';
    out += k + "=" + std::to_string(v);
  }
  return out;
}

}  // namespace detail

// One row per parameter point.
inline std::string csv_header() { return "identity,params,lhs,rhs,pass\n"; }

inline std::string csv_row(const IdentityReport& r) {
  return r.identity + "," + detail::params_cell(r.params) + "," + detail::value_cell(r.lhs) + "," + detail::value_cell(r.rhs) + "," +
         (r.pass ? "true" : "false") + "\n";
}

inline std::string to_csv(const std::vector<IdentityReport>& reports) {
  std::string out = csv_header();
  for (const auto& r : reports) out += csv_row(r);
  return out;
}

inline std::string to_pretty(const IdentityReport& r) {
  std::ostringstream os;
  os << r.identity << " [" << detail::params_cell(r.params) << "] " << (r.pass ? "PASS" : "FAIL");
  if (const auto* q = std::get_if<Rational>(&r.lhs))
    os << "  lhs=" << to_pretty(*q) << " rhs=" << to_pretty(std::get<Rational>(r.rhs));
  return os.str();
}

}  // namespace hcn
