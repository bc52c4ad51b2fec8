#pragma once

// Command-line front end. run_cli() is the whole program; main() only forwards
// the process streams so the tests can drive it in-process.
//
// Exit codes: 0 success / all pass, 1 a verification failed, 2 usage or
// hypothesis error.

#include "hurwitz/arith.hpp"
#include "hurwitz/binary_forms.hpp"
#include "hurwitz/class_numbers.hpp"
#include "hurwitz/qseries.hpp"
#include "hurwitz/relations.hpp"
#include "hurwitz/serialize.hpp"
#include "hurwitz/ternary_forms.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hcn::cli {

enum class Format { json, csv, pretty };

struct Output {
  Format format = Format::pretty;
  std::string path;
};

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

inline i64 parse_int(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  i64 v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw UsageError(flag + ": '" + text + "' is not an integer");
  }
  if (used != text.size()) throw UsageError(flag + ": '" + text + "' is not an integer");
  return v;
}

// "a:b" inclusive, "x,y,z", or a single integer.
inline std::vector<i64> parse_values(const std::string& text, const std::string& flag) {
  std::vector<i64> out;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    const i64 lo = parse_int(text.substr(0, colon), flag), hi = parse_int(text.substr(colon + 1), flag);
    if (hi < lo) throw UsageError(flag + ": empty range '" + text + "'");
    for (i64 v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(parse_int(part, flag));
  if (out.empty()) throw UsageError(flag + ": no value");
  return out;
}

inline std::vector<Params> cartesian(const std::vector<std::pair<std::string, std::vector<i64>>>& axes) {
  std::vector<Params> grid{Params{}};
  for (const auto& [key, values] : axes) {
    std::vector<Params> next;
    for (const auto& base : grid)
      for (i64 v : values) {
        Params p = base;
        p[key] = v;
        next.push_back(std::move(p));
      }
    grid = std::move(next);
  }
  return grid;
}

inline void emit(const Output& out, const std::string& text, std::ostream& stdout_) {
  if (out.path.empty()) {
    stdout_ << text;
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw UsageError("--output: cannot write '" + out.path + "'");
  f << text;
}

inline std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

inline std::string series_text(const QSeries& s, Format fmt) {
  if (fmt == Format::json) return json_text(to_json(s));
  std::string text;
  if (fmt == Format::csv) {
    text = "n,coeff\n";
    for (i64 n = 0; n <= s.truncation(); ++n) text += std::to_string(n) + "," + to_wire(s[n]) + "\n";
    return text;
  }
  for (const auto& [n, v] : s.terms()) {
    if (!text.empty()) text += " + ";
    text += "(" + to_pretty(v) + ")q^" + std::to_string(n);
  }
  return (text.empty() ? "0" : text) + " + O(q^" + std::to_string(s.truncation() + 1) + ")\n";
}

inline std::string value_text(const Rational& v, const Json& context, Format fmt) {
  if (fmt == Format::json) {
    Json j = context;
    j["value"] = to_wire(v);
    return json_text(j);
  }
  if (fmt == Format::csv) {
    std::string head, row;
    for (const auto& [k, x] : context.items()) {
      head += k + ",";
      row += x.dump() + ",";
    }
    return head + "value\n" + row + to_wire(v) + "\n";
  }
  return to_pretty(v) + "\n";
}

inline std::string reports_text(const std::vector<IdentityReport>& reports, Format fmt, const std::optional<RangeSummary>& summary) {
  if (fmt == Format::csv) return to_csv(reports);
  if (fmt == Format::json) {
    if (!summary && reports.size() == 1) return json_text(to_json(reports.front()));
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    Json j{{"reports", arr}};
    if (summary) j["summary"] = {{"total", summary->total}, {"passed", summary->passed}, {"failed", summary->failed}};
    return json_text(j);
  }
  std::string text;
  for (const auto& r : reports) text += to_pretty(r) + "\n";
  if (summary)
    text += "summary: " + std::to_string(summary->passed) + "/" + std::to_string(summary->total) + " passed\n";
  return text;
}

// Golden tables for the worked examples: orbit lists, genus class lists, series heads.
inline void seed_tables(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const Json& j) {
    std::ofstream f(fs::path(dir) / name);
    if (!f) throw UsageError("--seed-tables: cannot write into '" + dir + "'");
    f << j.dump(2) << "\n";
  };

  Json orbits = Json::array();
  for (auto [p, n] : std::vector<std::pair<i64, i64>>{{31, 43}, {31, 172}, {41, 35}, {41, 140}}) {
    const auto set = gamma0_orbits(p, n, true);
    Json reps = Json::array();
    for (const auto& r : set.representatives)
      reps.push_back({{"form", Json::array({r.form.a, r.form.b, r.form.c})}, {"stabilizer", r.stabilizer_order}});
    orbits.push_back({{"p", p}, {"disc", -n}, {"count", set.count()}, {"representatives", reps}});
  }
  write("orbits.json", orbits);

  Json genera = Json::array();
  for (auto [N, a] : std::vector<std::pair<i64, i64>>{{5, 5}, {7, 7}, {11, 11}, {35, 5}, {35, 7}}) {
    const auto g = genus_contents(N, a);
    Json classes = Json::array();
    for (const auto& c : g.classes) classes.push_back({{"form", to_json(c.form)}, {"aut", c.aut_order}});
    genera.push_back({{"level", g.descriptor.level},
                      {"disc", g.descriptor.disc},
                      {"anisotropic", g.descriptor.anisotropic_set},
                      {"mass", to_wire(g.mass())},
                      {"classes", classes}});
  }
  write("genera.json", genera);

  Json heads;
  heads["3H_5_5"] = to_json(pw_series(1, 5, 5, 19) * Rational{3});
  heads["2H_7_7"] = to_json(pw_series(1, 7, 7, 19) * Rational{2});
  heads["theta_3_15_15_-14_-2_-2"] = to_json(theta_series(TernaryForm{3, 15, 15, -14, -2, -2}, 48));
  heads["cusp_level44_monic"] = to_json(checks::cusp_form_level44(55));
  heads["H_11_11"] = to_json(pw_series(1, 11, 11, 48));
  write("series.json", heads);
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Hurwitz class numbers: compute, enumerate, verify"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string format_name;
  std::string output_path;
  std::string seed_dir;
  app.add_option("--format", format_name, "json | csv | pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));
  app.add_option("-o,--output", output_path, "write to this file instead of stdout");
  app.add_option("--seed-tables", seed_dir, "dump example tables (orbits, genera, series heads) into this directory");

  i64 n = 0, ell = 1, m = 0, N = 0, n1 = 0, n2 = 0, d = 0, p = 0, disc = 0, level = 0, aniso = 0, prec = 20;
  std::string form_text, factors_text, scale_name = "smoke", identity;
  bool range = false, positive_only = false;

  auto* hurwitz = app.add_subcommand("hurwitz", "H(n) by reduced-form counting");
  hurwitz->add_option("n", n)->required();

  auto* pw = app.add_subcommand("pw", "H(ell, m, N; n)");
  pw->add_option("--ell", ell, "character modulus (default 1)");
  pw->add_option("--m", m)->required();
  pw->add_option("--N", N)->required();
  pw->add_option("--n", n)->required();

  auto* lsz = app.add_subcommand("lsz", "H^(N1,N2)(D)");
  lsz->add_option("--n1", n1)->required();
  lsz->add_option("--n2", n2)->required();
  lsz->add_option("--d", d)->required();

  auto* lf = app.add_subcommand("local-factors", "A_p, B_p, C_p, D_p at n");
  lf->add_option("--p", p)->required();
  lf->add_option("--n", n)->required();

  auto* orb = app.add_subcommand("orbits", "Gamma0(p)-orbits of forms with p | a and the given discriminant");
  orb->add_option("--p", p)->required();
  orb->add_option("--disc", disc, "discriminant -n (the sign is ignored)")->required();
  orb->add_flag("--positive-only", positive_only, "omit the negative definite orbits");

  auto* ter = app.add_subcommand("ternary-enumerate", "classes of ternary forms by level and discriminant");
  ter->add_option("--level", level)->required();
  ter->add_option("--disc", disc)->required();
  ter->add_option("--aniso", aniso, "keep forms anisotropic exactly at the primes of this number");

  auto* theta = app.add_subcommand("theta", "theta series of a ternary form");
  theta->add_option("--form", form_text, "a,b,c,r,s,t")->required();
  theta->add_option("--prec", prec, "truncation");

  auto* eta = app.add_subcommand("eta", "eta product q-expansion");
  eta->add_option("--factors", factors_text, "d:e,d:e,...")->required();
  eta->add_option("--prec", prec, "truncation");

  auto* hmn = app.add_subcommand("series-hmn", "sum H(ell, m, N; n) q^n");
  hmn->add_option("--ell", ell);
  hmn->add_option("--m", m)->required();
  hmn->add_option("--N", N)->required();
  hmn->add_option("--prec", prec, "truncation");

  std::optional<i64> verify_prec;
  auto* ver = app.add_subcommand("verify", "verify one identity; parameters as --key value");
  ver->add_option("identity", identity)->required();
  ver->add_flag("--range", range, "parameter values may be ranges a:b or lists x,y,z");
  ver->add_option("--prec", verify_prec, "series truncation");
  ver->allow_extras();
  ver->fallthrough(false);

  auto* all = app.add_subcommand("verify-all", "every identity on its standard grid");
  all->add_option("--scale", scale_name)->check(CLI::IsMember({"smoke", "desk"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  Output o;
  o.path = output_path;
  auto format_or = [&](Format fallback) {
    if (format_name == "json") return Format::json;
    if (format_name == "csv") return Format::csv;
    if (format_name == "pretty") return Format::pretty;
    return fallback;
  };

  try {
    if (!seed_dir.empty()) {
      detail::seed_tables(seed_dir);
      if (app.get_subcommands().empty()) return 0;
    }
    if (app.get_subcommands().empty()) {
      err << app.help();
      return 2;
    }

    if (*hurwitz) {
      if (n < 0) throw HypothesisError("hurwitz: n=" + std::to_string(n) + " must be non-negative");
      o.format = format_or(Format::pretty);
      detail::emit(o, detail::value_text(hurwitz_H(n), Json{{"n", n}}, o.format), out);
    } else if (*pw) {
      o.format = format_or(Format::pretty);
      const PWParams prm{ell, m, N};
      detail::emit(o, detail::value_text(pw_class_number(prm, n), Json{{"ell", ell}, {"m", m}, {"N", N}, {"n", n}}, o.format), out);
    } else if (*lsz) {
      o.format = format_or(Format::pretty);
      detail::emit(o, detail::value_text(lsz_class_number(n1, n2, d), Json{{"n1", n1}, {"n2", n2}, {"d", d}}, o.format), out);
    } else if (*lf) {
      o.format = format_or(Format::pretty);
      if (n < 1 || !is_discriminant(-n)) throw HypothesisError("--n: -" + std::to_string(n) + " must be a negative discriminant");
      const auto f = local_factors(p, n);
      if (o.format == Format::json) {
        detail::emit(o, detail::json_text(Json{{"p", p}, {"n", n}, {"A", to_wire(f.A)}, {"B", to_wire(f.B)}, {"C", to_wire(f.C)}, {"D", to_wire(f.D)}}), out);
      } else if (o.format == Format::csv) {
        detail::emit(o, "p,n,A,B,C,D\n" + std::to_string(p) + "," + std::to_string(n) + "," + to_wire(f.A) + "," + to_wire(f.B) + "," +
                            to_wire(f.C) + "," + to_wire(f.D) + "\n", out);
      } else {
        detail::emit(o, "A=" + to_pretty(f.A) + " B=" + to_pretty(f.B) + " C=" + to_pretty(f.C) + " D=" + to_pretty(f.D) + "\n", out);
      }
    } else if (*orb) {
      o.format = format_or(Format::pretty);
      hcn::detail::require_prime(p, "--p");
      const i64 absn = disc < 0 ? -disc : disc;
      const auto set = gamma0_orbits(p, absn, !positive_only);
      if (o.format == Format::json) {
        Json reps = Json::array();
        for (const auto& r : set.representatives)
          reps.push_back({{"form", Json::array({r.form.a, r.form.b, r.form.c})}, {"stabilizer", r.stabilizer_order}});
        detail::emit(o, detail::json_text(Json{{"p", p}, {"disc", -absn}, {"count", set.count()}, {"representatives", reps}}), out);
      } else {
        std::string text = o.format == Format::csv ? "a,b,c,stabilizer\n" : "";
        for (const auto& r : set.representatives) {
          if (o.format == Format::csv)
            text += std::to_string(r.form.a) + "," + std::to_string(r.form.b) + "," + std::to_string(r.form.c) + "," +
                    std::to_string(r.stabilizer_order) + "\n";
          else
            text += to_string(r.form) + "  |stab|=" + std::to_string(r.stabilizer_order) + "\n";
        }
        if (o.format == Format::pretty) text += std::to_string(set.count()) + " orbits\n";
        detail::emit(o, text, out);
      }
    } else if (*ter) {
      o.format = format_or(Format::pretty);
      if (level < 1) throw HypothesisError("--level must be positive");
      std::vector<i64> wanted;
      if (aniso > 0) wanted = prime_divisors(aniso);
      Json arr = Json::array();
      std::string text = o.format == Format::csv ? "a,b,c,r,s,t,aut,anisotropic\n" : "";
      for (const auto& q : enumerate_classes(level, disc)) {
        const auto ap = anisotropic_primes(q);
        if (aniso > 0 && ap != wanted) continue;
        const int aut = aut_order(q);
        i64 prod = 1;
        for (i64 x : ap) prod *= x;
        arr.push_back({{"form", to_json(q)}, {"aut", aut}, {"anisotropic", ap}});
        if (o.format == Format::csv)
          text += std::to_string(q.a) + "," + std::to_string(q.b) + "," + std::to_string(q.c) + "," + std::to_string(q.r) + "," +
                  std::to_string(q.s) + "," + std::to_string(q.t) + "," + std::to_string(aut) + "," + std::to_string(prod) + "\n";
        else
          text += to_string(q) + "  |Aut|=" + std::to_string(aut) + "  anisotropic at " + std::to_string(prod) + "\n";
      }
      if (o.format == Format::json)
        detail::emit(o, detail::json_text(Json{{"level", level}, {"disc", disc}, {"classes", arr}}), out);
      else
        detail::emit(o, text, out);
    } else if (*theta) {
      o.format = format_or(Format::pretty);
      const auto parts = detail::split(form_text, ',');
      if (parts.size() != 6) throw UsageError("--form: expected six integers a,b,c,r,s,t");
      std::vector<i64> c;
      for (const auto& s : parts) c.push_back(detail::parse_int(s, "--form"));
      const TernaryForm q{c[0], c[1], c[2], c[3], c[4], c[5]};
      if (!is_positive_definite(q)) throw HypothesisError("--form: " + to_string(q) + " is not positive definite");
      detail::emit(o, detail::series_text(theta_series(q, prec), o.format), out);
    } else if (*eta) {
      o.format = format_or(Format::pretty);
      std::vector<EtaFactor> fs;
      for (const auto& part : detail::split(factors_text, ',')) {
        const auto de = detail::split(part, ':');
        if (de.size() != 2) throw UsageError("--factors: expected d:e, got '" + part + "'");
        fs.push_back({detail::parse_int(de[0], "--factors"), detail::parse_int(de[1], "--factors")});
      }
      detail::emit(o, detail::series_text(eta_product(fs, prec), o.format), out);
    } else if (*hmn) {
      o.format = format_or(Format::pretty);
      detail::emit(o, detail::series_text(pw_series(ell, m, N, prec), o.format), out);
    } else if (*ver) {
      const auto extras = ver->remaining();
      std::vector<std::pair<std::string, std::vector<i64>>> axes;
      for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string flag = extras[i] == "-o" ? std::string("--output") : extras[i];
        if (flag.rfind("--", 0) != 0 || flag.size() < 3) throw UsageError("unexpected argument '" + flag + "'");
        if (i + 1 >= extras.size()) throw UsageError(flag + ": missing value");
        const std::string key = flag.substr(2);
        const std::string text = extras[++i];
        if (key == "format") {
          if (text != "json" && text != "csv" && text != "pretty") throw UsageError("--format: expected json, csv or pretty");
          format_name = text;
          continue;
        }
        if (key == "output") {
          output_path = text;
          continue;
        }
        axes.emplace_back(key, range ? detail::parse_values(text, flag) : std::vector<i64>{detail::parse_int(text, flag)});
      }
      o.format = format_or(Format::json);
      o.path = output_path;
      if (!range) {
        Params prm;
        for (const auto& [k, v] : axes) prm[k] = v.front();
        const auto r = verify(identity, prm, verify_prec);
        detail::emit(o, detail::reports_text({r}, o.format, std::nullopt), out);
        return r.pass ? 0 : 1;
      }
      const auto summary = verify_range(identity, detail::cartesian(axes), verify_prec);
      detail::emit(o, detail::reports_text(summary.reports, o.format, summary), out);
      return summary.failed == 0 ? 0 : 1;
    } else if (*all) {
      o.format = format_or(Format::pretty);
      const Scale scale = scale_name == "desk" ? Scale::desk : Scale::smoke;
      std::vector<IdentityReport> failures;
      Json table = Json::array();
      std::string text, csv = "identity,total,passed,failed\n";
      std::size_t failed = 0;
      for (const auto& e : registry()) {
        const auto s = verify_range(e.name, standard_grid(e.name, scale));
        failed += s.failed;
        table.push_back({{"identity", e.name}, {"total", s.total}, {"passed", s.passed}, {"failed", s.failed}});
        text += e.name + ": " + std::to_string(s.passed) + "/" + std::to_string(s.total) + (s.failed ? "  FAIL" : "  ok") + "\n";
        csv += e.name + "," + std::to_string(s.total) + "," + std::to_string(s.passed) + "," + std::to_string(s.failed) + "\n";
        for (const auto& r : s.reports)
          if (!r.pass) failures.push_back(r);
      }
      if (o.format == Format::json) {
        Json fj = Json::array();
        for (const auto& r : failures) fj.push_back(to_json(r));
        detail::emit(o, detail::json_text(Json{{"scale", scale_name}, {"identities", table}, {"failures", fj}}), out);
      } else if (o.format == Format::csv) {
        detail::emit(o, csv, out);
      } else {
        for (const auto& r : failures) text += "  " + to_pretty(r) + "\n";
        detail::emit(o, text, out);
      }
      return failed == 0 ? 0 : 1;
    }
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace hcn::cli
