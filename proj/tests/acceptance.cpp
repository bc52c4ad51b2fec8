// Acceptance run: one PASS/FAIL line per criterion.
//
// Criterion 4 is known to fail as literally stated (see the decisions ledger);
// its line is printed as FAIL together with the corrected checks. The exit
// status is 0 when every other criterion passes and the corrected checks hold.

#include "hurwitz/relations.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace hcn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

QSeries from_terms(i64 M, std::initializer_list<std::pair<i64, long>> terms) {
  QSeries s(M);
  for (auto [n, c] : terms) s[n] = Rational{c};
  return s;
}

QSeries oracle_theta(const TernaryForm& q, i64 M) {
  const auto t = oracle::theta({q.a, q.b, q.c, q.r, q.s, q.t}, M);
  QSeries s(M);
  for (i64 n = 0; n <= M; ++n) s[n] = Rational{static_cast<long>(t[static_cast<std::size_t>(n)])};
  return s;
}

std::string params_text(const Params& p) {
  std::string out;
  for (const auto& [k, v] : p) out += (out.empty() ? "" : " ") + k + "=" + std::to_string(v);
  return out;
}

// Runs the desk grid of each identity; records the first failure of each.
void run_grids(Outcome& o, const std::vector<std::string>& names, std::size_t& points) {
  for (const auto& name : names) {
    const auto s = verify_range(name, standard_grid(name, Scale::desk));
    points += s.total;
    if (s.failed == 0) continue;
    for (const auto& r : s.reports)
      if (!r.pass) {
        o.require(false, name + " fails at " + params_text(r.params) + " (" + std::to_string(s.failed) + " failures)");
        break;
      }
  }
}

Rational scalar(const IdentityReport& r, bool lhs) { return std::get<Rational>(lhs ? r.lhs : r.rhs); }

Outcome criterion1() {
  Outcome o;
  const auto r = verify("main4", {{"p", 41}, {"n", 35}});
  o.require(r.pass, "main4(41,35) fails");
  o.require(scalar(r, true) == 0 && scalar(r, false) == 0, "sides are not 0");
  o.require(oracle::r3(41 * 41 * 35) == 2064, "brute-force r3(41^2 35) != 2064");
  o.require(r3(41 * 41 * 35) == 2064, "r3(41^2 35) != 2064");
  o.detail = o.pass ? "both sides 0, r3(58835) = 2064" : o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto r = verify("main4", {{"p", 31}, {"n", 43}});
  o.require(r.pass, "main4(31,43) fails");
  o.require(scalar(r, true) == 96 && scalar(r, false) == 96, "sides are not 96");
  const auto small = gamma0_orbits(31, 43, true), big = gamma0_orbits(31, 172, true);
  o.require(small.count() == 4, "disc -43 orbit count " + std::to_string(small.count()));
  o.require(big.count() == 16, "disc -172 orbit count " + std::to_string(big.count()));
  for (const auto* set : {&small, &big})
    for (const auto& rep : set->representatives) o.require(rep.stabilizer_order == 2, "stabilizer of " + to_string(rep.form) + " is not 2");
  o.require(oracle::r3(43) == 24 && r3(43) == 24, "r3(43) != 24");
  o.require(oracle::r3(43 * 31 * 31) == 744 && r3(43 * 31 * 31) == 744, "r3(43 31^2) != 744");
  o.detail = o.pass ? "both sides 96, orbits 4 and 16, stabilizers 2, r3 24 and 744" : o.detail;
  return o;
}

Outcome criterion3() {
  Outcome o;
  const i64 M = 19;
  const QSeries printed5 = from_terms(M, {{0, 1}, {3, 2}, {7, 6}, {8, 6}, {12, 8}, {15, 6}});
  const QSeries printed7 = from_terms(M, {{0, 1}, {4, 2}, {7, 2}, {8, 4}, {11, 4}, {15, 8}, {16, 6}});

  const QSeries def5 = pw_series(1, 5, 5, M) * Rational(3), def7 = pw_series(1, 7, 7, M) * Rational(2);
  // the classical combinations -12 (H_{1,1} - c H_{1,N}), second sum from n = 1
  QSeries cls5(M), cls7(M);
  for (i64 n = 0; n <= M; ++n) {
    cls5[n] = pw_class_number(1, 1, 1, n) - (n ? Rational(6, 5) * pw_class_number(1, 1, 5, n) : Rational(0));
    cls7[n] = pw_class_number(1, 1, 1, n) - (n ? Rational(8, 7) * pw_class_number(1, 1, 7, n) : Rational(0));
  }
  cls5 *= Rational(-12);
  cls7 *= Rational(-12);

  const auto g5 = genus_contents(5, 5), g7 = genus_contents(7, 7);
  o.require(g5.classes.size() == 1 && g7.classes.size() == 1, "genera are not single-class");
  const QSeries gen5 = weighted_genus_theta(g5, M) * Rational(12), gen7 = weighted_genus_theta(g7, M) * Rational(8);
  const QSeries printed_form5 = oracle_theta({7, 3, 7, 2, -6, 2}, M), printed_form7 = oracle_theta({4, 7, 8, 0, -4, 0}, M);

  o.require(def5 == printed5, "3 H_{5,5} (definition) differs from the printed expansion");
  o.require(def7 == printed7, "2 H_{7,7} (definition) differs from the printed expansion");
  o.require(cls5 == printed5 && cls7 == printed7, "classical combinations differ");
  o.require(gen5 == printed5, "genus theta (N=5) differs");
  o.require(gen7 == printed7, "genus theta (N=7) differs");
  o.require(printed_form5 == printed5 && printed_form7 == printed7, "theta of the printed forms differs");
  o.detail = o.pass ? "definition, classical combination and genus theta agree with both printed heads through q^19" : o.detail;
  return o;
}

struct Criterion4 {
  Outcome literal;
  Outcome corrected;
};

Criterion4 criterion4() {
  Criterion4 c;
  const i64 M = 48;
  const TernaryForm q{3, 15, 15, -14, -2, -2};
  const QSeries theta = oracle_theta(q, M);
  const QSeries printed_theta =
      from_terms(M, {{0, 1}, {3, 1}, {12, 2}, {15, 6}, {16, 6}, {20, 6}, {23, 6}, {27, 2}, {31, 6}, {36, 6}, {44, 6}, {47, 12}, {48, 8}});
  const QSeries printed_f =
      from_terms(55, {{3, 1}, {4, -1}, {11, -1}, {12, -1}, {15, 1}, {16, 2}, {20, 1}, {23, -1}, {27, -1}, {31, -1}, {44, 1}, {55, 1}});
  const QSeries raw_f = u4(unary_theta_scaled(11, 4 * 55) * eta_product({{2, 1}, {22, 1}}, 4 * 55));
  const QSeries h = pw_series(1, 11, 11, M);

  // as printed
  std::vector<i64> bad_theta;
  for (i64 n = 0; n <= M; ++n)
    if (theta[n] != printed_theta[n]) bad_theta.push_back(n);
  c.literal.require(bad_theta.empty(), "theta_Q differs at q^" + (bad_theta.empty() ? std::string() : std::to_string(bad_theta.front())) + " (" +
                                           (bad_theta.empty() ? std::string() : theta[bad_theta.front()].get_str()) + " vs printed " +
                                           (bad_theta.empty() ? std::string() : printed_theta[bad_theta.front()].get_str()) + ")");
  c.literal.require(raw_f == printed_f, "(theta(11t) eta(2t) eta(22t))|U4 is " + raw_f[3].get_str() + " q^3 + ..., printed f is q^3 + ...");
  c.literal.require(theta - h * Rational(6, 5) == printed_f.truncated(M) * Rational(1, 5),
                    "theta_Q - (6/5) H_{11,11} != (1/5) f at q^4 (" + (theta - h * Rational(6, 5))[4].get_str() + " vs -1/5)");

  // corrected: q^3 coefficient 2, f monic, constant 6/5
  for (i64 n = 0; n <= M; ++n)
    if (n != 3) c.corrected.require(theta[n] == printed_theta[n], "theta_Q differs at q^" + std::to_string(n));
  c.corrected.require(theta[3] == 2, "theta_Q at q^3 is not 2");
  c.corrected.require(raw_f * Rational(1, 2) == printed_f, "monic U4 series differs from the printed f");
  c.corrected.require(checks::cusp_form_level44(55) == printed_f, "library f differs from the printed f");
  c.corrected.require(theta - h * Rational(6, 5) == printed_f.truncated(M) * Rational(6, 5), "theta_Q - (6/5) H_{11,11} != (6/5) f");
  c.corrected.require(verify("cusp_p11", {}).pass, "cusp_p11 fails");
  // the two-class form of the same example
  const QSeries q2 = oracle_theta({4, 11, 12, 0, 4, 0}, M);
  const QSeries combo = (theta - h * Rational(6, 5)) * Rational(1, aut_order(q)) + (q2 - h * Rational(6, 5)) * Rational(1, aut_order({4, 11, 12, 0, 4, 0}));
  c.corrected.require(combo == QSeries(M), "two-class relation fails");
  if (c.corrected.pass)
    c.corrected.detail = "12 of 13 theta_Q coefficients match, q^3 is 2; f matches after normalizing; theta_Q - (6/5) H_{11,11} = (6/5) f through q^48";
  return c;
}

Outcome criterion5() {
  Outcome o;
  std::size_t points = 0;
  run_grids(o, {"hurwitz_local_product", "kronecker_hurwitz"}, points);
  for (i64 n = 0; n <= 2000; ++n)
    if (hurwitz_H(n) != oracle::hurwitz(n)) {
      o.require(false, "H(" + std::to_string(n) + ") differs from brute force");
      break;
    }
  if (o.pass) o.detail = std::to_string(points) + " points; H also matches brute-force form counting for n <= 2000";
  return o;
}

Outcome grid_criterion(const std::vector<std::string>& names) {
  Outcome o;
  std::size_t points = 0;
  run_grids(o, names, points);
  if (o.pass) o.detail = std::to_string(points) + " points";
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::size_t points = 0;
  run_grids(o, {"genus_theta"}, points);
  struct Expect {
    i64 N, aniso;
    std::size_t classes;
    Rational mass;
  };
  for (const auto& e : std::vector<Expect>{{5, 5, 1, Rational(1, 12)}, {7, 7, 1, Rational(1, 8)}, {11, 11, 2, Rational(5, 24)},
                                           {35, 5, 3, Rational(1, 3)}, {35, 7, 2, Rational(3, 8)}}) {
    const auto g = genus_contents(e.N, e.aniso);
    const std::string tag = "G(" + std::to_string(e.N) + "," + std::to_string(e.aniso) + ")";
    o.require(g.classes.size() == e.classes, tag + " has " + std::to_string(g.classes.size()) + " classes");
    o.require(g.mass() == e.mass, tag + " mass " + g.mass().get_str());
    o.require(g.mass() == lsz_class_number(e.aniso, e.N / e.aniso, 0) / (1 << (omega(e.N) + 1)), tag + " mass disagrees with n = 0");
  }
  for (i64 N : {5, 7, 11, 15, 21, 35})
    for (i64 d : divisors(N)) {
      if (omega(d) % 2 == 0) continue;
      const auto g = genus_contents(N, d);
      o.require(g.mass() == lsz_class_number(d, N / d, 0) / (1 << (omega(N) + 1)), "mass of G(" + std::to_string(N) + "," + std::to_string(d) + ")");
    }
  if (o.pass) o.detail = std::to_string(points) + " genera through q^50; class counts 1,1,2,3,2; masses 1/12,1/8,5/24,1/3,3/8";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const i64 M = 50;
  const auto a = verify("main_theta", {{"m", 35}, {"N", 35}, {"q35", 5}}, M);
  const auto b = verify("main_theta", {{"m", 35}, {"N", 35}, {"q35", 7}}, M);
  o.require(a.pass && b.pass, "main_theta fails for a q-choice");
  auto t35 = [](const IdentityReport& r) {
    for (const auto& t : r.terms)
      if (t.label == "T_35") return std::get<QSeries>(t.value);
    return QSeries(0);
  };
  o.require(t35(a).truncation() == M && t35(a) == t35(b), "T_35 depends on q");

  // seven printed forms; theta by brute force, |Aut| from the library
  const std::vector<TernaryForm> lhs_pos{{7, 3, 7, 2, -6, 2}}, lhs_neg{{7, 20, 40, 20, 0, 0}, {3, 47, 47, -46, -2, -2}, {12, 12, 35, 0, 0, -4}};
  const std::vector<TernaryForm> rhs_pos{{4, 7, 8, 0, -4, 0}}, rhs_neg{{4, 35, 36, 0, -4, 0}, {11, 15, 39, -10, -6, -10}};
  auto side = [&](const std::vector<TernaryForm>& pos, const std::vector<TernaryForm>& neg) {
    QSeries s(M);
    for (const auto& q : pos) s += oracle_theta(q, M) * Rational(1, aut_order(q));
    for (const auto& q : neg) s -= oracle_theta(q, M) * Rational(1, aut_order(q));
    return s;
  };
  const QSeries left = side(lhs_pos, lhs_neg), right = side(rhs_pos, rhs_neg);
  o.require(left == right, "seven-form relation fails");
  o.require(left == t35(a), "seven-form side differs from T_35");
  auto in_genus = [](const TernaryForm& q, const GenusContents& g) {
    for (const auto& c : g.classes)
      if (is_equivalent(c.form, q)) return true;
    return false;
  };
  o.require(in_genus(lhs_pos[0], genus_contents(5, 5)) && in_genus(rhs_pos[0], genus_contents(7, 7)), "level-20/28 forms misplaced");
  for (const auto& q : lhs_neg) o.require(in_genus(q, genus_contents(35, 5)), to_string(q) + " not in G(35,5)");
  for (const auto& q : rhs_neg) o.require(in_genus(q, genus_contents(35, 7)), to_string(q) + " not in G(35,7)");
  if (o.pass) o.detail = "T_35 identical for q=5 and q=7; seven-form relation holds through q^50";
  return o;
}

Outcome criterion10() {
  Outcome o = grid_criterion({"gauss_general", "cor_4_9", "r3_is_lsz", "gauss_three_squares"});
  for (i64 n = 0; n <= 1000; ++n)
    if (r3(n) != oracle::r3(n)) {
      o.require(false, "r3(" + std::to_string(n) + ") differs from brute force");
      break;
    }
  return o;
}

Outcome criterion11() {
  Outcome o = grid_criterion({"bm4"});
  for (const auto& p : standard_grid("bm4", Scale::desk)) {
    const i64 pp = p.at("p"), n = p.at("n");
    if (weighted_orbit_sum(pp, n) != oracle::gamma0_weighted_p1(pp, n)) {
      o.require(false, "orbit sum differs from the P^1 count at p=" + std::to_string(pp) + " n=" + std::to_string(n));
      break;
    }
  }
  return o;
}

Outcome criterion12() {
  Outcome o;
  std::size_t points = 0;
  run_grids(o, {"basis_dimension"}, points);
  std::string counts;
  for (i64 N : {5, 7, 11, 15, 35, 105}) {
    const auto r = verify("basis_dimension", {{"N", N}});
    const Rational k = std::get<QSeries>(r.lhs)[0];
    o.require(std::get<QSeries>(r.lhs).truncation() >= 2 && k == (1 << omega(N)) - 1, "rank at N=" + std::to_string(N));
    o.require(std::get<QSeries>(r.lhs)[2] == 1, "change of basis not triangular at N=" + std::to_string(N));
    counts += (counts.empty() ? "" : ",") + k.get_str();
  }
  if (o.pass) o.detail = "ranks " + counts + " at truncation 100; triangular change of basis";
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  bool ok = true;
  bool literal4 = false;
  auto report = [&](int id, double limit, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double s = seconds_since(t0);
    if (limit > 0) o.require(s < limit, "runtime over " + std::to_string(static_cast<int>(limit)) + " s");
    std::printf("criterion %2d: %s  %s  [%.2f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    std::fflush(stdout);
    ok = ok && o.pass;
  };

  report(1, 10, criterion1);
  report(2, 60, criterion2);
  report(3, 10, criterion3);
  {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion4 c;
    try {
      c = criterion4();
    } catch (const std::exception& e) {
      c.corrected.require(false, std::string("exception: ") + e.what());
    }
    const double s = seconds_since(t0);
    c.corrected.require(s < 30, "runtime over 30 s");
    std::printf("criterion %2d: %s  %s  [%.2f s]\n", 4, c.literal.pass ? "PASS" : "FAIL",
                c.literal.pass ? "as printed" : ("known failure as printed: " + c.literal.detail).c_str(), s);
    std::printf("    corrected: %s  %s\n", c.corrected.pass ? "PASS" : "FAIL", c.corrected.detail.c_str());
    std::fflush(stdout);
    ok = ok && c.corrected.pass;
    literal4 = c.literal.pass;
  }
  report(5, 0, criterion5);
  report(6, 0, [] { return grid_criterion({"local_factor_relations"}); });
  report(7, 600, [] { return grid_criterion({"pw_to_lsz", "lsz_to_pw", "classical_to_pw", "classical_to_lsz", "ape3"}); });
  report(8, 0, criterion8);
  report(9, 0, criterion9);
  report(10, 0, criterion10);
  report(11, 600, criterion11);
  report(12, 0, criterion12);
  if (!ok)
    std::printf("acceptance: FAILED\n");
  else
    std::printf("acceptance: %s\n", literal4 ? "all criteria pass" : "all criteria pass except the documented known failure (4, as printed)");
  return ok ? 0 : 1;
}
