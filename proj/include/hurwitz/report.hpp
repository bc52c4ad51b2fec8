#pragma once

// Result of evaluating one identity at one parameter point.

#include "hurwitz/qseries.hpp"
#include "hurwitz/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hcn {

// Raised when parameters violate an identity's hypotheses. Never a failed check.
struct HypothesisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Value = std::variant<Rational, QSeries>;

inline bool values_equal(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (const auto* qa = std::get_if<Rational>(&a)) return *qa == std::get<Rational>(b);
  return std::get<QSeries>(a) == std::get<QSeries>(b);
}

struct Term {
  std::string label;
  Value value;
};

struct IdentityReport {
  std::string identity;
  std::map<std::string, i64> params;
  Value lhs;
  Value rhs;
  bool pass = false;
  std::vector<Term> terms;
};

inline IdentityReport make_report(std::string identity, std::map<std::string, i64> params, Value lhs, Value rhs,
                                  std::vector<Term> terms = {}) {
  IdentityReport r{std::move(identity), std::move(params), std::move(lhs), std::move(rhs), false, std::move(terms)};
  r.pass = values_equal(r.lhs, r.rhs);
  return r;
}

}  // namespace hcn
