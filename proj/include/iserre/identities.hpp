#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iserre/qcomb.hpp"
#include "iserre/report.hpp"
#include "iserre/scalar.hpp"

namespace iserre {

struct TArgs {
  int w = 0;
  int u = 0;
  int ell = 0;
};

struct GArgs {
  int w = 0;
  int u = 0;
  int ell = 0;
  int p0 = 0;
  int p1 = 0;
  int p2 = 0;
};

Json to_json(const TArgs& a);
Json to_json(const GArgs& a);

/// Test-only fault injection for the T evaluator.
enum class Fault { None, TSign };
void set_fault(Fault f);
Fault current_fault();

/// The two parity-split double sums of T; T = even - odd.
std::pair<Scalar, Scalar> eval_T_parts(const TArgs& a);
/// Parts of T with an upper argument w = 2k*lambda + w0 and base q^eps;
/// the parity split only sees w0.
std::pair<Scalar, Scalar> eval_T_parts(const UpperArg& w, int u, int ell, QBase base);
/// Throws InvalidArgument when u, ell are negative or both zero.
Scalar eval_T(const TArgs& a);

/// Zero for u < 0.
Scalar eval_G(const GArgs& a);
Scalar eval_G0(int w, int u, int p0, int p1, int p2);
Scalar eval_G00(int w, int u, int p1, int p2);
/// Zero for u < 0.
Scalar eval_H(int u, int p1, int p2);

enum class Rule { Gw1, G11, G21, Gx1, Gk, Godd, Hswap, Hp1, Hp2, G00constw };

const std::vector<Rule>& all_rules();
std::string rule_name(Rule r);
/// Throws InvalidArgument for an unknown name.
Rule parse_rule(const std::string& name);

/// Checks one instance of a recursion. H rules read (u, p1, p2) from `a`;
/// Gk uses `k`. Throws InvalidArgument outside the rule's domain.
Report check_recursion(Rule rule, const GArgs& a, int k = 0);

/// One summand coeff * F(args) of a derivation state.
struct TraceTerm {
  enum Kind { T, G, G0, G00, H };
  Kind kind;
  GArgs args;
  Scalar coeff;

  std::string to_string() const;
};

struct TraceStep {
  std::string rule;
  std::vector<TraceTerm> state;
  Scalar value;
  bool matches = true;
};

struct DerivationTrace {
  std::vector<TraceStep> steps;
  Scalar start_value;
  /// Like terms of the last state cancel syntactically.
  bool cancels = false;
  bool pass = false;

  Json to_json() const;
};

/// Reduces G(w,u,ell;p) with ell >= 1 to a cancelling H-difference,
/// re-evaluating every intermediate state.
DerivationTrace replay_theorem_G(const GArgs& a);
/// Same for T(w,u,ell), through the link to G (ell > 0) or to G00 (ell = 0).
DerivationTrace replay_theorem_T(const TArgs& a);

}  // namespace iserre
