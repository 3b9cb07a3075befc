#include "iserre/identities.hpp"

#include <atomic>
#include <map>
#include <tuple>

#include "iserre/errors.hpp"
#include "iserre/qcomb.hpp"

namespace iserre {

namespace {

std::atomic<Fault> g_fault{Fault::None};

LaurentPoly qb(int n, int d) { return qbinom(n, d).num(); }
LaurentPoly qb2(int n, int d) { return qbinom(n, d, QBase{1, true}).num(); }

bool even(int x) { return (x & 1) == 0; }

// Product of the four binomials, or zero as soon as one vanishes.
LaurentPoly product4(int l, int t, int n1, int r, int n2, int c, int n3, int e) {
  LaurentPoly p = qb(l, t);
  if (p.is_zero()) return p;
  LaurentPoly b = qb(n1, r);
  if (b.is_zero()) return b;
  LaurentPoly b2 = qb2(n2, c);
  if (b2.is_zero()) return b2;
  LaurentPoly b3 = qb2(n3, e);
  if (b3.is_zero()) return b3;
  return p * b * b2 * b3;
}

Json base_args(const GArgs& a) { return to_json(a); }

}  // namespace

Json to_json(const TArgs& a) { return Json{{"w", a.w}, {"u", a.u}, {"ell", a.ell}}; }

Json to_json(const GArgs& a) {
  return Json{{"w", a.w}, {"u", a.u}, {"ell", a.ell}, {"p0", a.p0}, {"p1", a.p1}, {"p2", a.p2}};
}

void set_fault(Fault f) { g_fault = f; }
Fault current_fault() { return g_fault; }

std::pair<Scalar, Scalar> eval_T_parts(const TArgs& a) {
  const int w = a.w, u = a.u, l = a.ell;
  if (u < 0 || l < 0) throw InvalidArgument("T: u and ell must be nonnegative");
  LaurentPoly ev, od;
  for (int c = 0; c <= u; ++c)
    for (int e = 0; c + e <= u; ++e) {
      const int r = u - c - e;
      for (int t = 0; t <= l; ++t) {
        if (even(t + w - r)) {
          const int h = (w + t - r) / 2;
          LaurentPoly p = product4(l, t, w + t - l, r, u - 1 + h, c, h - l, e);
          if (!p.is_zero()) ev += p.shifted({-t * (l + u - 1) + (l + u) * (c - e), 0, 0});
        } else {
          const int h = (w + t - r - 1) / 2;
          LaurentPoly p = product4(l, t, w + t - l, r, u + h, c, h - l, e);
          if (!p.is_zero()) od += p.shifted({-t * (l + u - 1) + (l + u - 1) * (c - e), 0, 0});
        }
      }
    }
  return {Scalar(std::move(ev)), Scalar(std::move(od))};
}

std::pair<Scalar, Scalar> eval_T_parts(const UpperArg& w, int u, int l, QBase base) {
  if (u < 0 || l < 0) throw InvalidArgument("T: u and ell must be nonnegative");
  if (w.lambda_coeff % 2 != 0) throw InvalidArgument("T: symbolic part of w must be even");
  const QBase sq = base.sq();
  const int half = w.lambda_coeff / 2;
  Scalar ev, od;
  for (int c = 0; c <= u; ++c)
    for (int e = 0; c + e <= u; ++e) {
      const int r = u - c - e;
      for (int t = 0; t <= l; ++t) {
        Scalar p = qbinom(l, t, base);
        if (p.is_zero()) continue;
        p *= qbinom(w + (t - l), r, base);
        if (p.is_zero()) continue;
        if (even(t + w.offset - r)) {
          const UpperArg h(half, (w.offset + t - r) / 2);
          p *= qbinom(h + (u - 1), c, sq) * qbinom(h - l, e, sq);
          ev += p * qpower(UpperArg(-t * (l + u - 1) + (l + u) * (c - e)), base);
        } else {
          const UpperArg h(half, (w.offset + t - r - 1) / 2);
          p *= qbinom(h + u, c, sq) * qbinom(h - l, e, sq);
          od += p * qpower(UpperArg(-t * (l + u - 1) + (l + u - 1) * (c - e)), base);
        }
      }
    }
  return {ev, od};
}

Scalar eval_T(const TArgs& a) {
  if (a.u == 0 && a.ell == 0) throw InvalidArgument("T: u and ell not both 0");
  auto [ev, od] = eval_T_parts(a);
  if (current_fault() == Fault::TSign) return ev + od;
  return ev - od;
}

Scalar eval_G(const GArgs& a) {
  const int w = a.w, u = a.u, l = a.ell;
  if (l < 0) throw InvalidArgument("G: ell must be nonnegative");
  if (u < 0) return Scalar();
  LaurentPoly s;
  for (int c = 0; c <= u; ++c)
    for (int e = 0; c + e <= u; ++e) {
      const int r = u - c - e;
      for (int t = 0; t <= l; ++t) {
        if (even(t + w - r)) {
          const int h = (w + t - r) / 2;
          LaurentPoly p = product4(l, t, w + t + a.p0, r, h + a.p1, c, h + a.p2, e);
          if (!p.is_zero())
            s += p.shifted({-t * (l + u - 1) - u * (c + e) + 2 * c + r * a.p0 + 2 * c * a.p1 + 2 * e * a.p2, 0, 0});
        } else {
          const int h = (w + t - r - 1) / 2;
          LaurentPoly p = product4(l, t, w + t + a.p0, r, 1 + h + a.p1, c, h + a.p2, e);
          if (!p.is_zero())
            s -= p.shifted({-t * (l + u - 1) - (u - 1) * (c + e) + r * a.p0 + 2 * c * a.p1 + 2 * e * a.p2, 0, 0});
        }
      }
    }
  s = s.shifted({u * u - w * u + l * u, 0, 0});
  if (!even(w)) s = -s;
  return Scalar(std::move(s));
}

Scalar eval_G0(int w, int u, int p0, int p1, int p2) { return eval_G({w, u, 0, p0, p1, p2}); }
Scalar eval_G00(int w, int u, int p1, int p2) { return eval_G({w, u, 0, 0, p1, p2}); }

Scalar eval_H(int u, int p1, int p2) {
  if (u < 0) return Scalar();
  LaurentPoly s;
  for (int c = 0; c <= u; ++c) {
    const int e = u - c;
    LaurentPoly b1 = qb2(p1, c);
    if (b1.is_zero()) continue;
    LaurentPoly b2 = qb2(p2, e);
    if (b2.is_zero()) continue;
    s += (b1 * b2).shifted({2 * c + 2 * c * p1 + 2 * e * p2, 0, 0});
  }
  return Scalar(std::move(s));
}

const std::vector<Rule>& all_rules() {
  static const std::vector<Rule> rules{Rule::Gw1, Rule::G11,   Rule::G21, Rule::Gx1, Rule::Gk,
                                       Rule::Godd, Rule::Hswap, Rule::Hp1, Rule::Hp2, Rule::G00constw};
  return rules;
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Gw1: return "Gw+1";
    case Rule::G11: return "G1+1";
    case Rule::G21: return "G2+1";
    case Rule::Gx1: return "Gx+1";
    case Rule::Gk: return "Gk";
    case Rule::Godd: return "Godd";
    case Rule::Hswap: return "Hswap";
    case Rule::Hp1: return "Hp1";
    case Rule::Hp2: return "Hp2";
    case Rule::G00constw: return "G00constw";
  }
  return "?";
}

Rule parse_rule(const std::string& name) {
  for (Rule r : all_rules())
    if (rule_name(r) == name) return r;
  throw InvalidArgument("unknown rule '" + name + "'");
}

Report check_recursion(Rule rule, const GArgs& a, int k) {
  if (a.u < 0 || a.ell < 0) throw InvalidArgument(rule_name(rule) + ": u and ell must be nonnegative");
  const int w = a.w, u = a.u, l = a.ell;
  auto G = [](int w_, int u_, int l_, int p0, int p1, int p2) { return eval_G({w_, u_, l_, p0, p1, p2}); };
  auto Q = [](int e) { return Scalar::q_pow(e); };
  Scalar lhs, rhs;
  Json args;
  switch (rule) {
    case Rule::Gw1:
      lhs = G(w + 1, u, l, a.p0, a.p1, a.p2);
      rhs = Q(-2 * u) * G(w, u, l, a.p0, a.p2, a.p1 + 1) - Q(2 * a.p0 + l) * G(w, u - 1, l, a.p0, a.p1, a.p2);
      args = base_args(a);
      break;
    case Rule::G11:
      lhs = G(w, u, l, a.p0, a.p1 + 1, a.p2);
      rhs = G(w, u, l, a.p0, a.p1, a.p2) + Q(4 * a.p1 + l + 4) * G(w, u - 1, l, a.p0, a.p1, a.p2);
      args = base_args(a);
      break;
    case Rule::G21:
      lhs = G(w, u, l, a.p0, a.p1, a.p2 + 1);
      rhs = G(w, u, l, a.p0, a.p1, a.p2) + Q(4 * a.p2 + l + 2) * G(w, u - 1, l, a.p0, a.p1, a.p2);
      args = base_args(a);
      break;
    case Rule::Gx1:
      lhs = G(w, u, l + 1, a.p0, a.p1, a.p2);
      rhs = Q(u) * G(w, u, l, a.p0, a.p1, a.p2) - Q(u - 2 * l) * G(w + 1, u, l, a.p0, a.p1, a.p2);
      args = base_args(a);
      break;
    case Rule::Gk:
      lhs = G(w, u, l, a.p0, a.p1, a.p2);
      rhs = Q(4 * k * u) * G(w + 2 * k, u, l, a.p0 - 2 * k, a.p1 - k, a.p2 - k);
      args = base_args(a);
      args["k"] = k;
      break;
    case Rule::Godd:
      lhs = G(w + 1, u, l, a.p0, a.p1, a.p2);
      rhs = Q(-2 * u) * G(w, u, l, a.p0 + 1, a.p2, a.p1 + 1);
      args = base_args(a);
      break;
    case Rule::Hswap:
    case Rule::Hp1:
    case Rule::Hp2:
      if (u <= 0) throw InvalidArgument(rule_name(rule) + ": requires u > 0");
      args = Json{{"u", u}, {"p1", a.p1}, {"p2", a.p2}};
      if (rule == Rule::Hswap) {
        lhs = eval_H(u, a.p2, a.p1 + 1);
        rhs = Q(2 * u) * (eval_H(u, a.p1, a.p2) + eval_H(u - 1, a.p1, a.p2));
      } else if (rule == Rule::Hp1) {
        lhs = eval_H(u, a.p1 + 1, a.p2);
        rhs = eval_H(u, a.p1, a.p2) + Q(4 * (a.p1 + 1)) * eval_H(u - 1, a.p1, a.p2);
      } else {
        lhs = eval_H(u, a.p1, a.p2 + 1);
        rhs = eval_H(u, a.p1, a.p2) + Q(4 * a.p2 + 2) * eval_H(u - 1, a.p1, a.p2);
      }
      break;
    case Rule::G00constw:
      lhs = eval_G00(w, u, a.p1, a.p2);
      rhs = eval_H(u, a.p1, a.p2);
      args = Json{{"w", w}, {"u", u}, {"p1", a.p1}, {"p2", a.p2}};
      break;
  }
  Scalar diff = lhs - rhs;
  if (diff.is_zero()) return Report::ok(rule_name(rule), std::move(args));
  return Report::fail(rule_name(rule), std::move(args), diff.to_string());
}

// ---------------------------------------------------------------------------
// Proof replay

std::string TraceTerm::to_string() const {
  const GArgs& a = args;
  std::string f;
  auto s = [](int x) { return std::to_string(x); };
  switch (kind) {
    case T: f = "T(" + s(a.w) + "," + s(a.u) + "," + s(a.ell) + ")"; break;
    case G:
      f = "G(" + s(a.w) + "," + s(a.u) + "," + s(a.ell) + ";" + s(a.p0) + "," + s(a.p1) + "," + s(a.p2) + ")";
      break;
    case G0: f = "G0(" + s(a.w) + "," + s(a.u) + ";" + s(a.p0) + "," + s(a.p1) + "," + s(a.p2) + ")"; break;
    case G00: f = "G00(" + s(a.w) + "," + s(a.u) + ";" + s(a.p1) + "," + s(a.p2) + ")"; break;
    case H: f = "H(" + s(a.u) + ";" + s(a.p1) + "," + s(a.p2) + ")"; break;
  }
  if (coeff.is_one()) return f;
  return "(" + coeff.to_string() + ")*" + f;
}

namespace {

Scalar eval_term(const TraceTerm& t) {
  const GArgs& a = t.args;
  switch (t.kind) {
    case TraceTerm::T: return eval_T({a.w, a.u, a.ell});
    case TraceTerm::G: return eval_G(a);
    case TraceTerm::G0: return eval_G0(a.w, a.u, a.p0, a.p1, a.p2);
    case TraceTerm::G00: return eval_G00(a.w, a.u, a.p1, a.p2);
    case TraceTerm::H: return eval_H(a.u, a.p1, a.p2);
  }
  return Scalar();
}

// Merges like terms and drops zero coefficients, keeping first-seen order.
std::vector<TraceTerm> collect(const std::vector<TraceTerm>& in) {
  using Key = std::tuple<int, int, int, int, int, int, int>;
  std::map<Key, std::size_t> index;
  std::vector<TraceTerm> out;
  for (const auto& t : in) {
    const GArgs& a = t.args;
    Key key{t.kind, a.w, a.u, a.ell, a.p0, a.p1, a.p2};
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.size());
      out.push_back(t);
    } else {
      out[it->second].coeff += t.coeff;
    }
  }
  std::vector<TraceTerm> nz;
  for (auto& t : out)
    if (!t.coeff.is_zero()) nz.push_back(std::move(t));
  return nz;
}

class Replayer {
 public:
  explicit Replayer(DerivationTrace& trace) : trace_(trace) {}

  void push(std::string rule, std::vector<TraceTerm> state) {
    Scalar v;
    for (const auto& t : state) v += t.coeff * eval_term(t);
    if (trace_.steps.empty()) trace_.start_value = v;
    bool ok = v == trace_.start_value;
    trace_.steps.push_back({std::move(rule), std::move(state), std::move(v), ok});
  }

  const std::vector<TraceTerm>& state() const { return trace_.steps.back().state; }

  // G-terms with ell >= 1 down to G0-terms, then Case I or II, then H.
  void reduce_G() {
    for (;;) {
      bool any = false;
      for (const auto& t : state()) any |= t.kind == TraceTerm::G && t.args.ell > 1;
      if (!any) break;
      push("Gx+1", collect(lower_ell(state())));
    }
    push("Gx+1", collect(lower_ell(state())));
    if (state().empty()) return;
    const int p0 = state().front().args.p0;
    std::vector<TraceTerm> next;
    if (even(p0)) {
      for (const auto& t : state()) {
        const GArgs& a = t.args;
        const int k = p0 / 2;
        next.push_back({TraceTerm::G00, {a.w + p0, a.u, 0, 0, a.p1 - k, a.p2 - k}, t.coeff * Scalar::q_pow(2 * p0 * a.u)});
      }
      push("Gk", collect(next));
    } else {
      for (const auto& t : state()) {
        const GArgs& a = t.args;
        const int k = (p0 - 1) / 2;
        next.push_back({TraceTerm::G0, {a.w + p0 - 1, a.u, 0, 1, a.p1 - k, a.p2 - k},
                        t.coeff * Scalar::q_pow(2 * (p0 - 1) * a.u)});
      }
      push("Gk", collect(next));
      next.clear();
      for (const auto& t : state()) {
        const GArgs& a = t.args;
        next.push_back({TraceTerm::G00, {a.w + 1, a.u, 0, 0, a.p2 - 1, a.p1}, t.coeff * Scalar::q_pow(2 * a.u)});
      }
      push("Godd", collect(next));
    }
    to_H();
  }

  // G00 terms to H; the result is left uncollected so the cancellation shows.
  void to_H() {
    std::vector<TraceTerm> next;
    for (const auto& t : state()) {
      const GArgs& a = t.args;
      next.push_back({TraceTerm::H, {0, a.u, 0, 0, a.p1, a.p2}, t.coeff});
    }
    push("G00constw", std::move(next));
  }

 private:
  // One application of the ell-recursion to every G-term with ell >= 1.
  static std::vector<TraceTerm> lower_ell(const std::vector<TraceTerm>& in) {
    std::vector<TraceTerm> out;
    for (const auto& t : in) {
      const GArgs& a = t.args;
      if (t.kind != TraceTerm::G || a.ell < 1) {
        out.push_back(t);
        continue;
      }
      const int l = a.ell - 1;
      const auto kind = l == 0 ? TraceTerm::G0 : TraceTerm::G;
      out.push_back({kind, {a.w, a.u, l, a.p0, a.p1, a.p2}, t.coeff * Scalar::q_pow(a.u)});
      out.push_back({kind, {a.w + 1, a.u, l, a.p0, a.p1, a.p2}, -(t.coeff * Scalar::q_pow(a.u - 2 * l))});
    }
    return out;
  }

  DerivationTrace& trace_;
};

void finish(DerivationTrace& tr) {
  bool ok = true;
  for (const auto& s : tr.steps) ok &= s.matches;
  const auto& last = tr.steps.back();
  tr.cancels = collect(last.state).empty();
  tr.pass = ok && tr.cancels && last.value.is_zero();
}

}  // namespace

DerivationTrace replay_theorem_G(const GArgs& a) {
  if (a.ell < 1 || a.u < 0) throw InvalidArgument("replay: requires ell >= 1 and u >= 0");
  DerivationTrace tr;
  Replayer rp(tr);
  rp.push("start", {{TraceTerm::G, a, Scalar(1)}});
  rp.reduce_G();
  finish(tr);
  return tr;
}

DerivationTrace replay_theorem_T(const TArgs& t) {
  if (t.u < 0 || t.ell < 0 || (t.u == 0 && t.ell == 0)) throw InvalidArgument("replay: invalid T arguments");
  DerivationTrace tr;
  Replayer rp(tr);
  rp.push("start", {{TraceTerm::T, {t.w, t.u, t.ell, 0, 0, 0}, Scalar(1)}});
  Scalar c = Scalar::q_pow(t.w * t.u - t.u * t.u);
  if (!even(t.w)) c = -c;
  if (t.ell > 0) {
    rp.push("T=G", {{TraceTerm::G, {t.w, t.u, t.ell, -t.ell, t.u - 1, -t.ell}, c}});
    rp.reduce_G();
  } else {
    rp.push("T=G", {{TraceTerm::G00, {t.w, t.u, 0, 0, t.u - 1, 0}, c}});
    rp.to_H();
    // H(u;p1,0) = q^(2u+2u p1) [p1, u]_{q^2}, which vanishes at p1 = u - 1.
    rp.push("closed form", {});
  }
  finish(tr);
  return tr;
}

Json DerivationTrace::to_json() const {
  Json steps_json = Json::array();
  for (const auto& s : steps) {
    std::string expr;
    for (const auto& t : s.state) expr += (expr.empty() ? "" : " + ") + t.to_string();
    steps_json.push_back(
        Json{{"rule", s.rule}, {"state", expr.empty() ? "0" : expr}, {"value", s.value.to_string()}, {"matches", s.matches}});
  }
  return Json{{"steps", steps_json}, {"cancels", cancels}, {"pass", pass}};
}

}  // namespace iserre
