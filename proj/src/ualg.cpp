#include "iserre/ualg.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "iserre/errors.hpp"
#include "iserre/identities.hpp"

namespace iserre {

namespace {

std::atomic<int> g_degree_cap{64};

bool is_even(int x) { return (x & 1) == 0; }
int sign_of(int n) { return is_even(n) ? 1 : -1; }
int delta(Parity p) { return p == Parity::Odd ? 1 : 0; }

void check_cap(const NormalMonomial& m) {
  if (m.degree() > g_degree_cap.load())
    throw DegreeCapExceeded("monomial degree " + std::to_string(m.degree()) + " exceeds cap " +
                            std::to_string(g_degree_cap.load()));
}

std::string weight_text(const StarWeight& w) {
  std::string s = "1*_{2L";
  const int k = w.shift();
  if (k > 0) s += "+" + std::to_string(k);
  if (k < 0) s += std::to_string(k);
  return s + "}";
}

}  // namespace

void CartanData::validate() const {
  if (eps1 < 1 || eps2 < 1) throw InvalidParams("symmetrizer entries must be positive");
  if (a12 > 0 || a21 > 0) throw InvalidParams("off-diagonal Cartan entries must be nonpositive");
  if ((a12 == 0) != (a21 == 0)) throw InvalidParams("a12 = 0 must coincide with a21 = 0");
  if (eps1 * a12 != eps2 * a21) throw InvalidParams("Cartan matrix is not symmetrized by (eps1, eps2)");
}

CartanData CartanData::from_a12(int a12) {
  CartanData cd{1, 1, a12, a12};
  cd.validate();
  return cd;
}

std::string to_string(Parity p) { return p == Parity::Even ? "0" : "1"; }

std::string NormalMonomial::to_string() const {
  std::string s;
  if (a > 0) s += "E1^(" + std::to_string(a) + ")";
  if (b > 0) s += "F1^(" + std::to_string(b) + ")";
  if (hasF2) s += "F2";
  if (c > 0) s += "F1^(" + std::to_string(c) + ")";
  return s + weight_text(weight);
}

int left_offset(const NormalMonomial& m, const CartanData& cd) {
  return m.weight.offset + 2 * m.a - 2 * m.b - 2 * m.c - (m.hasF2 ? cd.a12 : 0);
}

StarWeight left_weight(const NormalMonomial& m, const CartanData& cd) {
  return {m.weight.parity, left_offset(m, cd)};
}

Scalar q1_weight_power(const CartanData& cd, const StarWeight& w, int sign) {
  return qpower(UpperArg(2 * sign, sign * w.shift()), cd.q1());
}

StratumElement StratumElement::unit(const StarWeight& w) {
  return monomial(NormalMonomial{0, 0, false, 0, w});
}

StratumElement StratumElement::monomial(const NormalMonomial& m, Scalar coeff) {
  StratumElement x;
  x.add(m, coeff);
  return x;
}

Scalar StratumElement::coeff(const NormalMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar() : it->second;
}

void StratumElement::add(const NormalMonomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

StratumElement& StratumElement::operator+=(const StratumElement& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

StratumElement& StratumElement::operator-=(const StratumElement& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

StratumElement& StratumElement::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

std::string StratumElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")*" + m.to_string();
  }
  return s;
}

void set_degree_cap(int cap) {
  if (cap < 1) throw InvalidArgument("degree cap must be positive");
  g_degree_cap = cap;
}

int degree_cap() { return g_degree_cap.load(); }

StratumElement act_E1(const CartanData& cd, int k, const StratumElement& x) {
  if (k < 0) throw InvalidArgument("negative divided power");
  if (k == 0) return x;
  StratumElement out;
  for (const auto& [m, c] : x.terms()) {
    NormalMonomial n = m;
    n.a += k;
    check_cap(n);
    out.add(n, c * qbinom(n.a, k, cd.q1()));
  }
  return out;
}

StratumElement act_F1(const CartanData& cd, int k, const StratumElement& x) {
  if (k < 0) throw InvalidArgument("negative divided power");
  if (k == 0) return x;
  StratumElement out;
  for (const auto& [m, c] : x.terms()) {
    // weight right of E1^(a): 2 lambda + mu
    const int mu = m.weight.offset - 2 * m.b - 2 * m.c - (m.hasF2 ? cd.a12 : 0) - delta(m.weight.parity);
    const UpperArg top(-2, k - m.a - mu);
    for (int j = 0; j <= std::min(k, m.a); ++j) {
      NormalMonomial n{m.a - j, m.b + k - j, m.hasF2, m.c, m.weight};
      check_cap(n);
      Scalar f = qbinom(top, j, cd.q1());
      if (f.is_zero()) continue;
      out.add(n, c * f * qbinom(n.b, k - j, cd.q1()));
    }
  }
  return out;
}

StratumElement act_F2(const CartanData& cd, const StratumElement& x, bool reduce) {
  StratumElement out;
  for (const auto& [m, c] : x.terms()) {
    if (m.hasF2) throw InvalidArgument("act_F2: element already contains F2");
    NormalMonomial n{m.a, 0, true, m.b, m.weight};
    check_cap(n);
    out.add(n, c);
  }
  return reduce ? reduce_qserre(cd, out) : out;
}

StratumElement reduce_qserre(const CartanData& cd, const StratumElement& x) {
  const int M = cd.serre_length();
  StratumElement cur = x;
  for (;;) {
    int top = -1;
    for (const auto& [m, c] : cur.terms())
      if (m.hasF2 && m.c >= M) top = std::max(top, m.c);
    if (top < 0) return cur;
    // F2 F^(c) = -(1/[c M]) sum_{n=1}^{M} (-1)^n [c-n M-n] F^(n) F2 F^(c-n)
    const Scalar inv = qbinom(top, M, cd.q1()).inv();
    StratumElement next;
    for (const auto& [m, c] : cur.terms()) {
      if (!m.hasF2 || m.c != top) {
        next.add(m, c);
        continue;
      }
      for (int n = 1; n <= M; ++n) {
        NormalMonomial r{m.a, m.b + n, true, m.c - n, m.weight};
        Scalar f = c * inv * qbinom(top - n, M - n, cd.q1()) * qbinom(r.b, n, cd.q1());
        next.add(r, sign_of(n + 1) * f);
      }
    }
    cur = std::move(next);
  }
}

StratumElement act_B1(const CartanData& cd, const StratumElement& x) {
  StratumElement out = act_F1(cd, 1, x);
  const Scalar qinv = qpower(UpperArg(-1), cd.q1());
  for (const auto& [m, c] : x.terms()) {
    Scalar f = c * qinv * q1_weight_power(cd, left_weight(m, cd), -1);
    out += act_E1(cd, 1, StratumElement::monomial(m, f));
  }
  return out;
}

StratumElement apply_idp(const CartanData& cd, int n, Parity parity, const StratumElement& x) {
  if (n < 0) throw InvalidArgument("negative idivided power");
  if (n == 0) return x;
  for (const auto& [m, c] : x.terms())
    if (left_weight(m, cd).value_parity() != parity)
      throw ParityMismatch("idivided power of parity " + to_string(parity) + " on weight " + m.to_string());
  StratumElement y = x;
  for (int j = 1; j <= n / 2; ++j) {
    const int k = parity == Parity::Odd ? 2 * j - 1 : (n % 2 == 1 ? 2 * j : 2 * j - 2);
    const Scalar sq = pow(qint(k, cd.q1()), 2);
    StratumElement b2 = act_B1(cd, act_B1(cd, y));
    if (!sq.is_zero()) b2 -= sq * y;
    y = std::move(b2);
  }
  if (n % 2 == 1) y = act_B1(cd, y);
  return y *= qfact(n, cd.q1()).inv();
}

StratumElement idp_engine(const CartanData& cd, int n, Parity parity, const StarWeight& w) {
  if (n > 0 && w.value_parity() != parity)
    throw ParityMismatch("idivided power of parity " + to_string(parity) + " on " + weight_text(w));
  return apply_idp(cd, n, parity, StratumElement::unit(w));
}

StratumElement expand_idp_closed(const CartanData& cd, int n, Parity parity, const StarWeight& w) {
  if (n < 0) throw InvalidArgument("negative idivided power");
  if (n == 0) return StratumElement::unit(w);
  if (w.value_parity() != parity)
    throw ParityMismatch("idivided power of parity " + to_string(parity) + " on " + weight_text(w));
  // the weight is 2 lambda' (parity 0) or 2 lambda' - 1 (parity 1), lambda' = lambda + h
  const int h = parity == Parity::Even ? w.shift() / 2 : (w.shift() + 1) / 2;
  const bool odd_weight = parity == Parity::Odd;
  const int m = odd_weight ? n / 2 : (n + 1) / 2;
  // exponent 2(a+c)(m-a-lambda') - 2ac + extra(a) - binom(2c+1 or 2c, 2)
  int extra_a = 0, bin_shift = 0;
  if (!odd_weight && n % 2 == 1) extra_a = -1, bin_shift = -1;
  if (odd_weight && n % 2 == 0) extra_a = 1;
  if (odd_weight && n % 2 == 1) extra_a = 2, bin_shift = 1;
  StratumElement out;
  for (int c = 0; 2 * c <= n; ++c)
    for (int a = 0; a <= n - 2 * c; ++a) {
      const int cc = odd_weight ? c * (2 * c - 1) : c * (2 * c + 1);
      const UpperArg e(-2 * (a + c), 2 * (a + c) * (m - a - h) - 2 * a * c + extra_a * a - cc);
      Scalar f = qbinom(UpperArg(-1, m - c - a - h + bin_shift), c, cd.q1sq());
      if (f.is_zero()) continue;
      NormalMonomial mono{a, n - 2 * c - a, false, 0, w};
      check_cap(mono);
      out.add(mono, f * qpower(e, cd.q1()));
    }
  return out;
}

std::string to_string(SerreCase c) {
  switch (c) {
    case SerreCase::EE: return "EE";
    case SerreCase::OO: return "OO";
    case SerreCase::OE: return "OE";
    case SerreCase::EO: return "EO";
  }
  return "?";
}

SerreCase parse_case(const std::string& s) {
  for (SerreCase c : {SerreCase::EE, SerreCase::OO, SerreCase::OE, SerreCase::EO})
    if (to_string(c) == s) return c;
  throw InvalidArgument("unknown case '" + s + "'");
}

std::vector<SerreCase> cases_for(int a12) {
  if (is_even(a12)) return {SerreCase::EE, SerreCase::OO};
  return {SerreCase::OE, SerreCase::EO};
}

SerreSetup serre_setup(const CartanData& cd, SerreCase c) {
  const bool even_case = c == SerreCase::EE || c == SerreCase::OO;
  if (even_case != is_even(cd.a12))
    throw InvalidArgument("case " + to_string(c) + " needs " + (even_case ? "even" : "odd") + " -a12, got " +
                          std::to_string(cd.a12));
  SerreSetup s;
  s.length = cd.serre_length();
  s.m = even_case ? -cd.a12 / 2 : (1 - cd.a12) / 2;
  switch (c) {
    case SerreCase::EE: s.left = Parity::Even, s.right = Parity::Even, s.weight = {Parity::Even, 0}; break;
    case SerreCase::OO: s.left = Parity::Odd, s.right = Parity::Odd, s.weight = {Parity::Odd, 0}; break;
    case SerreCase::OE: s.left = Parity::Odd, s.right = Parity::Even, s.weight = {Parity::Even, 0}; break;
    case SerreCase::EO: s.left = Parity::Even, s.right = Parity::Odd, s.weight = {Parity::Odd, 0}; break;
  }
  return s;
}

StratumElement serre_element(const CartanData& cd, SerreCase c, bool reduce, NSelect which) {
  const SerreSetup s = serre_setup(cd, c);
  StratumElement out;
  for (int n = 0; n <= s.length; ++n) {
    if (which == NSelect::Even && !is_even(n)) continue;
    if (which == NSelect::Odd && is_even(n)) continue;
    StratumElement right = act_F2(cd, idp_engine(cd, s.length - n, s.right, s.weight), false);
    StratumElement term = apply_idp(cd, n, s.left, right);
    if (which == NSelect::All && !is_even(n)) out -= term;
    else out += term;
  }
  return reduce ? reduce_qserre(cd, out) : out;
}

Report iserre_check(const CartanData& cd, SerreCase c) {
  Json args{{"a12", cd.a12}, {"a21", cd.a21}, {"eps1", cd.eps1}, {"eps2", cd.eps2}, {"case", to_string(c)}};
  StratumElement x = serre_element(cd, c, true);
  if (x.is_zero()) return Report::ok("iserre", args);
  return Report::fail("iserre", args, x.to_string());
}

std::pair<Scalar, Scalar> extract_S_parts(SerreCase variant, int y, int u, int ell, int m, QBase q1) {
  if (y < 0 || u < 0 || ell < 0 || u + ell == 0) throw InvalidArgument("S needs y, u, ell >= 0 and u + ell > 0");
  const QBase q2 = q1.sq();
  const int l = ell;
  // per variant: upper bound of odd n, constant in the r-binomial, and for
  // each n-parity the q-exponent, the c-binomial and e-binomial constants
  struct Half {
    bool plus_y;     // (u+y-n) vs -(n+u+y)
    bool ce;         // adds c - e
    int cshift;      // c-binomial: m - lambda - 2u - ell - y + c + cshift + n'
    int eshift;      // e-binomial: m - lambda - 2ell - y - 3u + eshift + n' + c
  };
  int nmax_odd = 2 * m + 1, rconst = 2 * m + 2;
  Half ev{true, true, 0, 1}, od{true, false, 0, 0};
  switch (variant) {
    case SerreCase::EE: break;
    case SerreCase::OO:
      rconst = 2 * m + 3;
      ev = {true, false, 1, 1};
      od = {true, true, 0, 1};
      break;
    case SerreCase::OE:
      nmax_odd = 2 * m;
      rconst = 2 * m + 1;
      ev = {false, false, 0, 0};
      od = {false, true, -1, 0};
      break;
    case SerreCase::EO:
      nmax_odd = 2 * m;
      ev = {false, true, 0, 1};
      od = {false, false, 0, 0};
      break;
  }
  Scalar parts[2];
  for (int n = 0; n <= nmax_odd; ++n) {
    const bool odd = !is_even(n);
    if (!odd && n > 2 * m) continue;
    const Half& hf = odd ? od : ev;
    const int nh = odd ? (n + 1) / 2 : n / 2;
    for (int c = 0; c <= u; ++c)
      for (int e = 0; c + e <= u; ++e) {
        const int r = u - c - e;
        Scalar p = qbinom(l, -u - y - e + c + n, q1);
        if (p.is_zero()) continue;
        p *= qbinom(UpperArg(-2, rconst - 5 * u - 3 * l - 2 * y - e + c + n), r, q1);
        if (p.is_zero()) continue;
        p *= qbinom(UpperArg(-1, m - 2 * u - l - y + c + hf.cshift + nh), c, q2);
        if (p.is_zero()) continue;
        p *= qbinom(UpperArg(-1, m - 2 * l - y - 3 * u + hf.eshift + nh + c), e, q2);
        if (p.is_zero()) continue;
        int ex = hf.plus_y ? (u + y - n) * (l + u - 1) : -(n + u + y) * (l + u - 1);
        if (hf.ce) ex += c - e;
        parts[odd ? 1 : 0] += p * qpower(UpperArg(ex), q1);
      }
  }
  return {parts[0], parts[1]};
}

Scalar extract_S(SerreCase variant, int y, int u, int ell, int m, QBase q1) {
  auto [ev, od] = extract_S_parts(variant, y, u, ell, m, q1);
  return ev - od;
}

Scalar bridge_prefactor(SerreCase variant, int y, int u, int ell, int m, QBase q1) {
  int x = 2 * m + 1;
  if (variant == SerreCase::OO) x = 2 * m + 2;
  if (variant == SerreCase::OE) x = 2 * m;
  const int k = ell + u;
  return qpower(UpperArg(-2 * k, k * (x - 2 * ell - 3 * u - y)), q1);
}

Suite coefficient_bridge_check(const CartanData& cd, SerreCase c) {
  const SerreSetup s = serre_setup(cd, c);
  const QBase q1 = cd.q1();
  const StratumElement halves[2] = {serre_element(cd, c, false, NSelect::Even),
                                    serre_element(cd, c, false, NSelect::Odd)};
  Json base{{"a12", cd.a12}, {"eps1", cd.eps1}, {"case", to_string(c)}};
  Suite suite;

  // every engine monomial must sit in the family E^(ell) F^(y) F2 F^(L-ell-y-2u)
  std::vector<std::string> stray;
  for (const auto& h : halves)
    for (const auto& [mono, coef] : h.terms()) {
      const int rest = s.length - mono.a - mono.b - mono.c;
      if (!mono.hasF2 || mono.weight != s.weight || rest < 0 || !is_even(rest)) stray.push_back(mono.to_string());
    }
  Json fa = base;
  fa["check"] = "family";
  suite.add(stray.empty() ? Report::ok("bridge", fa) : Report::fail("bridge", fa, stray.front()));

  // residue u = ell = 0
  {
    std::string bad;
    for (int y = 0; y <= s.length; ++y) {
      NormalMonomial mono{0, y, true, s.length - y, s.weight};
      const Scalar got = halves[0].coeff(mono) - halves[1].coeff(mono);
      if (got != Scalar(sign_of(y))) {
        bad = mono.to_string() + ": " + got.to_string();
        break;
      }
    }
    Json ra = base;
    ra["check"] = "residue";
    suite.add(bad.empty() ? Report::ok("bridge", ra) : Report::fail("bridge", ra, bad));
  }

  for (int ell = 0; ell <= s.length; ++ell)
    for (int u = 0; ell + 2 * u <= s.length; ++u)
      for (int y = 0; ell + y + 2 * u <= s.length; ++y) {
        if (u + ell == 0) continue;
        Json args = base;
        args["y"] = y, args["u"] = u, args["ell"] = ell;
        NormalMonomial mono{ell, y, true, s.length - ell - y - 2 * u, s.weight};
        const Scalar pre = bridge_prefactor(c, y, u, ell, s.m, q1);
        auto [se, so] = extract_S_parts(c, y, u, ell, s.m, q1);
        std::string bad;
        const bool split = c == SerreCase::EE || c == SerreCase::OO;
        if (halves[0].coeff(mono) - halves[1].coeff(mono) != pre * (se - so))
          bad = "coefficient differs at " + mono.to_string();
        else if (split && halves[0].coeff(mono) != pre * se)
          bad = "even-n half differs at " + mono.to_string();
        else if (split && halves[1].coeff(mono) != pre * so)
          bad = "odd-n half differs at " + mono.to_string();
        if (bad.empty()) {
          // S against T with w = X - 2 lambda - 2 ell - 4 u - y
          int x = 2 * s.m + 2;
          if (c == SerreCase::OO) x = 2 * s.m + 3;
          if (c == SerreCase::OE) x = 2 * s.m + 1;
          auto [te, to] = eval_T_parts(UpperArg(-2, x - 2 * ell - 4 * u - y), u, ell, q1);
          bool ok = true;
          switch (c) {
            case SerreCase::EE: ok = se == te && so == to; break;
            case SerreCase::OO: ok = se == to && so == te; break;
            case SerreCase::OE: ok = se - so == to - te; break;
            case SerreCase::EO: {
              auto [pe, po] = extract_S_parts(SerreCase::EE, y, u, ell, s.m, q1);
              const Scalar tw = qpower(UpperArg(-(2 * u + 2 * y) * (ell + u - 1)), q1);
              ok = se == tw * pe && so == tw * po && pe == te && po == to;
              break;
            }
          }
          if (!ok) bad = "S does not match T at " + mono.to_string();
        }
        suite.add(bad.empty() ? Report::ok("bridge", args) : Report::fail("bridge", args, bad));
      }
  return suite;
}

StratumElement specialize_lambda(const StratumElement& x, int lambda0) {
  StratumElement out;
  for (const auto& [m, c] : x.terms()) {
    NormalMonomial n = m;
    n.weight.offset += 2 * lambda0;
    out.add(n, c.substitute_lambda(lambda0));
  }
  return out;
}

namespace {

// Concrete weight value v in the lambda = 0 frame.
StarWeight concrete_weight(int v) { return is_even(v) ? StarWeight{Parity::Even, v} : StarWeight{Parity::Odd, v + 1}; }

StratumElement frame0(const StratumElement& x) { return specialize_lambda(x, 0); }

}  // namespace

StratumElement varpi_concrete(const CartanData& cd, const StratumElement& x) {
  const Scalar qinv = qpower(UpperArg(-1), cd.q1());
  StratumElement out;
  for (const auto& [m, c] : x.terms()) {
    if (m.hasF2) throw InvalidArgument("varpi: F2-free elements only");
    if (c.depends_on(1)) throw InvalidArgument("varpi: coefficients must be free of L");
    StratumElement y = StratumElement::unit(concrete_weight(-m.weight.shift()));
    // F1 -> q1^-1 E1 K1^-1, then E1 -> q1^-1 F1 K1
    for (int i = 0; i < m.b; ++i) {
      StratumElement z;
      for (const auto& [n, k] : y.terms())
        z += act_E1(cd, 1, StratumElement::monomial(n, k * qinv * q1_weight_power(cd, left_weight(n, cd), -1)));
      y = frame0(z);
    }
    for (int i = 0; i < m.a; ++i) {
      StratumElement z;
      for (const auto& [n, k] : y.terms())
        z += act_F1(cd, 1, StratumElement::monomial(n, k * qinv * q1_weight_power(cd, left_weight(n, cd), 1)));
      y = frame0(z);
    }
    y *= (qfact(m.a, cd.q1()) * qfact(m.b, cd.q1())).inv();
    out += c.bar() * y;
  }
  return out;
}

Suite varpi_check_rank1(int max_power, const CartanData& cd) {
  Suite suite;
  auto row = [&](const std::string& what, Json args, const StratumElement& lhs, const StratumElement& rhs) {
    args["check"] = what;
    if (lhs == rhs) suite.add(Report::ok("varpi_rank1", args));
    else suite.add(Report::fail("varpi_rank1", args, (lhs - rhs).to_string()));
  };
  for (int lam = -3; lam <= 3; ++lam)
    for (Parity p : {Parity::Even, Parity::Odd}) {
      const StarWeight w{p, 0};
      const int v = 2 * lam - delta(p);
      const StarWeight w0 = concrete_weight(v), wneg = concrete_weight(-v);
      Json args{{"a12", cd.a12}, {"lambda", lam}, {"weight", v}};
      row("unit", args, varpi_concrete(cd, StratumElement::unit(w0)), StratumElement::unit(wneg));
      row("B1", args, varpi_concrete(cd, specialize_lambda(act_B1(cd, StratumElement::unit(w)), lam)),
          frame0(act_B1(cd, StratumElement::unit(wneg))));
      for (int n = 1; n <= max_power; ++n) {
        Json a = args;
        a["n"] = n;
        StratumElement lhs = varpi_concrete(cd, specialize_lambda(idp_engine(cd, n, p, w), lam));
        StratumElement rhs = frame0(idp_engine(cd, n, p, wneg));
        row("idp", a, lhs, rhs);
        StratumElement x = specialize_lambda(expand_idp_closed(cd, n, p, w), lam);
        row("involution", a, varpi_concrete(cd, varpi_concrete(cd, x)), x);
      }
    }
  return suite;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const Letter& l : w) {
    s += l.gen == Gen::E1 ? "E1" : l.gen == Gen::F1 ? "F1" : "F2";
    if (l.gen != Gen::F2) s += "^(" + std::to_string(l.power) + ")";
  }
  return s;
}

StratumElement normalize_by_actions(const CartanData& cd, const Word& word, const StarWeight& w) {
  StratumElement x = StratumElement::unit(w);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    switch (it->gen) {
      case Gen::E1: x = act_E1(cd, it->power, x); break;
      case Gen::F1: x = act_F1(cd, it->power, x); break;
      case Gen::F2:
        for (int i = 0; i < it->power; ++i) x = act_F2(cd, x);
        break;
    }
  }
  return x;
}

namespace {

int letter_shift(const CartanData& cd, const Letter& l) {
  switch (l.gen) {
    case Gen::E1: return 2 * l.power;
    case Gen::F1: return -2 * l.power;
    case Gen::F2: return -cd.a12 * l.power;
  }
  return 0;
}

Word cleaned(Word w) {
  std::erase_if(w, [](const Letter& l) { return l.power == 0; });
  return w;
}

bool is_redex(const CartanData& cd, const Letter& x, const Letter& y) {
  if (x.gen == y.gen) return x.gen != Gen::F2;
  if (x.gen == Gen::F1 && y.gen == Gen::E1) return true;
  if (x.gen == Gen::F2 && y.gen == Gen::E1) return true;
  return x.gen == Gen::F2 && y.gen == Gen::F1 && y.power >= cd.serre_length();
}

// Weight-audited conversion of an irreducible word to its monomial.
NormalMonomial to_monomial(const CartanData& cd, const Word& w, const StarWeight& wt) {
  NormalMonomial m;
  m.weight = wt;
  std::size_t i = 0;
  if (i < w.size() && w[i].gen == Gen::E1) m.a = w[i++].power;
  if (i < w.size() && w[i].gen == Gen::F1) m.b = w[i++].power;
  if (i < w.size() && w[i].gen == Gen::F2) {
    if (w[i].power != 1) throw InvalidArgument("word contains more than one F2");
    m.hasF2 = true;
    ++i;
    if (i < w.size() && w[i].gen == Gen::F1) m.c = w[i++].power;
  }
  if (i != w.size()) throw std::logic_error("rewriting stopped at a non-normal word " + to_string(w));
  int off = wt.offset;
  for (const Letter& l : w) off += letter_shift(cd, l);
  if (off != left_offset(m, cd)) throw std::logic_error("weight audit failed on " + to_string(w));
  return m;
}

}  // namespace

StratumElement normalize_by_rewriting(const CartanData& cd, const Word& word, const StarWeight& w,
                                      std::mt19937_64* rng) {
  int f2 = 0;
  for (const Letter& l : word) {
    if (l.power < 0) throw InvalidArgument("negative divided power");
    if (l.gen == Gen::F2) f2 += l.power;
  }
  if (f2 > 1) throw InvalidArgument("words may contain at most one F2");
  const QBase q1 = cd.q1();
  const int M = cd.serre_length();
  std::map<Word, Scalar> todo;
  todo.emplace(cleaned(word), Scalar(1));
  StratumElement out;
  while (!todo.empty()) {
    auto it = todo.begin();
    if (rng) std::advance(it, static_cast<long>((*rng)() % todo.size()));
    const Word cur = it->first;
    const Scalar coef = it->second;
    todo.erase(it);
    std::vector<std::size_t> redexes;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i)
      if (is_redex(cd, cur[i], cur[i + 1])) redexes.push_back(i);
    if (redexes.empty()) {
      out.add(to_monomial(cd, cur, w), coef);
      continue;
    }
    const std::size_t i = rng ? redexes[(*rng)() % redexes.size()] : redexes.front();
    const Letter x = cur[i], y = cur[i + 1];
    int right = w.offset;
    for (std::size_t j = i + 2; j < cur.size(); ++j) right += letter_shift(cd, cur[j]);
    auto emit = [&](std::vector<Letter> mid, const Scalar& f) {
      if (f.is_zero()) return;
      Word nw(cur.begin(), cur.begin() + static_cast<long>(i));
      nw.insert(nw.end(), mid.begin(), mid.end());
      nw.insert(nw.end(), cur.begin() + static_cast<long>(i) + 2, cur.end());
      nw = cleaned(std::move(nw));
      auto [pos, inserted] = todo.emplace(nw, coef * f);
      if (!inserted) {
        pos->second += coef * f;
        if (pos->second.is_zero()) todo.erase(pos);
      }
    };
    if (x.gen == y.gen) {
      emit({{x.gen, x.power + y.power}}, qbinom(x.power + y.power, x.power, q1));
    } else if (x.gen == Gen::F1) {
      const int mu = right - delta(w.parity);
      const UpperArg top(-2, x.power - y.power - mu);
      for (int j = 0; j <= std::min(x.power, y.power); ++j)
        emit({{Gen::E1, y.power - j}, {Gen::F1, x.power - j}}, qbinom(top, j, q1));
    } else if (y.gen == Gen::E1) {
      emit({y, x}, Scalar(1));
    } else {
      const int cpow = y.power;
      const Scalar inv = qbinom(cpow, M, q1).inv();
      for (int n = 1; n <= M; ++n)
        emit({{Gen::F1, n}, {Gen::F2, 1}, {Gen::F1, cpow - n}}, sign_of(n + 1) * inv * qbinom(cpow - n, M - n, q1));
    }
  }
  return out;
}

Word random_word(std::mt19937_64& rng, int max_letters, int max_power, bool allow_F2) {
  std::uniform_int_distribution<int> len(1, max_letters), pw(1, max_power), coin(0, 1);
  Word w;
  const int n = len(rng);
  int f2_at = -1;
  if (allow_F2 && coin(rng)) f2_at = std::uniform_int_distribution<int>(0, n - 1)(rng);
  for (int i = 0; i < n; ++i) {
    if (i == f2_at) w.push_back({Gen::F2, 1});
    else w.push_back({coin(rng) ? Gen::E1 : Gen::F1, pw(rng)});
  }
  return w;
}

}  // namespace iserre
