#include "iserre/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "iserre/errors.hpp"

namespace iserre {

namespace {

bool exp_less(const LaurentPoly::Term& a, const LaurentPoly::Term& b) { return a.exp < b.exp; }

Exponent add(const Exponent& a, const Exponent& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Exponent sub(const Exponent& a, const Exponent& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

// Sorts and merges duplicate exponents, dropping zero coefficients.
void normalize(std::vector<LaurentPoly::Term>& terms) {
  std::sort(terms.begin(), terms.end(), exp_less);
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    Integer sum = std::move(terms[i].coeff);
    while (j < terms.size() && terms[j].exp == terms[i].exp) {
      sum += terms[j].coeff;
      ++j;
    }
    if (sgn(sum) != 0) {
      terms[out].exp = terms[i].exp;
      terms[out].coeff = std::move(sum);
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

}  // namespace

LaurentPoly::LaurentPoly(long c) {
  if (c != 0) terms_.push_back({{0, 0, 0}, Integer(c)});
}

LaurentPoly::LaurentPoly(const Integer& c) {
  if (sgn(c) != 0) terms_.push_back({{0, 0, 0}, c});
}

LaurentPoly LaurentPoly::monomial(const Exponent& e, const Integer& c) {
  LaurentPoly p;
  if (sgn(c) != 0) p.terms_.push_back({e, c});
  return p;
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  normalize(terms);
  LaurentPoly p;
  p.terms_ = std::move(terms);
  return p;
}

bool LaurentPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exp == Exponent{0, 0, 0});
}

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_[0].exp == Exponent{0, 0, 0} && terms_[0].coeff == 1;
}

bool LaurentPoly::depends_on(int var) const {
  return std::any_of(terms_.begin(), terms_.end(), [var](const Term& t) { return t.exp[var] != 0; });
}

Exponent LaurentPoly::min_exponents() const {
  if (terms_.empty()) return {0, 0, 0};
  Exponent m = terms_[0].exp;
  for (const auto& t : terms_)
    for (int v = 0; v < 3; ++v) m[v] = std::min(m[v], t.exp[v]);
  return m;
}

Exponent LaurentPoly::max_exponents() const {
  if (terms_.empty()) return {0, 0, 0};
  Exponent m = terms_[0].exp;
  for (const auto& t : terms_)
    for (int v = 0; v < 3; ++v) m[v] = std::max(m[v], t.exp[v]);
  return m;
}

LaurentPoly LaurentPoly::shifted(const Exponent& e) const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.exp = add(t.exp, e);
  return p;
}

LaurentPoly LaurentPoly::map_exponents(const std::function<Exponent(const Exponent&)>& f) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({f(t.exp), t.coeff});
  return from_terms(std::move(out));
}

Integer LaurentPoly::content() const {
  Integer g = 0;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

void LaurentPoly::add_scaled(const LaurentPoly& o, int sign) {
  if (o.terms_.empty()) return;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->exp < b->exp)) {
      merged.push_back(std::move(*a));
      ++a;
    } else if (a == terms_.end() || b->exp < a->exp) {
      merged.push_back({b->exp, sign > 0 ? b->coeff : Integer(-b->coeff)});
      ++b;
    } else {
      Integer c = sign > 0 ? Integer(a->coeff + b->coeff) : Integer(a->coeff - b->coeff);
      if (sgn(c) != 0) merged.push_back({a->exp, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  add_scaled(o, 1);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  add_scaled(o, -1);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
  *this = *this * o;
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Integer& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_monomial()) {
    LaurentPoly p = b.shifted(a.terms_[0].exp);
    if (a.terms_[0].coeff != 1) p *= a.terms_[0].coeff;
    return p;
  }
  if (b.is_monomial()) return b * a;
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) out.push_back({add(x.exp, y.exp), x.coeff * y.coeff});
  return LaurentPoly::from_terms(std::move(out));
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].exp != b.terms_[i].exp || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  static constexpr const char* kNames[3] = {"q", "L", "s"};
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const bool neg = sgn(it->coeff) < 0;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    os << Integer(abs(it->coeff)).get_str();
    for (int v = 0; v < 3; ++v)
      if (it->exp[v] != 0) os << '*' << kNames[v] << '^' << it->exp[v];
  }
  return os.str();
}

// Grammar: poly := ['-'] term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := integer | var ['^' ['-'] integer]; var := q | L | s.
LaurentPoly LaurentPoly::parse(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError("cannot parse polynomial '" + std::string(text) + "': " + msg);
  };
  auto read_int = [&]() -> std::string {
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
      fail("expected integer");
    return std::string(text.substr(start, pos - start));
  };

  std::vector<Term> terms;
  skip();
  if (pos == text.size()) fail("empty input");
  int sign = 1;
  if (text[pos] == '-') {
    sign = -1;
    ++pos;
  } else if (text[pos] == '+') {
    ++pos;
  }
  while (true) {
    Term term{{0, 0, 0}, Integer(sign)};
    bool any = false;
    while (true) {
      skip();
      if (pos >= text.size()) fail("unexpected end");
      char ch = text[pos];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        term.coeff *= Integer(read_int());
      } else if (ch == 'q' || ch == 'L' || ch == 's') {
        ++pos;
        int var = ch == 'q' ? kVarQ : (ch == 'L' ? kVarL : kVarS);
        int e = 1;
        skip();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip();
          e = std::stoi(read_int());
        }
        term.exp[var] += e;
      } else {
        fail(std::string("unexpected character '") + ch + "'");
      }
      any = true;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!any) fail("empty term");
    terms.push_back(std::move(term));
    skip();
    if (pos == text.size()) break;
    if (text[pos] == '+') {
      sign = 1;
    } else if (text[pos] == '-') {
      sign = -1;
    } else {
      fail(std::string("unexpected character '") + text[pos] + "'");
    }
    ++pos;
  }
  return from_terms(std::move(terms));
}

std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (a.is_zero()) return LaurentPoly{};
  if (b.is_monomial()) {
    const auto& t = b.leading();
    std::vector<LaurentPoly::Term> out;
    out.reserve(a.size());
    for (const auto& x : a.terms()) {
      if (!mpz_divisible_p(x.coeff.get_mpz_t(), t.coeff.get_mpz_t())) return std::nullopt;
      Integer c;
      mpz_divexact(c.get_mpz_t(), x.coeff.get_mpz_t(), t.coeff.get_mpz_t());
      out.push_back({sub(x.exp, t.exp), std::move(c)});
    }
    return LaurentPoly::from_terms(std::move(out));
  }
  // Lex order is a group order on Laurent monomials, so an exact quotient has
  // its smallest term at trailing(a)/trailing(b); anything below is a failure.
  const Exponent floor = sub(a.trailing().exp, b.trailing().exp);
  // Per-variable degree bounds of the quotient keep the search finite.
  const Exponent lo = sub(a.min_exponents(), b.min_exponents());
  const Exponent hi = sub(a.max_exponents(), b.max_exponents());
  for (int v = 0; v < 3; ++v)
    if (lo[v] > hi[v]) return std::nullopt;
  const auto& lb = b.leading();
  LaurentPoly rem = a;
  std::vector<LaurentPoly::Term> quot;
  while (!rem.is_zero()) {
    const auto& lr = rem.leading();
    Exponent e = sub(lr.exp, lb.exp);
    if (e < floor) return std::nullopt;
    for (int v = 0; v < 3; ++v)
      if (e[v] < lo[v] || e[v] > hi[v]) return std::nullopt;
    if (!mpz_divisible_p(lr.coeff.get_mpz_t(), lb.coeff.get_mpz_t())) return std::nullopt;
    Integer c;
    mpz_divexact(c.get_mpz_t(), lr.coeff.get_mpz_t(), lb.coeff.get_mpz_t());
    LaurentPoly step = LaurentPoly::monomial(e, c);
    rem -= step * b;
    quot.push_back({e, std::move(c)});
  }
  return LaurentPoly::from_terms(std::move(quot));
}

namespace {

int degree_in(const LaurentPoly& p, int v) {
  int d = 0;
  for (const auto& t : p.terms()) d = std::max(d, t.exp[v]);
  return d;
}

// Coefficients of p viewed as a polynomial in variable v (nonnegative
// exponents assumed); entry k is the coefficient of v^k with v removed.
std::vector<LaurentPoly> coefficients_in(const LaurentPoly& p, int v) {
  std::vector<std::vector<LaurentPoly::Term>> buckets(static_cast<std::size_t>(degree_in(p, v)) + 1);
  for (const auto& t : p.terms()) {
    Exponent e = t.exp;
    e[v] = 0;
    buckets[static_cast<std::size_t>(t.exp[v])].push_back({e, t.coeff});
  }
  std::vector<LaurentPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(LaurentPoly::from_terms(std::move(b)));
  return out;
}

LaurentPoly leading_coeff_in(const LaurentPoly& p, int v) {
  const int d = degree_in(p, v);
  std::vector<LaurentPoly::Term> out;
  for (const auto& t : p.terms())
    if (t.exp[v] == d) {
      Exponent e = t.exp;
      e[v] = 0;
      out.push_back({e, t.coeff});
    }
  return LaurentPoly::from_terms(std::move(out));
}

LaurentPoly positive_leading(LaurentPoly p) {
  if (!p.is_zero() && sgn(p.leading().coeff) < 0) p = -p;
  return p;
}

LaurentPoly exact(const LaurentPoly& a, const LaurentPoly& b) {
  auto r = divide_exact(a, b);
  if (!r) throw std::logic_error("gcd: inexact division " + a.to_string() + " / " + b.to_string());
  return *r;
}

LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b);

LaurentPoly content_in(const LaurentPoly& p, int v) {
  LaurentPoly g;
  for (const auto& c : coefficients_in(p, v)) {
    if (c.is_zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

// Pseudo-remainder of a by b in variable v, with the multipliers reduced by
// their gcd and the integer content removed at every step.
LaurentPoly pseudo_remainder(LaurentPoly a, const LaurentPoly& b, int v) {
  const int db = degree_in(b, v);
  const LaurentPoly lb = leading_coeff_in(b, v);
  while (!a.is_zero()) {
    const int da = degree_in(a, v);
    if (da < db) break;
    Exponent shift{0, 0, 0};
    shift[v] = da - db;
    LaurentPoly la = leading_coeff_in(a, v);
    LaurentPoly g = poly_gcd(la, lb);
    if (g.is_one()) {
      a = lb * a - la * b.shifted(shift);
    } else {
      a = exact(lb, g) * a - exact(la, g) * b.shifted(shift);
    }
    Integer c = a.content();
    if (sgn(c) != 0 && c != 1) a = exact(a, LaurentPoly(c));
  }
  return a;
}

LaurentPoly strip_monomial(const LaurentPoly& p) {
  Exponent m = p.min_exponents();
  if (m == Exponent{0, 0, 0}) return p;
  return p.shifted({-m[0], -m[1], -m[2]});
}

Integer max_norm(const LaurentPoly& p) {
  Integer m = 0;
  for (const auto& t : p.terms())
    if (abs(t.coeff) > m) m = abs(t.coeff);
  return m;
}

LaurentPoly evaluate_at(const LaurentPoly& p, int v, const Integer& x) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Integer c;
    mpz_pow_ui(c.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(t.exp[v]));
    c *= t.coeff;
    Exponent e = t.exp;
    e[v] = 0;
    out.push_back({e, std::move(c)});
  }
  return LaurentPoly::from_terms(std::move(out));
}

// Reads every coefficient as a balanced base-x numeral in variable v.
LaurentPoly interpolate(const LaurentPoly& h, int v, const Integer& x) {
  std::vector<LaurentPoly::Term> out;
  const Integer half = x / 2;
  for (const auto& t : h.terms()) {
    Integer c = t.coeff;
    int i = 0;
    while (sgn(c) != 0) {
      Integer d;
      mpz_fdiv_r(d.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
      if (d > half) d -= x;
      Exponent e = t.exp;
      e[v] = i;
      if (sgn(d) != 0) out.push_back({e, d});
      c -= d;
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
      ++i;
    }
  }
  return LaurentPoly::from_terms(std::move(out));
}

// Heuristic gcd by evaluation at a large integer and balanced-digit
// interpolation, one variable at a time. Empty result means give up.
std::optional<LaurentPoly> heu_gcd(const LaurentPoly& a, const LaurentPoly& b, int depth = 0) {
  int v = -1;
  for (int k = 2; k >= 0 && v < 0; --k)
    if (a.depends_on(k) || b.depends_on(k)) v = k;
  Integer ca = a.content();
  Integer cb = b.content();
  Integer gc;
  mpz_gcd(gc.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (v < 0) return LaurentPoly(gc);
  const LaurentPoly pa = exact(a, LaurentPoly(ca));
  const LaurentPoly pb = exact(b, LaurentPoly(cb));
  Integer xi = 2 * std::min(max_norm(pa), max_norm(pb)) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    LaurentPoly fa = evaluate_at(pa, v, xi);
    LaurentPoly fb = evaluate_at(pb, v, xi);
    if (!fa.is_zero() && !fb.is_zero()) {
      auto h = heu_gcd(fa, fb, depth + 1);
      if (!h) return std::nullopt;
      LaurentPoly g = interpolate(*h, v, xi);
      if (!g.is_zero()) {
        Integer c = g.content();
        if (c != 1) g = exact(g, LaurentPoly(c));
        g = positive_leading(strip_monomial(g));
        if (divide_exact(pa, g) && divide_exact(pb, g)) return g * gc;
      }
    }
    Integer r;
    mpz_sqrt(r.get_mpz_t(), xi.get_mpz_t());
    mpz_sqrt(r.get_mpz_t(), r.get_mpz_t());
    xi = xi * 73794 * r / 27011;
  }
  return std::nullopt;
}

// gcd of polynomials with nonnegative exponents, up to monomial factors.
LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return positive_leading(b);
  if (b.is_zero()) return positive_leading(a);
  if (a.is_one() || b.is_one()) return LaurentPoly(1);
  if (a.size() > 1 && b.size() > 1) {
    if (auto h = heu_gcd(a, b)) return *h;
  }
  // Main variable: the one of smallest positive degree keeps the remainder
  // sequence short.
  int v = -1;
  int best = 0;
  for (int k = 0; k < 3; ++k) {
    const int d = std::max(degree_in(a, k), degree_in(b, k));
    if (d > 0 && (v < 0 || d < best)) {
      v = k;
      best = d;
    }
  }
  if (v < 0) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.leading().coeff.get_mpz_t(), b.leading().coeff.get_mpz_t());
    return LaurentPoly(g);
  }
  if (degree_in(a, v) == 0) return poly_gcd(a, content_in(b, v));
  if (degree_in(b, v) == 0) return poly_gcd(content_in(a, v), b);

  const LaurentPoly ca = content_in(a, v);
  const LaurentPoly cb = content_in(b, v);
  const LaurentPoly gc = poly_gcd(ca, cb);
  LaurentPoly x = exact(a, ca);
  LaurentPoly y = exact(b, cb);
  if (degree_in(x, v) < degree_in(y, v)) std::swap(x, y);
  while (!y.is_zero()) {
    LaurentPoly r = pseudo_remainder(x, y, v);
    x = std::move(y);
    if (r.is_zero()) {
      y = LaurentPoly{};
    } else if (degree_in(r, v) == 0) {
      x = LaurentPoly(1);
      y = LaurentPoly{};
    } else {
      y = exact(r, content_in(r, v));
    }
  }
  if (!x.is_one()) x = exact(x, content_in(x, v));
  return positive_leading(gc * x);
}

}  // namespace

LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b) {
  return positive_leading(strip_monomial(poly_gcd(strip_monomial(a), strip_monomial(b))));
}

}  // namespace iserre
