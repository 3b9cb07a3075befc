#include "iserre/scalar.hpp"

#include <cctype>
#include <map>

#include "iserre/errors.hpp"

namespace iserre {

namespace {

LaurentPoly exact_div(const LaurentPoly& a, const LaurentPoly& b) {
  auto r = divide_exact(a, b);
  if (!r) throw std::logic_error("scalar: inexact division");
  return *r;
}

// Evaluates p with variable `var` replaced by `value` (other variables kept).
Scalar substitute_var(const LaurentPoly& p, int var, const Scalar& value) {
  std::map<int, std::vector<LaurentPoly::Term>> by_power;
  for (const auto& t : p.terms()) {
    Exponent e = t.exp;
    e[var] = 0;
    by_power[t.exp[var]].push_back({e, t.coeff});
  }
  Scalar out;
  for (auto& [k, terms] : by_power) out += Scalar(LaurentPoly::from_terms(std::move(terms))) * pow(value, k);
  return out;
}

Integer sum_coeffs(const LaurentPoly& p) {
  Integer s = 0;
  for (const auto& t : p.terms()) s += t.coeff;
  return s;
}

// Moves monomial factors of a denominator known to be coprime with the
// numerator into the numerator and fixes the sign.
Scalar coprime_fraction(LaurentPoly n, LaurentPoly d) {
  if (n.is_zero()) return Scalar();
  Exponent m = d.min_exponents();
  if (m != Exponent{0, 0, 0}) {
    d = d.shifted({-m[0], -m[1], -m[2]});
    n = n.shifted({-m[0], -m[1], -m[2]});
  }
  if (sgn(d.leading().coeff) < 0) {
    n = -n;
    d = -d;
  }
  if (d.is_one()) return Scalar(std::move(n));
  return Scalar::fraction_unchecked(std::move(n), std::move(d));
}

}  // namespace

Scalar Scalar::fraction(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw DivisionByZero();
  if (num.is_zero()) return Scalar();
  LaurentPoly n;
  LaurentPoly d;
  if (den.is_monomial()) {
    const auto& t = den.trailing();
    n = num.shifted({-t.exp[0], -t.exp[1], -t.exp[2]});
    d = LaurentPoly(t.coeff);
  } else {
    auto q = divide_exact(num, den);
    if (q) return Scalar(std::move(*q));
    LaurentPoly g = gcd(num, den);
    n = g.is_one() ? num : exact_div(num, g);
    d = g.is_one() ? den : exact_div(den, g);
    Exponent m = d.min_exponents();
    d = d.shifted({-m[0], -m[1], -m[2]});
    n = n.shifted({-m[0], -m[1], -m[2]});
  }
  if (d.is_constant()) {
    Integer c = d.is_zero() ? Integer(0) : d.trailing().coeff;
    Integer g = n.content();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g != 1) {
      n = *divide_exact(n, LaurentPoly(g));
      c /= g;
    }
    if (c < 0) {
      n = -n;
      c = -c;
    }
    return Scalar(std::move(n), LaurentPoly(c), true);
  }
  if (sgn(d.leading().coeff) < 0) {
    n = -n;
    d = -d;
  }
  return Scalar(std::move(n), std::move(d), true);
}

Scalar Scalar::rational(const Rational& r) {
  return fraction(LaurentPoly(r.get_num()), LaurentPoly(r.get_den()));
}

Scalar Scalar::operator-() const { return Scalar(-num_, den_, true); }

Scalar Scalar::inv() const {
  if (is_zero()) throw DivisionByZero();
  return fraction(den_, num_);
}

// Sum and product of canonical fractions following Henrici: only gcds of the
// (smaller) denominators and cross terms are needed.
Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) return *this = fraction(num_ + o.num_, den_);
  if (den_.is_one()) return *this = coprime_fraction(num_ * o.den_ + o.num_, o.den_);
  if (o.den_.is_one()) return *this = coprime_fraction(num_ + o.num_ * den_, den_);
  LaurentPoly g = gcd(den_, o.den_);
  if (g.is_one()) return *this = coprime_fraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  LaurentPoly b = exact_div(den_, g);
  LaurentPoly d = exact_div(o.den_, g);
  LaurentPoly t = num_ * d + o.num_ * b;
  if (t.is_zero()) return *this = Scalar();
  LaurentPoly g2 = gcd(t, g);
  if (!g2.is_one()) {
    t = exact_div(t, g2);
    g = exact_div(g, g2);
  }
  return *this = coprime_fraction(std::move(t), b * d * g);
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero() || o.is_zero()) return *this = Scalar();
  if (den_.is_one() && o.den_.is_one()) {
    num_ *= o.num_;
    return *this;
  }
  LaurentPoly g1 = o.den_.is_one() ? LaurentPoly(1) : gcd(num_, o.den_);
  LaurentPoly g2 = den_.is_one() ? LaurentPoly(1) : gcd(o.num_, den_);
  LaurentPoly a = g1.is_one() ? num_ : exact_div(num_, g1);
  LaurentPoly d = g1.is_one() ? o.den_ : exact_div(o.den_, g1);
  LaurentPoly c = g2.is_one() ? o.num_ : exact_div(o.num_, g2);
  LaurentPoly b = g2.is_one() ? den_ : exact_div(den_, g2);
  return *this = coprime_fraction(a * c, b * d);
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw DivisionByZero();
  if (is_zero()) return *this;
  return *this *= o.inv();
}

Scalar pow(const Scalar& x, int n) {
  if (n < 0) return pow(x.inv(), -n);
  Scalar out(1);
  Scalar base = x;
  while (n > 0) {
    if (n & 1) out *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return out;
}

Scalar Scalar::bar() const {
  auto flip = [](const Exponent& e) { return Exponent{-e[0], -e[1], e[2]}; };
  return fraction(num_.map_exponents(flip), den_.map_exponents(flip));
}

Scalar Scalar::bar(const Scalar& sigma_image) const {
  Scalar b = bar();
  if (!b.depends_on(kVarS)) return b;
  return b.substitute_sigma(sigma_image);
}

Scalar Scalar::substitute_lambda(int lambda0) const {
  auto f = [lambda0](const Exponent& e) { return Exponent{e[0] + e[1] * lambda0, 0, e[2]}; };
  return fraction(num_.map_exponents(f), den_.map_exponents(f));
}

Scalar Scalar::substitute_sigma(const Scalar& value) const {
  if (!depends_on(kVarS)) return *this;
  return substitute_var(num_, kVarS, value) / substitute_var(den_, kVarS, value);
}

Scalar Scalar::substitute_q_power(int k) const {
  if (k == 0) throw InvalidArgument("substitute_q_power: k = 0");
  auto f = [k](const Exponent& e) { return Exponent{e[0] * k, e[1], e[2]}; };
  return fraction(num_.map_exponents(f), den_.map_exponents(f));
}

Rational Scalar::specialize_q1(const std::optional<Rational>& sigma_value) const {
  Scalar x = *this;
  if (x.depends_on(kVarS)) {
    if (!sigma_value) throw UnboundSymbol("s in " + to_string());
    x = x.substitute_sigma(Scalar::rational(*sigma_value));
  }
  if (x.depends_on(kVarL)) {
    auto drop = [](const Exponent& e) { return Exponent{e[0], 0, e[2]}; };
    x = fraction(x.num_.map_exponents(drop), x.den_.map_exponents(drop));
  }
  Integer d = sum_coeffs(x.den_);
  if (d == 0) throw SpecializationPole(to_string());
  Rational r(sum_coeffs(x.num_), d);
  r.canonicalize();
  return r;
}

std::string Scalar::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

Scalar Scalar::parse(std::string_view text) {
  int depth = 0;
  std::size_t split = std::string_view::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == '/' && depth == 0) {
      if (split != std::string_view::npos) throw ParseError("multiple '/' in scalar '" + std::string(text) + "'");
      split = i;
    }
  }
  auto strip = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    return s;
  };
  if (split == std::string_view::npos) return fraction(LaurentPoly::parse(strip(text)), LaurentPoly(1));
  return fraction(LaurentPoly::parse(strip(text.substr(0, split))), LaurentPoly::parse(strip(text.substr(split + 1))));
}

}  // namespace iserre
