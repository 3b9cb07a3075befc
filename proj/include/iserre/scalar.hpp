#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "iserre/laurent.hpp"

namespace iserre {

/// Element of the fraction field of Z[q^±, L^±, s]. Always kept in canonical
/// form: gcd(num, den) = 1, den has all minimal exponents equal to zero and a
/// positive leading coefficient.
class Scalar {
 public:
  Scalar() : den_(1) {}
  Scalar(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  explicit Scalar(const Integer& c) : num_(c), den_(1) {}
  explicit Scalar(LaurentPoly p) : num_(std::move(p)), den_(1) {}

  /// num / den reduced to canonical form. Throws DivisionByZero on den = 0.
  static Scalar fraction(const LaurentPoly& num, const LaurentPoly& den);
  static Scalar rational(const Rational& r);
  /// Wraps an already canonical pair without any reduction.
  static Scalar fraction_unchecked(LaurentPoly num, LaurentPoly den) { return Scalar(std::move(num), std::move(den), true); }
  static Scalar q_pow(int k) { return Scalar(LaurentPoly::q_pow(k)); }
  static Scalar lambda_pow(int k) { return Scalar(LaurentPoly::monomial({0, k, 0})); }
  static Scalar monomial(int eq, int el, int es = 0) { return Scalar(LaurentPoly::monomial({eq, el, es})); }
  static Scalar sigma() { return Scalar(LaurentPoly::monomial({0, 0, 1})); }
  /// Parses `poly` or `(poly) / (poly)`.
  static Scalar parse(std::string_view text);

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool depends_on(int var) const { return num_.depends_on(var) || den_.depends_on(var); }

  Scalar operator-() const;
  Scalar inv() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// q -> q^-1, L -> L^-1, s fixed.
  Scalar bar() const;
  /// q -> q^-1, L -> L^-1, s -> sigma_image.
  Scalar bar(const Scalar& sigma_image) const;

  /// Replaces L by q^lambda0.
  Scalar substitute_lambda(int lambda0) const;
  /// Replaces s by the given value.
  Scalar substitute_sigma(const Scalar& value) const;
  /// Replaces q by q^k; L and s untouched.
  Scalar substitute_q_power(int k) const;

  /// Value at q = 1, L = 1. s must be absent unless a value is supplied.
  Rational specialize_q1(const std::optional<Rational>& sigma_value = std::nullopt) const;

  /// `num` when den = 1, else `(num) / (den)`.
  std::string to_string() const;

 private:
  Scalar(LaurentPoly num, LaurentPoly den, bool /*canonical*/) : num_(std::move(num)), den_(std::move(den)) {}

  LaurentPoly num_;
  LaurentPoly den_;
};

Scalar pow(const Scalar& x, int n);

}  // namespace iserre
