#pragma once

#include <gmpxx.h>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iserre {

using Integer = mpz_class;
using Rational = mpq_class;

/// Exponent vector (e_q, e_L, e_s) of a monomial q^a L^b s^c, where L stands
/// for q^lambda and s for the parameter symbol.
using Exponent = std::array<int, 3>;

inline constexpr int kVarQ = 0;
inline constexpr int kVarL = 1;
inline constexpr int kVarS = 2;

/// Multivariate Laurent polynomial in q, L, s over arbitrary-precision
/// integers. Terms are kept sorted ascending in lexicographic order on the
/// exponent vector with no zero coefficients, so equal polynomials have equal
/// representations.
class LaurentPoly {
 public:
  struct Term {
    Exponent exp;
    Integer coeff;
  };

  LaurentPoly() = default;
  LaurentPoly(long c);  // NOLINT(google-explicit-constructor)
  explicit LaurentPoly(const Integer& c);

  static LaurentPoly monomial(const Exponent& e, const Integer& c = 1);
  static LaurentPoly q_pow(int k) { return monomial({k, 0, 0}); }
  /// Builds a polynomial from unsorted terms, merging duplicates.
  static LaurentPoly from_terms(std::vector<Term> terms);
  /// Parses the canonical text form, e.g. "1*q^2 - 3*q^-1*L^2 + 2".
  static LaurentPoly parse(std::string_view text);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_monomial() const { return terms_.size() == 1; }
  bool depends_on(int var) const;

  /// Greatest term in the lexicographic order.
  const Term& leading() const { return terms_.back(); }
  /// Smallest term in the lexicographic order.
  const Term& trailing() const { return terms_.front(); }

  /// Componentwise minimum / maximum exponents over all terms.
  Exponent min_exponents() const;
  Exponent max_exponents() const;

  /// Multiplies by the monomial with exponent `e`.
  LaurentPoly shifted(const Exponent& e) const;
  /// Applies an exponent map term by term; the map must be injective on the
  /// support or merge-compatible (duplicates are summed).
  LaurentPoly map_exponents(const std::function<Exponent(const Exponent&)>& f) const;

  /// Content: gcd of all integer coefficients (0 for the zero polynomial).
  Integer content() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Integer& c);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const Integer& c) { return a *= c; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  /// Canonical text: terms in descending lexicographic order, each printed as
  /// `c*q^a*L^b*s^c` with zero exponents omitted.
  std::string to_string() const;

 private:
  void add_scaled(const LaurentPoly& o, int sign);

  std::vector<Term> terms_;
};

/// Exact quotient a / b, or nullopt when b does not divide a in the Laurent
/// ring. Throws DivisionByZero when b is zero.
std::optional<LaurentPoly> divide_exact(const LaurentPoly& a, const LaurentPoly& b);

/// Greatest common divisor of two Laurent polynomials, normalized to have
/// nonnegative minimal exponents equal to zero and a positive leading
/// coefficient. Unique up to units of the Laurent ring.
LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b);

}  // namespace iserre
