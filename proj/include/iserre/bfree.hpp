#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iserre/qcomb.hpp"
#include "iserre/report.hpp"
#include "iserre/scalar.hpp"
#include "iserre/ualg.hpp"

namespace iserre {

/// Letters of a free algebra plus commuting torus generators.
/// pass[k][l] is the q-exponent in K_k X_l = q^pass X_l K_k.
struct Alphabet {
  std::vector<std::string> letters;
  std::vector<std::string> torus;
  std::vector<std::vector<int>> pass;

  /// Letters only, no torus.
  static Alphabet plain(std::vector<std::string> letters);
};

/// word * K^torus, torus pushed to the right.
struct FreeMonomial {
  std::vector<int> word;
  std::vector<int> torus;

  friend auto operator<=>(const FreeMonomial&, const FreeMonomial&) = default;
};

class FreePoly {
 public:
  using Map = std::map<FreeMonomial, Scalar>;

  FreePoly() = default;
  static FreePoly constant(const Scalar& c, std::size_t ntorus = 0);
  static FreePoly monomial(FreeMonomial m, const Scalar& c = Scalar(1));
  static FreePoly letter(int l, std::size_t ntorus = 0);

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(const FreeMonomial& m) const;
  /// Coefficient of a torus-free word.
  Scalar coeff(const std::vector<int>& word) const;

  void add(const FreeMonomial& m, const Scalar& c);
  FreePoly& operator+=(const FreePoly& o);
  FreePoly& operator-=(const FreePoly& o);
  FreePoly& operator*=(const Scalar& s);
  friend FreePoly operator+(FreePoly a, const FreePoly& b) { return a += b; }
  friend FreePoly operator-(FreePoly a, const FreePoly& b) { return a -= b; }
  friend FreePoly operator*(const Scalar& s, FreePoly a) { return a *= s; }
  friend bool operator==(const FreePoly& a, const FreePoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const FreePoly& a, const FreePoly& b) { return !(a == b); }

  template <class F>
  FreePoly map_coeffs(F&& f) const {
    FreePoly out;
    for (const auto& [m, c] : terms_) out.add(m, f(c));
    return out;
  }

  /// Terms in monomial order, "(coeff)*B1 B2 K1^-1"; "0" if empty.
  std::string to_string(const Alphabet& a) const;
  Json to_json(const Alphabet& a) const;

 private:
  Map terms_;
};

/// Product with the torus of the left factor moved past the right word.
FreePoly multiply(const Alphabet& a, const FreePoly& x, const FreePoly& y);
/// Letters fixed, torus inverted, coefficients barred with s -> sigma_image.
FreePoly bar(const FreePoly& x, const Scalar& sigma_image);

/// One factor of an unnormalized word: a letter power or a torus power.
struct Factor {
  bool torus = false;
  int index = 0;
  int power = 1;
};
using RawWord = std::vector<Factor>;
using RawPoly = std::vector<std::pair<RawWord, Scalar>>;

FreePoly normalize(const Alphabet& a, const RawPoly& p);
RawPoly bar(const RawPoly& p, const Scalar& sigma_image);
Json to_json(const Alphabet& a, const RawPoly& p);

/// The idivided power of `parity` as a polynomial in letter `letter`, with
/// q_i sigma_i = base * sigma.
FreePoly idp_poly(int m, Parity parity, const Scalar& sigma, QBase base = {}, int letter = 0);

/// sum_n (-1)^n B1^(n)_{a12+p} B2 B1^(1-a12-n)_p over letters B1 = 0, B2 = 1.
FreePoly iserre_poly(int a12, Parity p, const Scalar& sigma = Scalar::sigma(), QBase base = {});
/// S(x, y) = sum_n (-1)^n [M n] x^n y x^(M-n) with M = 1 - a12.
FreePoly serre_poly(int a12, QBase base = {}, int x = 0, int y = 1);
/// Lower-order side C of S(B1, B2) = C, i.e. S - [1-a12]! * iserre_poly.
FreePoly convert_to_monomial_form(int a12, const Scalar& sigma = Scalar::sigma(), QBase base = {});

Report parity_independence_check(int a12, QBase base = {});
/// Rescaling from the distinguished parameter to generic sigma, via a^2 = q sigma.
Report rescale_check(int a12, QBase base = {});
/// The involution preserves the q-Serre relations in F and in E.
Suite varpi_serre_check(const CartanData& cd);

/// Parameters of a quasi-split iquantum group.
struct IqgParams {
  std::vector<std::vector<int>> cartan;
  std::vector<int> eps;
  std::vector<int> tau;  // 0-based involution
  std::vector<Scalar> sigma;
  std::vector<Scalar> kappa;
  std::vector<Parity> parity;
  /// Bar image of the formal symbol s; needed by bar_check only.
  std::optional<Scalar> sigma_bar;

  std::size_t rank() const { return cartan.size(); }
  /// Throws InvalidParams on shape errors, a non-symmetrizable matrix, a bad
  /// involution, or a violated kappa / sigma condition.
  void validate() const;

  static IqgParams split_rank2(int a12, int a21 = 0, int eps1 = 1, int eps2 = 1);
};

struct Relation {
  std::string kind;  // torus, weight, commutation, qserre, relation5, iserre
  std::vector<int> nodes;
  RawPoly raw;
  bool verified = true;
  /// [1 - a_ij]!_{q_i} for relations written with divided powers, else 1;
  /// the q = 1 form is raw times this factor.
  Scalar monomial_scale = Scalar(1);
};

struct Presentation {
  Alphabet alphabet;
  std::vector<Relation> relations;

  Json to_json() const;
};

Presentation emit_presentation(const IqgParams& params);

struct RationalRelation {
  std::string kind;
  std::vector<int> nodes;
  std::vector<std::pair<RawWord, Rational>> terms;
};
struct PresentationQ1 {
  Alphabet alphabet;
  std::vector<RationalRelation> relations;

  Json to_json() const;
};

/// Coefficients of monomial_scale * raw at q = 1 with s = sigma_value;
/// raises SpecializationPole.
PresentationQ1 specialize_presentation_q1(const Presentation& p, const Rational& sigma_value = 1);

/// Parameter conditions for the bar involution followed by one row per
/// emitted relation: the bar image must coincide with the relation.
Suite bar_check(const IqgParams& params);

/// Flat "key = value" parameter file; '#' starts a comment.
std::map<std::string, std::string> parse_kv(const std::string& text);
/// Keys: cartan (rows split by ';'), eps, tau (1-based), sigma and kappa
/// (';'-separated Scalars), parity, sigma_bar. Throws ParseError.
IqgParams params_from_kv(const std::map<std::string, std::string>& kv);

}  // namespace iserre
