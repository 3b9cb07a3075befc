#pragma once

#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "iserre/qcomb.hpp"
#include "iserre/report.hpp"
#include "iserre/scalar.hpp"

namespace iserre {

/// Rank-2 symmetrizable Cartan data; diagonal entries are 2.
struct CartanData {
  int eps1 = 1;
  int eps2 = 1;
  int a12 = -1;
  int a21 = -1;

  /// Throws InvalidParams when the data is not a symmetrizable Cartan datum.
  void validate() const;
  /// Length 1 - a12 of the q-Serre relation.
  int serre_length() const { return 1 - a12; }
  QBase q1() const { return {eps1, false}; }
  QBase q1sq() const { return {eps1, true}; }

  /// Symmetric choice eps = 1 when a12 = a21.
  static CartanData from_a12(int a12);
};

enum class Parity { Even = 0, Odd = 1 };

inline Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }
inline Parity parity_of(int n) { return (n & 1) ? Parity::Odd : Parity::Even; }
std::string to_string(Parity p);

/// Idempotent 1*_{2 lambda + offset} (Even) or 1*_{2 lambda - 1 + offset} (Odd).
struct StarWeight {
  Parity parity = Parity::Even;
  int offset = 0;

  /// Constant part of the weight: offset, or offset - 1 for Odd.
  int shift() const { return parity == Parity::Odd ? offset - 1 : offset; }
  /// Parity of the weight value, lambda being an integer.
  Parity value_parity() const { return parity_of(shift()); }
  StarWeight moved(int d) const { return {parity, offset + d}; }

  friend auto operator<=>(const StarWeight&, const StarWeight&) = default;
};

/// E1^(a) F1^(b) [F2 F1^(c)] 1*_weight.
struct NormalMonomial {
  int a = 0;
  int b = 0;
  bool hasF2 = false;
  int c = 0;
  StarWeight weight;

  int degree() const { return a + b + c + (hasF2 ? 1 : 0); }
  std::string to_string() const;

  friend bool operator<(const NormalMonomial& x, const NormalMonomial& y) {
    return std::tie(x.a, x.b, x.hasF2, x.c, x.weight.offset, x.weight.parity) <
           std::tie(y.a, y.b, y.hasF2, y.c, y.weight.offset, y.weight.parity);
  }
  friend bool operator==(const NormalMonomial& x, const NormalMonomial& y) { return !(x < y) && !(y < x); }
};

/// Weight on the left end of a monomial, as an offset in the same stratum.
int left_offset(const NormalMonomial& m, const CartanData& cd);
StarWeight left_weight(const NormalMonomial& m, const CartanData& cd);

/// q1^(sign * weight) for a symbolic weight.
Scalar q1_weight_power(const CartanData& cd, const StarWeight& w, int sign);

/// Finite combination of monomials with nonzero Scalar coefficients.
class StratumElement {
 public:
  using Map = std::map<NormalMonomial, Scalar>;

  StratumElement() = default;
  static StratumElement unit(const StarWeight& w);
  static StratumElement monomial(const NormalMonomial& m, Scalar coeff = Scalar(1));

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Scalar coeff(const NormalMonomial& m) const;

  void add(const NormalMonomial& m, const Scalar& c);
  StratumElement& operator+=(const StratumElement& o);
  StratumElement& operator-=(const StratumElement& o);
  StratumElement& operator*=(const Scalar& s);
  friend StratumElement operator+(StratumElement x, const StratumElement& y) { return x += y; }
  friend StratumElement operator-(StratumElement x, const StratumElement& y) { return x -= y; }
  friend StratumElement operator*(const Scalar& s, StratumElement x) { return x *= s; }
  friend bool operator==(const StratumElement& x, const StratumElement& y) { return x.terms_ == y.terms_; }
  friend bool operator!=(const StratumElement& x, const StratumElement& y) { return !(x == y); }

  /// Applies f to every coefficient, dropping zeros.
  template <class F>
  StratumElement map_coeffs(F&& f) const {
    StratumElement out;
    for (const auto& [m, c] : terms_) out.add(m, f(c));
    return out;
  }

  /// Terms in (a, b, hasF2, c, offset) order, joined by " + "; "0" if empty.
  std::string to_string() const;

 private:
  Map terms_;
};

/// Hard cap on the total divided-power degree of any produced monomial.
void set_degree_cap(int cap);
int degree_cap();

StratumElement act_E1(const CartanData& cd, int k, const StratumElement& x);
StratumElement act_F1(const CartanData& cd, int k, const StratumElement& x);
/// Throws InvalidArgument if a term already contains F2. Without `reduce`
/// the right F1-exponent is left unbounded.
StratumElement act_F2(const CartanData& cd, const StratumElement& x, bool reduce = true);
/// Rewrites F2 F1^(c) with c >= 1 - a12 until every right exponent is below it.
StratumElement reduce_qserre(const CartanData& cd, const StratumElement& x);
/// Left multiplication by B1 = F1 + q1^-1 E1 K1^-1 (distinguished parameter).
StratumElement act_B1(const CartanData& cd, const StratumElement& x);

/// Left multiplication by the idivided power B^(n)_{1,parity}. Every term's
/// left weight must have value parity equal to `parity` (ParityMismatch).
StratumElement apply_idp(const CartanData& cd, int n, Parity parity, const StratumElement& x);
StratumElement idp_engine(const CartanData& cd, int n, Parity parity, const StarWeight& w);
/// Closed-form expansion of B^(n)_{1,parity} 1*_w.
StratumElement expand_idp_closed(const CartanData& cd, int n, Parity parity, const StarWeight& w);

/// The four parity cases of the iSerre identity.
enum class SerreCase { EE, OO, OE, EO };
std::string to_string(SerreCase c);
/// Throws InvalidArgument for an unknown name.
SerreCase parse_case(const std::string& s);
/// Cases compatible with the parity of -a12.
std::vector<SerreCase> cases_for(int a12);

struct SerreSetup {
  Parity left;    // parity of the left idivided powers
  Parity right;   // parity of the right idivided powers
  StarWeight weight;
  int length;     // 1 - a12
  int m;          // a12 = -2m or a12 = 1 - 2m
};
/// Throws InvalidArgument when the case does not fit the parity of a12.
SerreSetup serre_setup(const CartanData& cd, SerreCase c);

/// sum_n (-1)^n B^(n) F2 B^(L-n) 1*; `which` selects all n, even n only or
/// odd n only (without the sign); `reduce` applies the q-Serre rewrite.
enum class NSelect { All, Even, Odd };
StratumElement serre_element(const CartanData& cd, SerreCase c, bool reduce, NSelect which = NSelect::All);

Report iserre_check(const CartanData& cd, SerreCase c);

/// Closed-form coefficient sums S, S', S'', S''' (variant follows the case).
/// Returns the even-n and odd-n parts; the coefficient is even - odd.
std::pair<Scalar, Scalar> extract_S_parts(SerreCase variant, int y, int u, int ell, int m, QBase q1);
Scalar extract_S(SerreCase variant, int y, int u, int ell, int m, QBase q1);
/// The q1-prefactor multiplying S in the coefficient of E1^(ell)F1^(y)F2F1^(..).
Scalar bridge_prefactor(SerreCase variant, int y, int u, int ell, int m, QBase q1);

/// Compares the unreduced engine expansion with prefactor * S per monomial,
/// separately for the even-n and odd-n halves, checks S against T, and checks
/// that the u = ell = 0 residue is the q-Serre combination.
Suite coefficient_bridge_check(const CartanData& cd, SerreCase c);

/// Rank-one involution checks at concrete weights lambda in [-3, 3].
Suite varpi_check_rank1(int max_power, const CartanData& cd = CartanData::from_a12(-1));
/// The involution on an F2-free element whose coefficients are free of L,
/// read at concrete weights (lambda = 0 frame).
StratumElement varpi_concrete(const CartanData& cd, const StratumElement& x);
/// Reads x at lambda = lambda0: coefficients specialized, weights re-anchored
/// to the lambda = 0 frame.
StratumElement specialize_lambda(const StratumElement& x, int lambda0);

// Word-level rewriting used to test confluence.

enum class Gen { E1, F1, F2 };
struct Letter {
  Gen gen;
  int power;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;
std::string to_string(const Word& w);

/// Normalizes word * 1*_w by applying the engine actions right to left.
StratumElement normalize_by_actions(const CartanData& cd, const Word& word, const StarWeight& w);
/// Normalizes by rewriting redexes anywhere in the word; with an rng the
/// redex is chosen at random, otherwise the leftmost one is taken.
StratumElement normalize_by_rewriting(const CartanData& cd, const Word& word, const StarWeight& w,
                                      std::mt19937_64* rng = nullptr);
Word random_word(std::mt19937_64& rng, int max_letters, int max_power, bool allow_F2);

}  // namespace iserre
