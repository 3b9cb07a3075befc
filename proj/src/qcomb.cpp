#include "iserre/qcomb.hpp"

#include <map>
#include <tuple>

#include "iserre/errors.hpp"

namespace iserre {

namespace {

// Q^n - Q^-n as a Laurent polynomial.
LaurentPoly qdiff(const UpperArg& n, int e) {
  LaurentPoly p = LaurentPoly::monomial({e * n.offset, e * n.lambda_coeff, 0});
  p -= LaurentPoly::monomial({-e * n.offset, -e * n.lambda_coeff, 0});
  return p;
}

using Key = std::tuple<int, int, int, int>;

}  // namespace

Scalar qpower(const UpperArg& n, QBase base) {
  const int e = base.exponent();
  return Scalar::monomial(e * n.offset, e * n.lambda_coeff);
}

Scalar qint(const UpperArg& n, QBase base) {
  const int e = base.exponent();
  if (n.is_concrete()) {
    const int k = n.offset < 0 ? -n.offset : n.offset;
    std::vector<LaurentPoly::Term> terms;
    for (int j = 0; j < k; ++j) terms.push_back({{e * (k - 1 - 2 * j), 0, 0}, Integer(n.offset < 0 ? -1 : 1)});
    return Scalar(LaurentPoly::from_terms(std::move(terms)));
  }
  return Scalar::fraction(qdiff(n, e), qdiff(UpperArg(1), e));
}

Scalar qfact(int m, QBase base) {
  if (m < 0) throw InvalidArgument("qfact: negative argument " + std::to_string(m));
  Scalar out(1);
  for (int k = 2; k <= m; ++k) out *= qint(k, base);
  return out;
}

Scalar qbinom(const UpperArg& n, int d, QBase base) {
  if (d < 0) return Scalar();
  if (d == 0) return Scalar(1);
  const int e = base.exponent();
  if (n.is_concrete() && n.offset >= 0 && n.offset < d) return Scalar();

  thread_local std::map<Key, Scalar> cache;
  const Key key{n.lambda_coeff, n.offset, d, e};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  LaurentPoly num(1);
  LaurentPoly den(1);
  for (int k = 0; k < d; ++k) {
    num *= qdiff(n - k, e);
    den *= qdiff(UpperArg(k + 1), e);
  }
  Scalar out = Scalar::fraction(num, den);
  if (n.is_concrete() && !out.is_polynomial()) throw std::logic_error("qbinom: denominator did not cancel");
  cache.emplace(key, out);
  return out;
}

}  // namespace iserre
