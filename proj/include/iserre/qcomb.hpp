#pragma once

#include "iserre/scalar.hpp"

namespace iserre {

/// Upper argument lambda_coeff * lambda + offset of a q-integer or q-binomial.
struct UpperArg {
  int lambda_coeff = 0;
  int offset = 0;

  UpperArg() = default;
  UpperArg(int n) : offset(n) {}  // NOLINT(google-explicit-constructor)
  UpperArg(int lc, int off) : lambda_coeff(lc), offset(off) {}

  UpperArg operator+(int k) const { return {lambda_coeff, offset + k}; }
  UpperArg operator-(int k) const { return {lambda_coeff, offset - k}; }
  bool is_concrete() const { return lambda_coeff == 0; }
};

/// Base q^eps, or (q^eps)^2 when squared.
struct QBase {
  int eps = 1;
  bool squared = false;

  int exponent() const { return squared ? 2 * eps : eps; }
  QBase sq() const { return {eps, true}; }
};

/// Q^n for the effective base Q: L^(e*lc) q^(e*off).
Scalar qpower(const UpperArg& n, QBase base = {});

Scalar qint(const UpperArg& n, QBase base = {});
Scalar qfact(int m, QBase base = {});
/// q-binomial with concrete lower argument; zero for d < 0.
Scalar qbinom(const UpperArg& n, int d, QBase base = {});

}  // namespace iserre
