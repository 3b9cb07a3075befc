#include <random>

#include "doctest.h"
#include "iserre/errors.hpp"
#include "iserre/qcomb.hpp"

using namespace iserre;

TEST_CASE("qint") {
  CHECK(qint(2) == Scalar::parse("q + q^-1"));
  CHECK(qint(0).is_zero());
  for (int n = 1; n <= 20; ++n) CHECK(qint(-n) == -qint(n));
  CHECK(qint(3, {2, false}) == Scalar::parse("q^4 + 1 + q^-4"));
  CHECK(qint(2, {1, true}) == Scalar::parse("q^2 + q^-2"));
  Scalar sym = qint(UpperArg(1, 0));
  CHECK(sym * qint(2) == qint(UpperArg(1, 1)) + qint(UpperArg(1, -1)));
}

TEST_CASE("qfact") {
  CHECK(qfact(0) == Scalar(1));
  CHECK(qfact(2) == Scalar::parse("q + q^-1"));
  CHECK(qfact(3) == Scalar::parse("q^3 + 2*q + 2*q^-1 + q^-3"));
  CHECK_THROWS_AS(qfact(-1), InvalidArgument);
}

TEST_CASE("qbinom") {
  for (int n = -5; n <= 5; ++n) CHECK(qbinom(n, 0) == Scalar(1));
  CHECK(qbinom(UpperArg(2, 3), 0) == Scalar(1));
  CHECK(qbinom(2, 1) == Scalar::parse("q + q^-1"));
  for (int d = 0; d <= 8; ++d) CHECK(qbinom(-1, d) == Scalar(d % 2 == 0 ? 1 : -1));
  CHECK(qbinom(3, -1).is_zero());
  for (int n = 0; n < 6; ++n)
    for (int d = n + 1; d < 8; ++d) CHECK(qbinom(n, d).is_zero());
  CHECK(qbinom(4, 2) == Scalar::parse("q^4 + q^2 + 2 + q^-2 + q^-4"));
  for (int n = -6; n <= 6; ++n)
    for (int d = 0; d <= 5; ++d) CHECK(qbinom(n, d).bar() == qbinom(n, d));
}

TEST_CASE("symbolic qbinom specializes to the concrete one") {
  for (int lc : {-2, -1, 1, 2})
    for (int off = -3; off <= 3; ++off)
      for (int d = 0; d <= 4; ++d) {
        Scalar b = qbinom(UpperArg(lc, off), d, {1, true});
        Scalar at = b.substitute_lambda(2);
        CHECK(at == qbinom(2 * lc + off, d, {1, true}));
      }
}

TEST_CASE("Pascal identities") {
  std::mt19937_64 rng(7);
  auto check = [](const UpperArg& m, int t) {
    Scalar lhs = qbinom(m, t);
    Scalar r1 = qpower(UpperArg(-t)) * qbinom(m - 1, t) + qpower(m - t) * qbinom(m - 1, t - 1);
    Scalar r2 = qpower(UpperArg(t)) * qbinom(m - 1, t) + qpower(UpperArg(-m.lambda_coeff, t - m.offset)) * qbinom(m - 1, t - 1);
    CHECK(lhs == r1);
    CHECK(lhs == r2);
  };
  for (int i = 0; i < 60; ++i) check(UpperArg(static_cast<int>(rng() % 21) - 10), static_cast<int>(rng() % 7));
  for (int lc : {-2, 1, 3})
    for (int t = 0; t <= 4; ++t) check(UpperArg(lc, static_cast<int>(rng() % 9) - 4), t);
}
