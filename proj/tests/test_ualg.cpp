#include <doctest.h>

#include <random>

#include "iserre/errors.hpp"
#include "iserre/identities.hpp"
#include "iserre/qcomb.hpp"
#include "iserre/ualg.hpp"

using namespace iserre;

namespace {

const StarWeight W0{Parity::Even, 0};
const StarWeight W1{Parity::Odd, 0};

CartanData cartan(int e1, int e2, int a12, int a21) { return {e1, e2, a12, a21}; }

NormalMonomial mono(int a, int b, bool f2, int c, StarWeight w = W0) { return {a, b, f2, c, w}; }

StarWeight random_weight(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> off(-3, 3), coin(0, 1);
  return {coin(rng) ? Parity::Odd : Parity::Even, off(rng)};
}

}  // namespace

TEST_CASE("Cartan data validation") {
  CHECK_NOTHROW(cartan(2, 1, -1, -2).validate());
  CHECK_THROWS_AS(cartan(1, 1, -1, -2).validate(), InvalidParams);
  CHECK_THROWS_AS(cartan(1, 1, 0, -1).validate(), InvalidParams);
  CHECK_THROWS_AS(cartan(0, 1, -1, -1).validate(), InvalidParams);
  CHECK_THROWS_AS(cartan(1, 1, 1, 1).validate(), InvalidParams);
}

TEST_CASE("generator actions") {
  const CartanData cd = CartanData::from_a12(-1);
  StratumElement one = StratumElement::unit(W0);
  CHECK(act_B1(cd, one).to_string() == "(1)*F1^(1)1*_{2L} + (1*q^-1*L^-2)*E1^(1)1*_{2L}");
  CHECK(act_B1(cd, StratumElement()).is_zero());
  CHECK(act_E1(cd, 1, act_E1(cd, 1, one)) == StratumElement::monomial(mono(2, 0, false, 0), qint(2)));
  // F E 1_{2L} = E F 1_{2L} - [2L] 1_{2L}
  StratumElement fe = act_F1(cd, 1, act_E1(cd, 1, one));
  CHECK(fe.coeff(mono(1, 1, false, 0)) == Scalar(1));
  CHECK(fe.coeff(mono(0, 0, false, 0)) == -qint(UpperArg(2, 0)));
  CHECK(fe.size() == 2);
  CHECK(act_E1(cd, 1, act_F1(cd, 1, one)) == StratumElement::monomial(mono(1, 1, false, 0)));
  StratumElement f2 = act_F2(cd, one);
  CHECK(f2 == StratumElement::monomial(mono(0, 0, true, 0)));
  CHECK(left_offset(f2.terms().begin()->first, cd) == 1);
  CHECK_THROWS_AS(act_F2(cd, f2), InvalidArgument);
}

TEST_CASE("q-Serre rewrite") {
  const CartanData cd = CartanData::from_a12(-1);
  StratumElement x = StratumElement::monomial(mono(0, 0, true, 2));
  StratumElement expect = StratumElement::monomial(mono(0, 1, true, 1)) - StratumElement::monomial(mono(0, 2, true, 0));
  CHECK(reduce_qserre(cd, x) == expect);
  StratumElement normal = StratumElement::monomial(mono(1, 2, true, 1), qint(3));
  CHECK(reduce_qserre(cd, normal) == normal);
  for (int a12 = 0; a12 >= -4; --a12) {
    const CartanData c = CartanData::from_a12(a12);
    const int M = c.serre_length();
    StratumElement s;
    for (int n = 0; n <= M; ++n) s.add(mono(0, n, true, M - n), Scalar(n % 2 == 0 ? 1 : -1));
    CHECK(reduce_qserre(c, s).is_zero());
  }
  // a higher exponent stays integral
  StratumElement y = reduce_qserre(cd, StratumElement::monomial(mono(0, 0, true, 3)));
  for (const auto& [m, k] : y.terms()) CHECK(k.is_polynomial());
  CHECK(y.coeff(mono(0, 3, true, 0)) == -qint(2));
}

TEST_CASE("idivided powers") {
  const CartanData cd = CartanData::from_a12(-1);
  StratumElement one = StratumElement::unit(W0);
  CHECK(idp_engine(cd, 0, Parity::Odd, W0) == one);
  CHECK(expand_idp_closed(cd, 0, Parity::Odd, W0) == one);
  StratumElement b1 = StratumElement::monomial(mono(0, 1, false, 0)) +
                      StratumElement::monomial(mono(1, 0, false, 0), qpower(UpperArg(-2, -1)));
  CHECK(idp_engine(cd, 1, Parity::Even, W0) == b1);
  CHECK(expand_idp_closed(cd, 1, Parity::Even, W0) == b1);
  StratumElement two = act_B1(cd, act_B1(cd, one)) *= qint(2).inv();
  CHECK(two == expand_idp_closed(cd, 2, Parity::Even, W0));
  StratumElement odd_two = StratumElement::unit(W1);
  odd_two = act_B1(cd, act_B1(cd, odd_two)) - odd_two;
  CHECK((odd_two *= qint(2).inv()) == idp_engine(cd, 2, Parity::Odd, W1));
  CHECK_THROWS_AS(idp_engine(cd, 1, Parity::Odd, W0), ParityMismatch);
  CHECK_THROWS_AS(expand_idp_closed(cd, 3, Parity::Even, W1), ParityMismatch);
}

TEST_CASE("closed-form expansion agrees with the engine") {
  for (int eps : {1, 2}) {
    const CartanData cd{eps, 1, -1, -eps};
    for (int n = 0; n <= 8; ++n)
      for (Parity p : {Parity::Even, Parity::Odd})
        for (Parity stratum : {Parity::Even, Parity::Odd})
          for (int off = -4; off <= 4; ++off) {
            const StarWeight w{stratum, off};
            if (w.value_parity() != p) continue;
            CHECK_MESSAGE(idp_engine(cd, n, p, w) == expand_idp_closed(cd, n, p, w), "n=", n, " off=", off);
          }
  }
}

TEST_CASE("iSerre identities") {
  for (int a12 = 0; a12 >= -6; --a12) {
    const CartanData cd = CartanData::from_a12(a12);
    for (SerreCase c : cases_for(a12)) {
      Report r = iserre_check(cd, c);
      CHECK_MESSAGE(r.pass, a12, " ", to_string(c));
    }
  }
  CHECK(iserre_check(cartan(2, 1, -1, -2), SerreCase::OE).pass);
  CHECK(iserre_check(cartan(2, 1, -1, -2), SerreCase::EO).pass);
  CHECK(iserre_check(cartan(1, 3, -3, -1), SerreCase::EO).pass);
  CHECK_THROWS_AS(iserre_check(CartanData::from_a12(-2), SerreCase::OE), InvalidArgument);
  CHECK(parse_case("OO") == SerreCase::OO);
  CHECK_THROWS_AS(parse_case("XY"), InvalidArgument);
}

TEST_CASE("single interior term is nonzero") {
  // B F2 B 1*_{2L} with a12 = -1, expanded by hand
  const CartanData cd = CartanData::from_a12(-1);
  StratumElement right = act_F2(cd, idp_engine(cd, 1, Parity::Even, W0));
  StratumElement x = apply_idp(cd, 1, Parity::Odd, right);
  const Scalar l2 = qpower(UpperArg(-2, 0));
  StratumElement expect;
  expect.add(mono(0, 1, true, 1), Scalar(1));
  expect.add(mono(1, 0, true, 1), l2);
  expect.add(mono(1, 1, true, 0), Scalar::q_pow(-1) * l2);
  expect.add(mono(0, 0, true, 0), -Scalar::q_pow(-1) * l2 * qint(UpperArg(2, 1)));
  expect.add(mono(2, 0, true, 0), qint(2) * Scalar::q_pow(-5) * l2 * l2);
  CHECK(x == expect);
}

TEST_CASE("coefficient bridge") {
  for (int a12 = -1; a12 >= -4; --a12) {
    const CartanData cd = CartanData::from_a12(a12);
    for (SerreCase c : cases_for(a12)) {
      Suite s = coefficient_bridge_check(cd, c);
      CHECK(s.rows.size() > 2);
      const Report* f = s.first_failure();
      CHECK_MESSAGE(f == nullptr, a12, " ", to_string(c), " ", (f ? f->args.dump() + " " + *f->witness : ""));
    }
  }
  const QBase q1{1, false};
  CHECK(extract_S(SerreCase::EO, 1, 1, 1, 2, q1) ==
        Scalar::q_pow(-4) * extract_S(SerreCase::EE, 1, 1, 1, 2, q1));
  CHECK_THROWS_AS(extract_S(SerreCase::EE, 0, 0, 0, 1, q1), InvalidArgument);
  auto [te, to] = eval_T_parts(UpperArg(0, 3), 2, 2, q1);
  CHECK(te == eval_T_parts({3, 2, 2}).first);
  CHECK(to == eval_T_parts({3, 2, 2}).second);
}

TEST_CASE("involution in rank one") {
  Suite s = varpi_check_rank1(4);
  CHECK(s.rows.size() > 20);
  const Report* f = s.first_failure();
  CHECK_MESSAGE(f == nullptr, (f ? f->args.dump() + " " + *f->witness : ""));
  CHECK(varpi_check_rank1(3, cartan(2, 1, -1, -2)).pass());
  const CartanData cd = CartanData::from_a12(-1);
  CHECK_THROWS_AS(varpi_concrete(cd, act_B1(cd, StratumElement::unit(W0))), InvalidArgument);
}

TEST_CASE("confluence of rewriting") {
  std::mt19937_64 rng(2024);
  for (int a12 : {-1, -2, -3}) {
    const CartanData cd = CartanData::from_a12(a12);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
      Word w = random_word(rng, 5, 3, true);
      StarWeight wt = random_weight(rng);
      StratumElement ref = normalize_by_actions(cd, w, wt);
      if (normalize_by_rewriting(cd, w, wt, &rng) != ref) ++mismatches;
      if (i % 10 == 0 && normalize_by_rewriting(cd, w, wt) != ref) ++mismatches;
    }
    CHECK_MESSAGE(mismatches == 0, "a12=", a12);
  }
}

TEST_CASE("associativity of the action") {
  std::mt19937_64 rng(7);
  const CartanData cd = CartanData::from_a12(-2);
  for (int i = 0; i < 200; ++i) {
    Word u = random_word(rng, 3, 3, false), v = random_word(rng, 3, 3, true);
    StarWeight wt = random_weight(rng);
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    StratumElement z = normalize_by_actions(cd, v, wt);
    StratumElement stepwise;
    for (const auto& [m, k] : z.terms()) {
      StratumElement part = StratumElement::monomial(m, k);
      for (auto it = u.rbegin(); it != u.rend(); ++it)
        part = it->gen == Gen::E1 ? act_E1(cd, it->power, part) : act_F1(cd, it->power, part);
      stepwise += part;
    }
    CHECK_MESSAGE(stepwise == normalize_by_rewriting(cd, uv, wt, &rng), to_string(uv));
  }
}

TEST_CASE("weight conservation") {
  std::mt19937_64 rng(99);
  const CartanData cd = CartanData::from_a12(-3);
  for (int i = 0; i < 200; ++i) {
    Word w = random_word(rng, 5, 3, true);
    StarWeight wt = random_weight(rng);
    int expected = wt.offset;
    for (const Letter& l : w)
      expected += l.gen == Gen::E1 ? 2 * l.power : l.gen == Gen::F1 ? -2 * l.power : -cd.a12;
    const StratumElement x = normalize_by_actions(cd, w, wt);
    for (const auto& [m, k] : x.terms()) {
      CHECK(m.weight == wt);
      CHECK(left_offset(m, cd) == expected);
      if (m.hasF2) CHECK(m.c <= -cd.a12);
      else CHECK(m.c == 0);
    }
  }
}

TEST_CASE("integrality at concrete weights") {
  std::mt19937_64 rng(31);
  for (int a12 : {-1, -2, -3}) {
    const CartanData cd = CartanData::from_a12(a12);
    for (int i = 0; i < 100; ++i) {
      Word w = random_word(rng, 5, 3, true);
      StarWeight wt = random_weight(rng);
      StratumElement x = normalize_by_actions(cd, w, wt);
      for (int lam = -2; lam <= 2; ++lam) {
        const StratumElement y = specialize_lambda(x, lam);
        for (const auto& [m, k] : y.terms()) CHECK(k.is_polynomial());
      }
    }
  }
}

TEST_CASE("degree cap") {
  const CartanData cd = CartanData::from_a12(-1);
  set_degree_cap(4);
  CHECK_THROWS_AS(act_E1(cd, 5, StratumElement::unit(W0)), DegreeCapExceeded);
  CHECK_NOTHROW(act_E1(cd, 4, StratumElement::unit(W0)));
  set_degree_cap(64);
  CHECK(degree_cap() == 64);
  CHECK_THROWS_AS(set_degree_cap(0), InvalidArgument);
}
