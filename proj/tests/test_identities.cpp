#include <doctest.h>

#include <random>

#include "iserre/errors.hpp"
#include "iserre/identities.hpp"
#include "iserre/qcomb.hpp"

using namespace iserre;

// Golden values below come from tests/oracle/identities_oracle.py.
TEST_CASE("T golden values") {
  auto [ev, od] = eval_T_parts({0, 1, 1});
  CHECK(ev == Scalar::parse("-q^-2"));
  CHECK(od == Scalar::parse("-q^-2"));
  CHECK(eval_T({0, 1, 1}).is_zero());
  CHECK(eval_T_parts({3, 2, 2}).first ==
        Scalar::parse("q^10 + q^8 + 2*q^6 + 2*q^4 + 3*q^2 + 3 + 2*q^-2 + 2*q^-4 + q^-6 + q^-8"));
  auto [e2, o2] = eval_T_parts({-2, 3, 1});
  CHECK(e2 == Scalar::parse("-q^4 - q^2 - 2 - 2*q^-2 - 3*q^-4 - 4*q^-6 - 3*q^-8 - 3*q^-10 - 2*q^-12 - 2*q^-14 - q^-16 - q^-18"));
  CHECK(e2 == o2);
  CHECK(eval_T({0, 0, 1}).is_zero());
  CHECK_THROWS_AS(eval_T({1, 0, 0}), InvalidArgument);
}

TEST_CASE("T vanishes on ell = 0 slice") {
  for (int w = -8; w <= 8; ++w)
    for (int u = 1; u <= 6; ++u) CHECK(eval_T({w, u, 0}).is_zero());
}

TEST_CASE("H and G golden values") {
  CHECK(eval_H(1, 1, 0) == Scalar::q_pow(4));
  CHECK(eval_H(2, 1, 2) == Scalar::parse("q^10 + q^8 + q^6"));
  CHECK(eval_G({0, 1, 1, 0, 0, 0}).is_zero());
  CHECK(eval_G0(1, 2, 1, 0, -1) == Scalar::parse("q^4 + 1 + q^-4"));
  CHECK(eval_G({3, -1, 2, 0, 0, 0}).is_zero());
  for (int p1 = -3; p1 <= 3; ++p1)
    for (int p2 = -3; p2 <= 3; ++p2) CHECK(eval_H(0, p1, p2) == Scalar(1));
}

TEST_CASE("H closed form on p2 = 0") {
  for (int u = 0; u <= 5; ++u)
    for (int p1 = -3; p1 <= 6; ++p1)
      CHECK(eval_H(u, p1, 0) == Scalar::q_pow(2 * u + 2 * u * p1) * qbinom(p1, u, {1, true}));
}

TEST_CASE("G specializes to H and T") {
  for (int u = 0; u <= 5; ++u)
    for (int p1 = -3; p1 <= 3; ++p1)
      for (int p2 = -3; p2 <= 3; ++p2) CHECK(eval_G({0, u, 0, 0, p1, p2}) == eval_H(u, p1, p2));
  for (int w = -3; w <= 3; ++w)
    for (int u = 0; u <= 3; ++u)
      for (int l = 0; l <= 3; ++l) {
        if (u == 0 && l == 0) continue;
        Scalar link = Scalar::q_pow(w * u - u * u) * eval_G({w, u, l, -l, u - 1, -l});
        if (w % 2 != 0) link = -link;
        CHECK(eval_T({w, u, l}) == link);
      }
}

TEST_CASE("G vanishes for ell >= 1") {
  std::mt19937_64 rng(11);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
  for (int i = 0; i < 40; ++i) {
    GArgs a{pick(-4, 4), pick(0, 3), pick(1, 4), pick(-4, 4), pick(-4, 4), pick(-4, 4)};
    CHECK(eval_G(a).is_zero());
  }
}

TEST_CASE("recursions") {
  CHECK(check_recursion(Rule::Gw1, {1, 2, 1, 0, 0, 0}).pass);
  Report r = check_recursion(Rule::Gk, {2, 3, 1, 1, 0, 2}, 0);
  CHECK(r.pass);
  CHECK(r.args["k"] == 0);
  for (int w = -3; w <= 3; ++w)
    for (int u = 0; u <= 3; ++u)
      for (int l = 0; l <= 3; ++l) CHECK(check_recursion(Rule::Godd, {w, u, l, w % 3, -w, 1}).pass);
  std::mt19937_64 rng(5);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
  for (Rule rule : all_rules())
    for (int i = 0; i < 15; ++i) {
      GArgs a{pick(-5, 5), pick(0, 4), pick(0, 3), pick(-5, 5), pick(-5, 5), pick(-5, 5)};
      if (a.u == 0 && (rule == Rule::Hswap || rule == Rule::Hp1 || rule == Rule::Hp2)) a.u = 1;
      Report rep = check_recursion(rule, a, pick(-2, 2));
      CHECK_MESSAGE(rep.pass, rule_name(rule), " ", rep.args.dump());
    }
  CHECK_THROWS_AS(check_recursion(Rule::Hp1, {0, 0, 0, 0, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(parse_rule("nope"), InvalidArgument);
  CHECK(parse_rule("Gx+1") == Rule::Gx1);
}

TEST_CASE("fault hook flips the odd-sum sign") {
  set_fault(Fault::TSign);
  CHECK_FALSE(eval_T({0, 1, 1}).is_zero());
  set_fault(Fault::None);
  CHECK(eval_T({0, 1, 1}).is_zero());
}

TEST_CASE("proof replay") {
  DerivationTrace t1 = replay_theorem_G({0, 1, 1, 0, 0, 0});
  CHECK(t1.pass);
  REQUIRE(t1.steps.size() == 4);
  CHECK(t1.steps.back().rule == "G00constw");
  CHECK(t1.steps.back().state.size() == 2);
  CHECK(t1.steps.back().state[0].to_string() == "(1*q^1)*H(1;0,0)");

  DerivationTrace t2 = replay_theorem_G({0, 1, 1, 1, 0, 0});
  CHECK(t2.pass);
  REQUIRE(t2.steps.size() == 5);
  CHECK(t2.steps[3].rule == "Godd");

  DerivationTrace t3 = replay_theorem_G({2, 3, 2, -1, 1, -2});
  CHECK(t3.pass);
  CHECK(t3.start_value == eval_G({2, 3, 2, -1, 1, -2}));

  for (int w = -2; w <= 2; ++w)
    for (int u = 0; u <= 3; ++u)
      for (int l = 0; l <= 2; ++l) {
        if (u == 0 && l == 0) continue;
        CHECK(replay_theorem_T({w, u, l}).pass);
      }
  CHECK_THROWS_AS(replay_theorem_G({0, 1, 0, 0, 0, 0}), InvalidArgument);
}
