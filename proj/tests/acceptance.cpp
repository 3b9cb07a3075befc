// Acceptance suite: one PASS/FAIL line per criterion, exact equality throughout.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "iserre/bfree.hpp"
#include "iserre/cli.hpp"
#include "iserre/errors.hpp"
#include "iserre/identities.hpp"
#include "iserre/ualg.hpp"

using namespace iserre;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  long checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
  void expect(const Report& r) { expect(r.pass, r.claim + " " + r.args.dump() + (r.witness ? " witness " + *r.witness : "")); }
  void expect(const Suite& s) {
    for (const auto& r : s.rows) expect(r);
  }
};

int pick(std::mt19937_64& rng, int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); }

Scalar q(int k) { return Scalar::q_pow(k); }
Scalar br(int n) { return qint(n); }
Scalar qs() { return q(1) * Scalar::sigma(); }
FreePoly word(std::vector<int> w) { return FreePoly::monomial({std::move(w), {}}); }

Outcome c1_T_grid() {
  Outcome o;
  for (int w = -8; w <= 8; ++w)
    for (int u = 0; u <= 6; ++u)
      for (int l = 0; l <= 6; ++l) {
        if (u == 0 && l == 0) continue;
        const Scalar t = eval_T({w, u, l});
        o.expect(t.is_zero(), "T(" + std::to_string(w) + "," + std::to_string(u) + "," + std::to_string(l) + ") = " + t.to_string());
      }
  return o;
}

Outcome c2_recursions() {
  Outcome o;
  for (Rule rule : all_rules()) {
    std::mt19937_64 rng(1000 + static_cast<int>(rule));
    const bool h_rule = rule == Rule::Hswap || rule == Rule::Hp1 || rule == Rule::Hp2;
    for (int i = 0; i < 200; ++i) {
      const GArgs a{pick(rng, -5, 5), pick(rng, h_rule ? 1 : 0, 4), pick(rng, 0, 4),
                    pick(rng, -5, 5), pick(rng, -5, 5), pick(rng, -5, 5)};
      o.expect(check_recursion(rule, a, pick(rng, -2, 2)));
    }
  }
  return o;
}

Outcome c3_G00_equals_H() {
  Outcome o;
  for (int u = 0; u <= 5; ++u)
    for (int p1 = -4; p1 <= 4; ++p1) {
      const Scalar closed = q(2 * u + 2 * u * p1) * qbinom(p1, u, QBase{1, true});
      o.expect(eval_H(u, p1, 0) == closed, "H closed form at u=" + std::to_string(u) + " p1=" + std::to_string(p1));
      for (int w = -6; w <= 6; ++w) {
        o.expect(eval_G00(w, u, p1, 0) == closed, "G00 closed form at w=" + std::to_string(w));
        for (int p2 = -4; p2 <= 4; ++p2)
          o.expect(eval_G00(w, u, p1, p2) == eval_H(u, p1, p2),
                   "G00 != H at w=" + std::to_string(w) + " u=" + std::to_string(u) + " p=" + std::to_string(p1) +
                       "," + std::to_string(p2));
      }
    }
  return o;
}

Outcome c4_replay() {
  Outcome o;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const GArgs a{pick(rng, -5, 5), pick(rng, 0, 4), pick(rng, 1, 3), pick(rng, -5, 5), pick(rng, -5, 5), pick(rng, -5, 5)};
    const DerivationTrace tr = replay_theorem_G(a);
    const std::string where = to_json(a).dump();
    o.expect(tr.pass && tr.cancels, "trace does not close at " + where);
    o.expect(tr.start_value == eval_G(a) && tr.start_value.is_zero(), "trace start differs from G at " + where);
    for (const auto& s : tr.steps) o.expect(s.matches && s.value == tr.start_value, "step " + s.rule + " at " + where);
  }
  return o;
}

Outcome c5_idp_closed_form() {
  Outcome o;
  for (const CartanData& cd : {CartanData::from_a12(-1), CartanData{2, 1, -1, -2}})
    for (int m = 0; m <= 8; ++m)
      for (Parity p : {Parity::Even, Parity::Odd})
        for (Parity stratum : {Parity::Even, Parity::Odd})
          for (int off = -4; off <= 4; ++off) {
            const StarWeight w{stratum, off};
            if (w.value_parity() != p) continue;
            o.expect(idp_engine(cd, m, p, w) == expand_idp_closed(cd, m, p, w),
                     "m=" + std::to_string(m) + " parity " + to_string(p) + " offset " + std::to_string(off));
          }
  return o;
}

Outcome c6_iserre() {
  Outcome o;
  for (int a : {-2, -4, -6})
    for (SerreCase c : {SerreCase::EE, SerreCase::OO}) o.expect(iserre_check(CartanData::from_a12(a), c));
  for (int a : {-1, -3, -5})
    for (SerreCase c : {SerreCase::OE, SerreCase::EO}) o.expect(iserre_check(CartanData::from_a12(a), c));
  return o;
}

Outcome c7_bridge() {
  Outcome o;
  for (int a = -1; a >= -4; --a)
    for (SerreCase c : cases_for(a)) o.expect(coefficient_bridge_check(CartanData::from_a12(a), c));
  return o;
}

Outcome c8_conversions() {
  Outcome o;
  o.expect(convert_to_monomial_form(-1) == qs() * word({1}), "a12 = -1");
  o.expect(convert_to_monomial_form(-2) == (Scalar(-1) * pow(br(2), 2) * qs()) * (word({0, 1}) - word({1, 0})), "a12 = -2");
  FreePoly e3 = (Scalar(-1) * br(2) * (br(2) * br(4) + q(2) + q(-2)) * qs()) * word({0, 1, 0});
  e3 += ((pow(br(3), 2) + Scalar(1)) * qs()) * (word({0, 0, 1}) + word({1, 0, 0}));
  e3 -= (pow(br(3), 2) * pow(qs(), 2)) * word({1});
  o.expect(convert_to_monomial_form(-3) == e3, "a12 = -3");
  const Scalar two_sq = qint(2, QBase{1, true});
  FreePoly e4 = (Scalar(-1) * pow(br(2), 2) * (Scalar(1) + pow(two_sq, 2)) * qs()) * (word({0, 0, 0, 1}) - word({1, 0, 0, 0}));
  e4 += (pow(br(2), 2) * br(5) * br(3) * qs()) * (word({0, 0, 1, 0}) - word({0, 1, 0, 0}));
  e4 += (pow(br(2), 2) * pow(br(4), 2) * pow(qs(), 2)) * (word({0, 1}) - word({1, 0}));
  o.expect(convert_to_monomial_form(-4) == e4, "a12 = -4");
  return o;
}

Outcome c9_parity_independence() {
  Outcome o;
  for (int a = 0; a >= -6; --a) o.expect(parity_independence_check(a));
  return o;
}

Outcome c10_structural() {
  Outcome o;
  for (int a = 0; a >= -6; --a) o.expect(varpi_serre_check(CartanData::from_a12(a)));
  o.expect(varpi_check_rank1(6));
  for (int a = 0; a >= -4; --a) o.expect(bar_check(IqgParams::split_rank2(a)));
  for (const char* text : {"cartan = 2 0; 0 2\ntau = 2 1\nsigma_bar = s\n",
                           "cartan = 2 -1; -1 2\ntau = 2 1\nsigma = s; q*s\nsigma_bar = s\n",
                           "cartan = 2 -1 0; -1 2 -1; 0 -1 2\ntau = 3 2 1\nsigma = 1; s; 1\nsigma_bar = q^2*s\n"})
    o.expect(bar_check(params_from_kv(parse_kv(text))));
  IqgParams control = IqgParams::split_rank2(-1);
  control.sigma_bar = q(4) * Scalar::sigma();
  o.expect(!bar_check(control).pass(), "negative control passed the bar check");
  for (int a = 0; a >= -4; --a) o.expect(rescale_check(a));
  return o;
}

Outcome c11_confluence() {
  Outcome o;
  std::mt19937_64 rng(11);
  for (int a : {-1, -2, -3}) {
    const CartanData cd = CartanData::from_a12(a);
    for (int i = 0; i < 1000; ++i) {
      const Word w = random_word(rng, 5, 3, true);
      const StarWeight wt{pick(rng, 0, 1) ? Parity::Odd : Parity::Even, pick(rng, -3, 3)};
      const StratumElement ref = normalize_by_actions(cd, w, wt);
      o.expect(normalize_by_rewriting(cd, w, wt, &rng) == ref, "a12=" + std::to_string(a) + " word " + to_string(w));
    }
  }
  return o;
}

Outcome c12_plumbing() {
  Outcome o;
  auto run = [](std::vector<std::string> args, std::string* out = nullptr) {
    std::ostringstream os, es;
    const int code = cli::run(args, os, es);
    if (out) *out = os.str();
    return code;
  };
  std::string first, second;
  o.expect(run({"all", "--format", "json", "--seed", "2024"}, &first) == 0, "all did not exit 0");
  run({"all", "--format", "json", "--seed", "2024"}, &second);
  o.expect(first == second, "all reports differ between runs");
  std::string faulty;
  o.expect(run({"identity", "t", "--w", "-2:2", "--u", "0:2", "--l", "0:2", "--fault", "t-sign", "--format", "json"}, &faulty) == 1,
           "mutated T did not exit 1");
  bool witnessed = false;
  const Json report = Json::parse(faulty);
  for (const auto& row : report["rows"])
    if (!row["pass"].get<bool>() && row.contains("witness") && row["witness"] != "0" && !row["witness"].get<std::string>().empty())
      witnessed = true;
  o.expect(witnessed, "no nonzero witness for the mutated T");
  o.expect(run({"identity", "t", "--w", "0:0", "--u", "0:0", "--l", "0:0"}) == 2, "usage error did not exit 2");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"T vanishes on w in [-8,8], u, ell in [0,6]", c1_T_grid},
      {"recursions, 200 samples per rule", c2_recursions},
      {"G00 = H and the p2 = 0 closed form", c3_G00_equals_H},
      {"proof replay on 100 sampled arguments", c4_replay},
      {"idivided power engine = closed form, m <= 8", c5_idp_closed_form},
      {"iSerre relation, even a12 in EE/OO, odd a12 in OE/EO", c6_iserre},
      {"coefficient bridge, a12 in [-4,-1]", c7_bridge},
      {"monomial-form conversions, a12 = -1..-4", c8_conversions},
      {"parity independence, a12 in [-6,0]", c9_parity_independence},
      {"involution, bar, rescaling checks", c10_structural},
      {"confluence, 1000 words per a12", c11_confluence},
      {"plumbing: exit codes, witness, determinism", c12_plumbing},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2zu: %s (%ld checks, %.1fs)%s%s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.checks, s, o.pass ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
