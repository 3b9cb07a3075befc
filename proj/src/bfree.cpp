#include "iserre/bfree.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "iserre/errors.hpp"

namespace iserre {

namespace {

using Univariate = std::vector<Scalar>;  // coefficient of B^k at index k

Univariate times_b2_minus(const Univariate& p, const Scalar& c) {
  Univariate out(p.size() + 2);
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k + 2] += p[k];
    if (!c.is_zero()) out[k] -= c * p[k];
  }
  return out;
}

Univariate idp_univariate(int m, Parity parity, const Scalar& qsigma, QBase base) {
  if (m < 0) throw InvalidArgument("negative idivided power");
  Univariate p{Scalar(1)};
  for (int j = 1; j <= m / 2; ++j) {
    const int k = parity == Parity::Odd ? 2 * j - 1 : (m % 2 == 1 ? 2 * j : 2 * j - 2);
    p = times_b2_minus(p, qsigma * pow(qint(k, base), 2));
  }
  if (m % 2 == 1) p.insert(p.begin(), Scalar());
  const Scalar inv = qfact(m, base).inv();
  for (auto& c : p) c *= inv;
  return p;
}

Univariate divided_power(int m, QBase base) {
  Univariate p(static_cast<std::size_t>(m) + 1);
  p[static_cast<std::size_t>(m)] = qfact(m, base).inv();
  return p;
}

std::vector<int> repeat(int letter, std::size_t k) { return std::vector<int>(k, letter); }

// sum_n sign(n) * left(n) y right(M - n) in letters x, y.
FreePoly sandwich(int M, int x, int y, const std::function<Univariate(int)>& left,
                  const std::function<Univariate(int)>& right, int sign_shift, std::size_t ntorus) {
  FreePoly out;
  for (int n = 0; n <= M; ++n) {
    const Univariate l = left(n), r = right(M - n);
    const int sign = ((n + sign_shift) % 2 == 0) ? 1 : -1;
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l[i].is_zero()) continue;
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (r[j].is_zero()) continue;
        FreeMonomial m{repeat(x, i), std::vector<int>(ntorus, 0)};
        m.word.push_back(y);
        m.word.insert(m.word.end(), j, x);
        out.add(m, Scalar(sign) * l[i] * r[j]);
      }
    }
  }
  return out;
}

Parity plus(Parity p, int a) { return parity_of(a + (p == Parity::Odd ? 1 : 0)); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("not an integer: '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError("not an integer: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

RawPoly raw_from(const FreePoly& p) {
  RawPoly out;
  for (const auto& [m, c] : p.terms()) {
    RawWord w;
    for (int l : m.word) w.push_back({false, l, 1});
    for (std::size_t k = 0; k < m.torus.size(); ++k)
      if (m.torus[k] != 0) w.push_back({true, static_cast<int>(k), m.torus[k]});
    out.emplace_back(std::move(w), c);
  }
  return out;
}

std::string word_text(const Alphabet& a, const RawWord& w) {
  std::string s;
  for (const Factor& f : w) {
    if (!s.empty()) s += " ";
    s += f.torus ? a.torus[static_cast<std::size_t>(f.index)] : a.letters[static_cast<std::size_t>(f.index)];
    if (f.power != 1) s += "^" + std::to_string(f.power);
  }
  return s.empty() ? "1" : s;
}

}  // namespace

Alphabet Alphabet::plain(std::vector<std::string> letters) { return {std::move(letters), {}, {}}; }

FreePoly FreePoly::constant(const Scalar& c, std::size_t ntorus) {
  return monomial({{}, std::vector<int>(ntorus, 0)}, c);
}

FreePoly FreePoly::monomial(FreeMonomial m, const Scalar& c) {
  FreePoly p;
  p.add(m, c);
  return p;
}

FreePoly FreePoly::letter(int l, std::size_t ntorus) { return monomial({{l}, std::vector<int>(ntorus, 0)}); }

Scalar FreePoly::coeff(const FreeMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar() : it->second;
}

Scalar FreePoly::coeff(const std::vector<int>& word) const {
  for (const auto& [m, c] : terms_)
    if (m.word == word && std::all_of(m.torus.begin(), m.torus.end(), [](int x) { return x == 0; })) return c;
  return Scalar();
}

void FreePoly::add(const FreeMonomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

FreePoly& FreePoly::operator+=(const FreePoly& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

FreePoly& FreePoly::operator-=(const FreePoly& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

FreePoly& FreePoly::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

std::string FreePoly::to_string(const Alphabet& a) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : terms_) {
    if (!s.empty()) s += " + ";
    RawPoly one = raw_from(monomial(m, c));
    s += "(" + c.to_string() + ")*" + word_text(a, one.front().first);
  }
  return s;
}

Json FreePoly::to_json(const Alphabet& a) const { return iserre::to_json(a, raw_from(*this)); }

FreePoly multiply(const Alphabet& a, const FreePoly& x, const FreePoly& y) {
  FreePoly out;
  for (const auto& [mx, cx] : x.terms())
    for (const auto& [my, cy] : y.terms()) {
      if (mx.torus.size() != my.torus.size()) throw InvalidArgument("torus rank mismatch");
      int e = 0;
      for (std::size_t k = 0; k < mx.torus.size(); ++k)
        if (mx.torus[k] != 0)
          for (int l : my.word) e += mx.torus[k] * a.pass[k][static_cast<std::size_t>(l)];
      FreeMonomial m{mx.word, mx.torus};
      m.word.insert(m.word.end(), my.word.begin(), my.word.end());
      for (std::size_t k = 0; k < m.torus.size(); ++k) m.torus[k] += my.torus[k];
      out.add(m, cx * cy * Scalar::q_pow(e));
    }
  return out;
}

FreePoly bar(const FreePoly& x, const Scalar& sigma_image) {
  FreePoly out;
  for (const auto& [m, c] : x.terms()) {
    FreeMonomial n = m;
    for (int& t : n.torus) t = -t;
    out.add(n, c.bar(sigma_image));
  }
  return out;
}

FreePoly normalize(const Alphabet& a, const RawPoly& p) {
  const std::size_t nt = a.torus.size();
  FreePoly out;
  for (const auto& [w, c] : p) {
    FreePoly acc = FreePoly::constant(c, nt);
    for (const Factor& f : w) {
      FreeMonomial m{{}, std::vector<int>(nt, 0)};
      if (f.torus) {
        m.torus[static_cast<std::size_t>(f.index)] = f.power;
      } else {
        if (f.power < 0) throw InvalidArgument("negative letter power");
        m.word.assign(static_cast<std::size_t>(f.power), f.index);
      }
      acc = multiply(a, acc, FreePoly::monomial(m));
    }
    out += acc;
  }
  return out;
}

RawPoly bar(const RawPoly& p, const Scalar& sigma_image) {
  RawPoly out;
  for (const auto& [w, c] : p) {
    RawWord b = w;
    for (Factor& f : b)
      if (f.torus) f.power = -f.power;
    out.emplace_back(std::move(b), c.bar(sigma_image));
  }
  return out;
}

Json to_json(const Alphabet& a, const RawPoly& p) {
  Json terms = Json::array();
  for (const auto& [w, c] : p) {
    Json word = Json::array();
    for (const Factor& f : w) {
      std::string s = f.torus ? a.torus[static_cast<std::size_t>(f.index)] : a.letters[static_cast<std::size_t>(f.index)];
      if (f.power != 1) s += "^" + std::to_string(f.power);
      word.push_back(s);
    }
    terms.push_back(Json{{"word", word}, {"coeff", c.to_string()}});
  }
  return terms;
}

FreePoly idp_poly(int m, Parity parity, const Scalar& sigma, QBase base, int letter) {
  const Univariate u = idp_univariate(m, parity, qpower(1, base) * sigma, base);
  FreePoly out;
  for (std::size_t k = 0; k < u.size(); ++k) out.add({repeat(letter, k), {}}, u[k]);
  return out;
}

FreePoly iserre_poly(int a12, Parity p, const Scalar& sigma, QBase base) {
  if (a12 > 0) throw InvalidArgument("a12 must be nonpositive");
  const Scalar qs = qpower(1, base) * sigma;
  return sandwich(
      1 - a12, 0, 1, [&](int n) { return idp_univariate(n, plus(p, a12), qs, base); },
      [&](int n) { return idp_univariate(n, p, qs, base); }, 0, 0);
}

FreePoly serre_poly(int a12, QBase base, int x, int y) {
  const int M = 1 - a12;
  FreePoly out;
  for (int n = 0; n <= M; ++n) {
    FreeMonomial m{repeat(x, static_cast<std::size_t>(n)), {}};
    m.word.push_back(y);
    m.word.insert(m.word.end(), static_cast<std::size_t>(M - n), x);
    out.add(m, Scalar(n % 2 == 0 ? 1 : -1) * qbinom(M, n, base));
  }
  return out;
}

FreePoly convert_to_monomial_form(int a12, const Scalar& sigma, QBase base) {
  return serre_poly(a12, base) - qfact(1 - a12, base) * iserre_poly(a12, Parity::Even, sigma, base);
}

Report parity_independence_check(int a12, QBase base) {
  Json args{{"a12", a12}, {"eps", base.eps}};
  FreePoly d = iserre_poly(a12, Parity::Even, Scalar::sigma(), base) - iserre_poly(a12, Parity::Odd, Scalar::sigma(), base);
  if (d.is_zero()) return Report::ok("parity_independence", args);
  return Report::fail("parity_independence", args, d.to_string(Alphabet::plain({"B1", "B2"})));
}

Report rescale_check(int a12, QBase base) {
  Json args{{"a12", a12}, {"eps", base.eps}};
  const int D = 1 - a12;
  const Scalar a2 = qpower(1, base) * Scalar::sigma();
  for (Parity p : {Parity::Even, Parity::Odd}) {
    FreePoly dist = iserre_poly(a12, p, qpower(-1, base), base);
    FreePoly scaled;
    for (const auto& [m, c] : dist.terms()) {
      const auto d = static_cast<int>(std::count(m.word.begin(), m.word.end(), 0));
      if ((D - d) % 2 != 0) return Report::fail("rescale", args, "odd degree gap in " + std::to_string(d));
      scaled.add(m, c * pow(a2, (D - d) / 2));
    }
    FreePoly generic = iserre_poly(a12, p, Scalar::sigma(), base);
    // fix the global factor on the top-degree word B2 B1^D
    std::vector<int> top(1, 1);
    top.insert(top.end(), static_cast<std::size_t>(D), 0);
    const Scalar g = generic.coeff(top);
    const Scalar factor = g.is_zero() ? Scalar() : scaled.coeff(top) / g;
    FreePoly diff = scaled - factor * generic;
    if (factor.is_zero() || !diff.is_zero()) {
      args["parity"] = to_string(p);
      return Report::fail("rescale", args, diff.to_string(Alphabet::plain({"B1", "B2"})));
    }
  }
  return Report::ok("rescale", args);
}

Suite varpi_serre_check(const CartanData& cd) {
  cd.validate();
  const int a[2][2] = {{2, cd.a12}, {cd.a21, 2}};
  const int eps[2] = {cd.eps1, cd.eps2};
  Alphabet al{{"F1", "F2", "E1", "E2"}, {"K1", "K2"}, {}};
  al.pass.assign(2, std::vector<int>(4, 0));
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      al.pass[k][l] = -eps[k] * a[k][l];
      al.pass[k][l + 2] = eps[k] * a[k][l];
    }
  const int M = cd.serre_length();
  const QBase q1 = cd.q1();
  Suite suite;
  for (int side = 0; side < 2; ++side) {
    const int t = side == 0 ? 1 : -1;  // F K or E K^-1
    const int x = side == 0 ? 0 : 2, y = x + 1;
    FreePoly X = FreePoly::monomial({{x}, {t, 0}}, Scalar::q_pow(-cd.eps1));
    FreePoly Y = FreePoly::monomial({{y}, {0, t}}, Scalar::q_pow(-cd.eps2));
    std::vector<FreePoly> powers{FreePoly::constant(Scalar(1), 2)};
    for (int n = 1; n <= M; ++n) powers.push_back(multiply(al, powers.back(), X));
    FreePoly lhs;
    for (int n = 0; n <= M; ++n) {
      FreePoly term = multiply(al, multiply(al, powers[static_cast<std::size_t>(n)], Y),
                               powers[static_cast<std::size_t>(M - n)]);
      lhs += Scalar(n % 2 == 0 ? 1 : -1) * qbinom(M, n, q1) * term;
    }
    FreePoly rhs;
    const FreePoly plain = serre_poly(cd.a12, q1, x, y);
    for (const auto& [m, c] : plain.terms())
      rhs.add({m.word, {t * M, t}}, c * Scalar::q_pow(cd.eps1 * (cd.a12 - 1) - cd.eps2));
    Json args{{"a12", cd.a12}, {"a21", cd.a21}, {"eps1", cd.eps1}, {"eps2", cd.eps2}, {"side", side == 0 ? "F" : "E"}};
    if (lhs == rhs) suite.add(Report::ok("varpi_serre", args));
    else suite.add(Report::fail("varpi_serre", args, (lhs - rhs).to_string(al)));
  }
  return suite;
}

void IqgParams::validate() const {
  const std::size_t n = rank();
  if (n == 0) throw InvalidParams("empty Cartan matrix");
  for (const auto& row : cartan)
    if (row.size() != n) throw InvalidParams("Cartan matrix is not square");
  if (eps.size() != n || tau.size() != n || sigma.size() != n || kappa.size() != n || parity.size() != n)
    throw InvalidParams("parameter lists must have one entry per node");
  for (std::size_t i = 0; i < n; ++i) {
    if (cartan[i][i] != 2) throw InvalidParams("diagonal Cartan entries must be 2");
    if (eps[i] < 1) throw InvalidParams("symmetrizer entries must be positive");
    if (sigma[i].is_zero()) throw InvalidParams("sigma_" + std::to_string(i + 1) + " must be nonzero");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (cartan[i][j] > 0) throw InvalidParams("off-diagonal Cartan entries must be nonpositive");
      if ((cartan[i][j] == 0) != (cartan[j][i] == 0)) throw InvalidParams("a_ij = 0 must coincide with a_ji = 0");
      if (eps[i] * cartan[i][j] != eps[j] * cartan[j][i]) throw InvalidParams("Cartan matrix is not symmetrizable by eps");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (tau[i] < 0 || static_cast<std::size_t>(tau[i]) >= n) throw InvalidParams("tau out of range");
    if (tau[static_cast<std::size_t>(tau[i])] != static_cast<int>(i)) throw InvalidParams("tau is not an involution");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto ti = static_cast<std::size_t>(tau[i]);
    if (eps[ti] != eps[i]) throw InvalidParams("tau must preserve eps");
    for (std::size_t j = 0; j < n; ++j)
      if (cartan[ti][static_cast<std::size_t>(tau[j])] != cartan[i][j]) throw InvalidParams("tau is not a diagram involution");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto ti = static_cast<std::size_t>(tau[i]);
    if (!kappa[i].is_zero()) {
      if (ti != i) throw InvalidParams("kappa_" + std::to_string(i + 1) + " must vanish when tau i != i");
      for (std::size_t k = 0; k < n; ++k)
        if (static_cast<std::size_t>(tau[k]) == k && cartan[k][i] % 2 != 0)
          throw InvalidParams("kappa_" + std::to_string(i + 1) + " must vanish: <h_k, alpha_i> is odd for a fixed k");
    }
    if (ti != i && cartan[i][ti] == 0 && sigma[i] != sigma[ti])
      throw InvalidParams("sigma_i must equal sigma_{tau i} when a_{i,tau i} = 0");
  }
}

IqgParams IqgParams::split_rank2(int a12, int a21, int eps1, int eps2) {
  if (a21 == 0) a21 = a12;
  IqgParams p;
  p.cartan = {{2, a12}, {a21, 2}};
  p.eps = {eps1, eps2};
  p.tau = {0, 1};
  // q_i sigma_i = q^eps1 s on both nodes
  p.sigma = {Scalar::sigma(), Scalar::q_pow(eps1 - eps2) * Scalar::sigma()};
  p.kappa = {Scalar(), Scalar()};
  p.parity = {Parity::Even, Parity::Even};
  p.sigma_bar = Scalar::q_pow(2 * eps1) * Scalar::sigma();
  p.validate();
  return p;
}

Json Presentation::to_json() const {
  Json rels = Json::array();
  for (const Relation& r : relations) {
    Json nodes = Json::array();
    for (int i : r.nodes) nodes.push_back(i + 1);
    rels.push_back(Json{{"kind", r.kind}, {"nodes", nodes}, {"verified", r.verified}, {"terms", iserre::to_json(alphabet, r.raw)}});
  }
  return Json{{"generators", alphabet.letters}, {"torus", alphabet.torus}, {"relations", rels}};
}

Presentation emit_presentation(const IqgParams& params) {
  params.validate();
  const std::size_t n = params.rank();
  const auto& A = params.cartan;
  auto tau = [&](std::size_t i) { return static_cast<std::size_t>(params.tau[i]); };
  Presentation pres;
  for (std::size_t i = 0; i < n; ++i) pres.alphabet.letters.push_back("B" + std::to_string(i + 1));
  // one torus generator Ktilde_i Ktilde_{tau i}^-1 per orbit {i < tau i}
  std::vector<std::size_t> orbit_rep;
  std::vector<int> torus_of(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (tau(i) > i) {
      torus_of[i] = torus_of[tau(i)] = static_cast<int>(orbit_rep.size());
      orbit_rep.push_back(i);
      pres.alphabet.torus.push_back("K" + std::to_string(i + 1) + "/K" + std::to_string(tau(i) + 1));
    }
  const std::size_t nt = orbit_rep.size();
  pres.alphabet.pass.assign(nt, std::vector<int>(n, 0));
  for (std::size_t k = 0; k < nt; ++k) {
    const std::size_t i = orbit_rep[k];
    for (std::size_t j = 0; j < n; ++j) pres.alphabet.pass[k][j] = -params.eps[i] * (A[i][j] - A[tau(i)][j]);
  }
  auto letter = [](std::size_t i, int power = 1) { return Factor{false, static_cast<int>(i), power}; };
  auto torus = [](std::size_t k, int power) { return Factor{true, static_cast<int>(k), power}; };
  auto nodes = [](std::size_t i, std::size_t j) { return std::vector<int>{static_cast<int>(i), static_cast<int>(j)}; };

  for (std::size_t k = 0; k < nt; ++k) {
    pres.relations.push_back({"torus", {static_cast<int>(orbit_rep[k])}, {{{torus(k, 1), torus(k, -1)}, Scalar(1)}, {{}, Scalar(-1)}}, true});
    for (std::size_t j = 0; j < n; ++j)
      pres.relations.push_back({"weight", nodes(orbit_rep[k], j),
                                {{{torus(k, 1), letter(j)}, Scalar(1)},
                                 {{letter(j), torus(k, 1)}, -Scalar::q_pow(pres.alphabet.pass[k][j])}},
                                true});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const QBase qi{params.eps[i], false};
      const int a = A[i][j];
      if (tau(i) == i) {
        const Scalar qs = qpower(1, qi) * params.sigma[i];
        const Parity p = params.parity[i];
        FreePoly rel = sandwich(
            1 - a, static_cast<int>(i), static_cast<int>(j),
            [&](int m) { return idp_univariate(m, plus(p, a), qs, qi); },
            [&](int m) { return idp_univariate(m, p, qs, qi); }, 0, nt);
        pres.relations.push_back({"iserre", nodes(i, j), raw_from(rel), true, qfact(1 - a, qi)});
        continue;
      }
      if (a == 0 && tau(i) != j && i < j)
        pres.relations.push_back({"commutation", nodes(i, j),
                                  {{{letter(i), letter(j)}, Scalar(1)}, {{letter(j), letter(i)}, Scalar(-1)}}, true});
      if (j != tau(i)) {
        FreePoly rel = sandwich(
            1 - a, static_cast<int>(i), static_cast<int>(j), [&](int m) { return divided_power(m, qi); },
            [&](int m) { return divided_power(m, qi); }, 0, nt);
        pres.relations.push_back({"qserre", nodes(i, j), raw_from(rel), true, qfact(1 - a, qi)});
        continue;
      }
      // j = tau i != i
      FreePoly lhs = sandwich(
          1 - a, static_cast<int>(i), static_cast<int>(j), [&](int m) { return divided_power(m, qi); },
          [&](int m) { return divided_power(m, qi); }, a, nt);
      RawPoly raw = raw_from(lhs);
      const int na = -a;
      Scalar poch_minus(1), poch_plus(1);
      for (int t = 0; t < na; ++t) {
        poch_minus *= Scalar(1) - qpower(-2 * (t + 1), qi);
        poch_plus *= Scalar(1) - qpower(2 * (t + 1), qi);
      }
      const Scalar pre = (qpower(1, qi) - qpower(-1, qi)).inv();
      const Scalar bdiv = qfact(na, qi).inv();
      const int dir = i == orbit_rep[static_cast<std::size_t>(torus_of[i])] ? 1 : -1;
      const auto k = static_cast<std::size_t>(torus_of[i]);
      RawWord w1(static_cast<std::size_t>(na), letter(i)), w2 = w1;
      w1.push_back(torus(k, dir));
      w2.push_back(torus(k, -dir));
      raw.emplace_back(w1, -pre * qpower(a, qi) * poch_minus * params.sigma[tau(i)] * bdiv);
      raw.emplace_back(w2, pre * poch_plus * params.sigma[i] * bdiv);
      pres.relations.push_back({"relation5", nodes(i, j), std::move(raw), false, qfact(1 - a, qi)});
    }
  return pres;
}

Json PresentationQ1::to_json() const {
  Json rels = Json::array();
  for (const auto& r : relations) {
    Json nodes = Json::array();
    for (int i : r.nodes) nodes.push_back(i + 1);
    Json terms = Json::array();
    for (const auto& [w, c] : r.terms) {
      Json word = Json::array();
      for (const Factor& f : w) {
        std::string s = f.torus ? alphabet.torus[static_cast<std::size_t>(f.index)]
                                : alphabet.letters[static_cast<std::size_t>(f.index)];
        if (f.power != 1) s += "^" + std::to_string(f.power);
        word.push_back(s);
      }
      terms.push_back(Json{{"word", word}, {"coeff", c.get_str()}});
    }
    rels.push_back(Json{{"kind", r.kind}, {"nodes", nodes}, {"terms", terms}});
  }
  return Json{{"generators", alphabet.letters}, {"torus", alphabet.torus}, {"relations", rels}};
}

PresentationQ1 specialize_presentation_q1(const Presentation& p, const Rational& sigma_value) {
  PresentationQ1 out;
  out.alphabet = p.alphabet;
  for (const Relation& r : p.relations) {
    RationalRelation rr{r.kind, r.nodes, {}};
    for (const auto& [w, c] : r.raw) {
      Rational v = (r.monomial_scale * c).specialize_q1(sigma_value);
      if (v != 0) rr.terms.emplace_back(w, v);
    }
    out.relations.push_back(std::move(rr));
  }
  return out;
}

Suite bar_check(const IqgParams& params) {
  params.validate();
  if (!params.sigma_bar) throw InvalidParams("bar_check needs the bar image of s (sigma_bar)");
  const Scalar& img = *params.sigma_bar;
  if (img.bar(img) != Scalar::sigma()) throw InvalidParams("declared bar image of s is not involutive");
  const std::size_t n = params.rank();
  Suite suite;
  std::vector<std::string> broken;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ti = static_cast<std::size_t>(params.tau[i]);
    const Scalar& s = params.sigma[i];
    const std::string node = std::to_string(i + 1);
    if (ti == i) {
      bool linked = false;
      for (std::size_t j = 0; j < n; ++j) linked = linked || (j != i && params.cartan[i][j] != 0);
      const Scalar qs = qpower(1, {params.eps[i], false}) * s;
      if (linked && qs.bar(img) != qs) broken.push_back("(a) at node " + node + ": bar(q sigma) = " + qs.bar(img).to_string());
    } else if (params.cartan[i][ti] == 0) {
      if (s.bar(img) != s || s != params.sigma[ti]) broken.push_back("(b) at node " + node);
    } else if (params.sigma[ti] != qpower(-params.cartan[i][ti], {params.eps[i], false}) * s.bar(img)) {
      broken.push_back("(c) at node " + node);
    }
  }
  Json cargs{{"rank", n}, {"sigma_bar", img.to_string()}};
  if (broken.empty()) suite.add(Report::ok("bar_conditions", cargs));
  else suite.add(Report::fail("bar_conditions", cargs, broken.front()));

  const Presentation pres = emit_presentation(params);
  for (const Relation& r : pres.relations) {
    Json args{{"kind", r.kind}, {"nodes", Json::array()}};
    for (int i : r.nodes) args["nodes"].push_back(i + 1);
    const FreePoly p = normalize(pres.alphabet, r.raw);
    const FreePoly b = normalize(pres.alphabet, bar(r.raw, img));
    if (p == b) suite.add(Report::ok("bar", args));
    else suite.add(Report::fail("bar", args, (b - p).to_string(pres.alphabet)));
  }
  return suite;
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

IqgParams params_from_kv(const std::map<std::string, std::string>& kv) {
  static const std::set<std::string> known{"cartan", "eps",       "tau", "sigma", "kappa", "parity",
                                           "sigma_bar", "sigma_q1", "a12", "a21"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ParseError("unknown key '" + k + "'");
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto scalar = [](const std::string& s) {
    try {
      return Scalar::parse(s);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError("bad scalar '" + s + "': " + e.what());
    }
  };
  auto one_int = [](const std::string& s) {
    auto v = parse_ints(s);
    if (v.size() != 1) throw ParseError("expected one integer, got '" + s + "'");
    return v.front();
  };
  IqgParams p;
  if (auto a12 = get("a12")) {
    if (get("cartan")) throw ParseError("give either cartan or a12, not both");
    const int a = one_int(*a12);
    const int b = get("a21") ? one_int(*get("a21")) : a;
    std::vector<int> e{1, 1};
    if (auto es = get("eps")) e = parse_ints(*es);
    if (e.size() != 2) throw ParseError("eps needs two entries for a rank-2 datum");
    p = IqgParams::split_rank2(a, b, e[0], e[1]);
  } else {
    auto c = get("cartan");
    if (!c) throw ParseError("missing key 'cartan'");
    for (const std::string& row : split(*c, ';')) p.cartan.push_back(parse_ints(row));
    const std::size_t n = p.cartan.size();
    p.eps = get("eps") ? parse_ints(*get("eps")) : std::vector<int>(n, 1);
    if (auto t = get("tau")) {
      for (int x : parse_ints(*t)) p.tau.push_back(x - 1);
    } else {
      for (std::size_t i = 0; i < n; ++i) p.tau.push_back(static_cast<int>(i));
    }
    p.sigma.assign(n, Scalar::sigma());
    p.kappa.assign(n, Scalar());
    p.parity.assign(n, Parity::Even);
  }
  if (auto s = get("sigma")) {
    p.sigma.clear();
    for (const std::string& x : split(*s, ';')) p.sigma.push_back(scalar(x));
  }
  if (auto s = get("kappa")) {
    p.kappa.clear();
    for (const std::string& x : split(*s, ';')) p.kappa.push_back(scalar(x));
  }
  if (auto s = get("parity")) {
    p.parity.clear();
    for (int x : parse_ints(*s)) {
      if (x != 0 && x != 1) throw ParseError("parity entries must be 0 or 1");
      p.parity.push_back(x == 1 ? Parity::Odd : Parity::Even);
    }
  }
  if (auto s = get("sigma_bar")) p.sigma_bar = scalar(*s);
  p.validate();
  return p;
}

}  // namespace iserre
