#include "iserre/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "iserre/bfree.hpp"
#include "iserre/errors.hpp"
#include "iserre/identities.hpp"
#include "iserre/parallel.hpp"
#include "iserre/ualg.hpp"

namespace iserre::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

using Task = std::function<Suite()>;

struct Output {
  Json config = Json::object();
  Suite suite;
  Json extra = Json::object();
};

Suite single(Report r) {
  Suite s;
  s.add(std::move(r));
  return s;
}

Report zero_row(std::string claim, Json args, const Scalar& value) {
  if (value.is_zero()) return Report::ok(std::move(claim), std::move(args));
  return Report::fail(std::move(claim), std::move(args), value.to_string());
}

Suite run_tasks(const std::vector<Task>& tasks) {
  auto parts = parallel_map<Suite>(tasks.size(), [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    Suite s;
    try {
      s = tasks[i]();
    } catch (const DegreeCapExceeded& e) {
      s = single(Report::fail("degree_cap", Json::object(), e.what()));
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : s.rows) r.millis = s.rows.empty() ? 0 : ms / static_cast<double>(s.rows.size());
    return s;
  });
  Suite out;
  for (const auto& p : parts) out.append(p);
  return out;
}

int pick(std::mt19937_64& rng, int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); }

std::vector<int> ints(const std::string& text, const char* what) {
  try {
    return parse_int_list(text);
  } catch (const ParseError& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

CartanData cartan_for(int a12, int a21, int eps1, int eps2) {
  if (a21 == 1 && eps1 == 1 && eps2 == 1) return CartanData::from_a12(a12);
  CartanData cd{eps1, eps2, a12, a21 == 1 ? a12 : a21};
  cd.validate();
  return cd;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ConfigEntry {
  std::optional<int> a12;
  IqgParams params;
  std::map<std::string, std::string> kv;
};

// One entry per a12 value when the file sweeps a12 = lo:hi.
std::vector<ConfigEntry> load_config(const std::string& path) {
  auto kv = parse_kv(read_file(path));
  std::vector<ConfigEntry> out;
  auto it = kv.find("a12");
  if (it == kv.end()) {
    out.push_back({std::nullopt, params_from_kv(kv), kv});
    return out;
  }
  for (int a : parse_int_list(it->second)) {
    auto one = kv;
    one["a12"] = std::to_string(a);
    out.push_back({a, params_from_kv(one), one});
  }
  return out;
}

Json with_a12(Json args, const std::optional<int>& a12) {
  if (!a12) return args;
  Json out{{"a12", *a12}};
  for (auto& [k, v] : args.items()) out[k] = v;
  return out;
}

std::string weight_text(const StarWeight& w) {
  return "2L" + std::string(w.shift() < 0 ? "" : "+") + std::to_string(w.shift());
}

StarWeight random_weight(std::mt19937_64& rng) {
  return {pick(rng, 0, 1) ? Parity::Odd : Parity::Even, pick(rng, -3, 3)};
}

// ---------------------------------------------------------------------------
// Suites

Suite t_grid(const std::vector<int>& ws, const std::vector<int>& us, const std::vector<int>& ls) {
  std::vector<Task> tasks;
  for (int w : ws)
    for (int u : us)
      for (int l : ls) {
        if (u == 0 && l == 0) continue;
        if (u < 0 || l < 0) throw UsageError("u and ell must be nonnegative");
        tasks.push_back([=] {
          const TArgs a{w, u, l};
          return single(zero_row("T", to_json(a), eval_T(a)));
        });
      }
  if (tasks.empty()) throw UsageError("empty grid: u and ell must not both be 0");
  return run_tasks(tasks);
}

Suite g_grid(const std::vector<int>& ws, const std::vector<int>& us, const std::vector<int>& ls,
             const std::vector<int>& p0s, const std::vector<int>& p1s, const std::vector<int>& p2s) {
  std::vector<Task> tasks;
  for (int l : ls)
    if (l < 1) throw UsageError("identity g needs ell >= 1");
  for (int u : us)
    if (u < 0) throw UsageError("u must be nonnegative");
  for (int w : ws)
    for (int u : us)
      for (int l : ls)
        for (int p0 : p0s)
          for (int p1 : p1s)
            for (int p2 : p2s)
              tasks.push_back([=] {
                const GArgs a{w, u, l, p0, p1, p2};
                return single(zero_row("G", to_json(a), eval_G(a)));
              });
  return run_tasks(tasks);
}

Suite h_grid(const std::vector<int>& ws, const std::vector<int>& us, const std::vector<int>& p1s,
             const std::vector<int>& p2s) {
  std::vector<Task> tasks;
  for (int u : us)
    if (u < 0) throw UsageError("u must be nonnegative");
  for (int u : us)
    for (int p1 : p1s) {
      for (int p2 : p2s) {
        if (p2 == 0)
          tasks.push_back([=] {
            const Scalar closed = Scalar::q_pow(2 * u + 2 * u * p1) * qbinom(p1, u, QBase{1, true});
            return single(zero_row("H_closed_form", Json{{"u", u}, {"p1", p1}}, eval_H(u, p1, 0) - closed));
          });
        for (int w : ws)
          tasks.push_back([=] {
            return single(zero_row("G00=H", Json{{"w", w}, {"u", u}, {"p1", p1}, {"p2", p2}},
                                   eval_G00(w, u, p1, p2) - eval_H(u, p1, p2)));
          });
      }
    }
  return run_tasks(tasks);
}

Suite recursions(const std::vector<Rule>& rules, int samples, std::uint64_t seed) {
  std::vector<Task> tasks;
  for (Rule rule : rules) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(rule));
    const bool h_rule = rule == Rule::Hswap || rule == Rule::Hp1 || rule == Rule::Hp2;
    for (int i = 0; i < samples; ++i) {
      GArgs a{pick(rng, -5, 5), pick(rng, h_rule ? 1 : 0, 4), pick(rng, 0, 4),
              pick(rng, -5, 5), pick(rng, -5, 5), pick(rng, -5, 5)};
      const int k = pick(rng, -2, 2);
      tasks.push_back([=] { return single(check_recursion(rule, a, k)); });
    }
  }
  return run_tasks(tasks);
}

Report replay_row(const GArgs& a) {
  const DerivationTrace tr = replay_theorem_G(a);
  Json args = to_json(a);
  args["steps"] = tr.steps.size();
  const bool sound = tr.start_value == eval_G(a);
  if (tr.pass && sound) return Report::ok("replay_G", std::move(args));
  return Report::fail("replay_G", std::move(args), tr.to_json().dump());
}

Suite replays(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Task> tasks;
  for (int i = 0; i < samples; ++i) {
    GArgs a{pick(rng, -5, 5), pick(rng, 0, 4), pick(rng, 1, 3), pick(rng, -5, 5), pick(rng, -5, 5), pick(rng, -5, 5)};
    tasks.push_back([=] { return single(replay_row(a)); });
  }
  return run_tasks(tasks);
}

Suite idp_compare(const std::vector<int>& ms, const std::vector<Parity>& parities, const CartanData& cd,
                  const std::vector<int>& offsets) {
  std::vector<Task> tasks;
  for (int m : ms) {
    if (m < 0) throw UsageError("m must be nonnegative");
    for (Parity p : parities)
      tasks.push_back([=] {
        Json args{{"m", m}, {"parity", to_string(p)}, {"a12", cd.a12}, {"eps1", cd.eps1}};
        for (Parity wp : {Parity::Even, Parity::Odd})
          for (int off : offsets) {
            const StarWeight w{wp, off};
            if (w.value_parity() != p) continue;
            const StratumElement d = idp_engine(cd, m, p, w) - expand_idp_closed(cd, m, p, w);
            if (!d.is_zero())
              return single(Report::fail("idp_closed_form", args,
                                         "weight " + weight_text(w) + ": " + d.to_string()));
          }
        return single(Report::ok("idp_closed_form", args));
      });
  }
  return run_tasks(tasks);
}

std::vector<SerreCase> pick_cases(int a12, const std::string& which) {
  const auto allowed = cases_for(a12);
  if (which == "all") return allowed;
  const SerreCase c = parse_case(which);
  if (std::find(allowed.begin(), allowed.end(), c) == allowed.end())
    throw UsageError("case " + which + " does not fit the parity of a12 = " + std::to_string(a12));
  return {c};
}

Suite iserre_suite(const std::vector<CartanData>& cds, const std::string& which) {
  std::vector<Task> tasks;
  for (const auto& cd : cds)
    for (SerreCase c : pick_cases(cd.a12, which)) tasks.push_back([=] { return single(iserre_check(cd, c)); });
  return run_tasks(tasks);
}

Suite bridge_suite(const std::vector<CartanData>& cds, const std::string& which) {
  std::vector<Task> tasks;
  for (const auto& cd : cds)
    for (SerreCase c : pick_cases(cd.a12, which)) {
      if (cd.a12 == 0) throw UsageError("bridge needs a12 < 0");
      tasks.push_back([=] { return coefficient_bridge_check(cd, c); });
    }
  return run_tasks(tasks);
}

bool has_top_degree(const FreePoly& p, int top) {
  for (const auto& [m, c] : p.terms())
    if (static_cast<int>(m.word.size()) >= top) return true;
  return false;
}

Suite convert_suite(const std::vector<int>& a12s) {
  std::vector<Task> tasks;
  for (int a : a12s) {
    if (a > 0) throw UsageError("a12 must be nonpositive");
    tasks.push_back([=] {
      const FreePoly c = convert_to_monomial_form(a);
      const Alphabet al = Alphabet::plain({"B1", "B2"});
      Json args{{"a12", a}, {"C", c.to_string(al)}};
      const FreePoly odd = serre_poly(a) - qfact(1 - a) * iserre_poly(a, Parity::Odd);
      if (has_top_degree(c, 2 - a)) return single(Report::fail("convert", args, "top-degree term survives"));
      if (odd != c) return single(Report::fail("convert", args, (odd - c).to_string(al)));
      return single(Report::ok("convert", args));
    });
  }
  return run_tasks(tasks);
}

Suite simple_a12_suite(const std::vector<int>& a12s, int eps, const std::function<Report(int, QBase)>& f) {
  std::vector<Task> tasks;
  for (int a : a12s) {
    if (a > 0) throw UsageError("a12 must be nonpositive");
    tasks.push_back([=] { return single(f(a, QBase{eps, false})); });
  }
  return run_tasks(tasks);
}

Suite varpi_suite(const std::vector<int>& a12s, int rank1) {
  std::vector<Task> tasks;
  for (int a : a12s) {
    if (a > 0) throw UsageError("a12 must be nonpositive");
    tasks.push_back([=] { return varpi_serre_check(CartanData::from_a12(a)); });
  }
  if (rank1 >= 0) {
    tasks.push_back([=] { return varpi_check_rank1(rank1); });
    tasks.push_back([=] { return varpi_check_rank1(rank1, CartanData{2, 1, -1, -2}); });
  }
  return run_tasks(tasks);
}

Suite confluence_suite(const std::vector<int>& a12s, int samples, std::uint64_t seed) {
  std::vector<Task> tasks;
  for (int a : a12s) {
    if (a > 0) throw UsageError("a12 must be nonpositive");
    tasks.push_back([=] {
      const CartanData cd = CartanData::from_a12(a);
      std::mt19937_64 rng(seed);
      Json args{{"a12", a}, {"samples", samples}, {"seed", seed}};
      for (int i = 0; i < samples; ++i) {
        const Word w = random_word(rng, 5, 3, true);
        const StarWeight wt = random_weight(rng);
        const StratumElement ref = normalize_by_actions(cd, w, wt);
        if (normalize_by_rewriting(cd, w, wt, &rng) != ref || normalize_by_rewriting(cd, w, wt) != ref)
          return single(Report::fail("confluence", args, to_string(w) + " at " + weight_text(wt)));
      }
      return single(Report::ok("confluence", args));
    });
  }
  return run_tasks(tasks);
}

Suite bar_suite(const std::vector<ConfigEntry>& entries) {
  std::vector<Task> tasks;
  for (const auto& e : entries)
    tasks.push_back([=] {
      Suite s = bar_check(e.params);
      for (auto& r : s.rows) r.args = with_a12(r.args, e.a12);
      return s;
    });
  return run_tasks(tasks);
}

// The bar image of s is multiplied by q^2; the check must reject it.
Suite negative_control_suite(const std::vector<ConfigEntry>& entries) {
  std::vector<Task> tasks;
  for (const auto& e : entries)
    tasks.push_back([=] {
      IqgParams bad = e.params;
      bad.sigma_bar = Scalar::q_pow(2) * *e.params.sigma_bar;
      Json args = with_a12(Json{{"sigma_bar", bad.sigma_bar->to_string()}}, e.a12);
      bool detected = false;
      try {
        detected = !bar_check(bad).pass();
      } catch (const InvalidParams&) {
        detected = true;
      }
      if (detected) return single(Report::ok("bar_negative_control", args));
      return single(Report::fail("bar_negative_control", args, "corrupted bar image was accepted"));
    });
  return run_tasks(tasks);
}

Json presentation_json(const ConfigEntry& e, const Json& body) {
  Json j = body;
  if (e.a12) j["a12"] = *e.a12;
  return j;
}

// Split rank two for a12 in [lo, hi] followed by three quasi-split data.
std::vector<ConfigEntry> builtin_bar_configs(int lo, int hi) {
  std::vector<ConfigEntry> out;
  for (int a = hi; a >= lo; --a) out.push_back({a, IqgParams::split_rank2(a), {}});
  for (const char* text : {"cartan = 2 0; 0 2\ntau = 2 1\nsigma_bar = s\n",
                           "cartan = 2 -1; -1 2\ntau = 2 1\nsigma = s; q*s\nsigma_bar = s\n",
                           "cartan = 2 -1 0; -1 2 -1; 0 -1 2\ntau = 3 2 1\nsigma = 1; s; 1\nsigma_bar = q^2*s\n"})
    out.push_back({std::nullopt, params_from_kv(parse_kv(text)), {}});
  return out;
}

// ---------------------------------------------------------------------------
// Output

void print(const Output& o, const std::string& command, const std::string& format, bool timings, std::ostream& out) {
  const std::size_t failed = o.suite.failures();
  if (format == "json") {
    Json rows = Json::array();
    for (const auto& r : o.suite.rows) rows.push_back(r.to_json(timings));
    Json j{{"schema", 1}, {"command", command}, {"config", o.config}, {"rows", rows}};
    for (auto& [k, v] : o.extra.items()) j[k] = v;
    j["summary"] = Json{{"rows", o.suite.rows.size()}, {"passed", o.suite.rows.size() - failed}, {"failed", failed}};
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto& r : o.suite.rows) {
    out << (r.pass ? "PASS " : "FAIL ") << r.claim << " " << r.args.dump();
    if (timings) out << " " << static_cast<long long>(r.millis) << "ms";
    if (r.witness) out << "\n  witness: " << *r.witness;
    out << "\n";
  }
  for (auto& [k, v] : o.extra.items()) out << k << ": " << v.dump(2) << "\n";
  out << command << ": " << o.suite.rows.size() << " rows, " << failed << " failed\n";
}

Parity parse_parity(const std::string& s) {
  if (s == "0" || s == "even") return Parity::Even;
  if (s == "1" || s == "odd") return Parity::Odd;
  throw UsageError("parity must be even, odd, 0 or 1");
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  auto to_int = [](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw ParseError("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw ParseError("not an integer: '" + s + "'");
    return v;
  };
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    const auto colon = item.find(':', 1);
    if (colon == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    const int lo = to_int(item.substr(0, colon)), hi = to_int(item.substr(colon + 1));
    if (lo > hi) throw ParseError("empty range '" + item + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks of the iSerre relations and the identities behind them", "iserre"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text", fault;
  bool timings = false;
  int degree_cap = 0;
  std::uint64_t seed = 2024;
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--timings", timings, "report per-row milliseconds");
  app.add_option("--degree-cap", degree_cap, "override the word-length cap of the engine");
  app.add_option("--seed", seed, "seed for sampled suites");
  app.add_option("--fault", fault, "")->group("")->check(CLI::IsMember({"t-sign"}));

  // identity
  auto* identity = app.add_subcommand("identity", "T = 0, G = 0 (ell >= 1), G00 = H grids");
  std::string kind, w = "-8:8", u = "0:6", l = "0:6", p0 = "-2:2", p1 = "-4:4", p2 = "-4:4";
  identity->add_option("kind", kind, "t, g or h")->required()->check(CLI::IsMember({"t", "g", "h"}));
  identity->add_option("--w", w, "w range");
  identity->add_option("--u", u, "u range");
  identity->add_option("--l", l, "ell range");
  identity->add_option("--p0", p0, "p0 range (g)");
  identity->add_option("--p1", p1, "p1 range (g, h)");
  identity->add_option("--p2", p2, "p2 range (g, h)");

  auto* recursion = app.add_subcommand("recursion", "sampled recursion checks");
  std::string rule = "all";
  int samples = 200;
  recursion->add_option("--rule", rule, "rule name or all");
  recursion->add_option("--samples", samples, "samples per rule")->check(CLI::PositiveNumber);
  recursion->add_option("--seed", seed, "sampling seed");

  auto* proof = app.add_subcommand("proof", "replay the vanishing proof of G");
  std::string proof_kind, gargs;
  int replay_samples = 100;
  proof->add_option("what", proof_kind, "replay")->required()->check(CLI::IsMember({"replay"}));
  proof->add_option("--args", gargs, "w,u,l,p0,p1,p2");
  proof->add_option("--samples", replay_samples, "random argument tuples")->check(CLI::PositiveNumber);
  proof->add_option("--seed", seed, "sampling seed");

  std::string which = "all";
  std::string a12_iserre = "-6:0", a12_idp = "-1", a12_bridge = "-4:-1", a12_convert = "-4:-1", a12_rescale = "-4:0",
              a12_parity = "-6:0", a12_varpi = "-6:0", a12_conf = "-3:-1";
  int a21 = 1, eps1 = 1, eps2 = 1;
  auto add_cartan = [&](CLI::App* sub, std::string& a12) {
    sub->add_option("--a12", a12, "a12 values")->capture_default_str();
    sub->add_option("--a21", a21, "a21 (defaults to a12)");
    sub->add_option("--eps1", eps1, "symmetrizer of node 1");
    sub->add_option("--eps2", eps2, "symmetrizer of node 2");
  };
  auto* iserre = app.add_subcommand("iserre", "iSerre relation on the modified algebra");
  add_cartan(iserre, a12_iserre);
  iserre->add_option("--case", which, "EE, OO, OE, EO or all");

  auto* idp = app.add_subcommand("idp", "idivided powers: engine against closed form");
  std::string ms = "0:8", parity = "both", offsets = "-4:4";
  bool compare = false;
  idp->add_option("--m", ms, "powers");
  idp->add_option("--parity", parity, "even, odd or both");
  idp->add_option("--offset", offsets, "weight offsets");
  idp->add_flag("--compare", compare, "compare engine with closed form");
  idp->add_option("--a12", a12_idp, "a12")->capture_default_str();
  idp->add_option("--eps1", eps1, "symmetrizer of node 1");

  auto* bridge = app.add_subcommand("bridge", "engine coefficients against the closed sums");
  add_cartan(bridge, a12_bridge);
  bridge->add_option("--case", which, "EE, OO, OE, EO or all");

  auto* convert = app.add_subcommand("convert", "iSerre relation in monomial form");
  convert->add_option("--a12", a12_convert, "a12 values")->capture_default_str();

  auto* rescale = app.add_subcommand("rescale", "distinguished parameter to generic parameter");
  rescale->add_option("--a12", a12_rescale, "a12 values")->capture_default_str();
  rescale->add_option("--eps1", eps1, "symmetrizer");

  auto* parity_cmd = app.add_subcommand("parity", "parity independence of the iSerre polynomial");
  parity_cmd->add_option("--a12", a12_parity, "a12 values")->capture_default_str();
  parity_cmd->add_option("--eps1", eps1, "symmetrizer");

  auto* varpi = app.add_subcommand("varpi", "the involution on Serre relations and rank one");
  int rank1 = 6;
  varpi->add_option("--a12", a12_varpi, "a12 values")->capture_default_str();
  varpi->add_option("--rank1", rank1, "largest rank-one idivided power, -1 to skip");

  auto* confluence = app.add_subcommand("confluence", "random-order rewriting agrees with the actions");
  int conf_samples = 1000;
  confluence->add_option("--a12", a12_conf, "a12 values")->capture_default_str();
  confluence->add_option("--samples", conf_samples, "words per a12")->check(CLI::PositiveNumber);
  confluence->add_option("--seed", seed, "sampling seed");

  std::string config_path;
  bool negative_control = false;
  std::string sigma_q1_text;
  auto* present = app.add_subcommand("present", "emit the presentation for a parameter file");
  present->add_option("--config", config_path, "key = value file")->required();
  auto* bar = app.add_subcommand("bar", "bar involution on the emitted relations");
  bar->add_option("--config", config_path, "key = value file")->required();
  bar->add_flag("--negative-control", negative_control, "also run a corrupted bar image");
  auto* q1 = app.add_subcommand("q1", "presentation at q = 1");
  q1->add_option("--config", config_path, "key = value file")->required();
  q1->add_option("--sigma", sigma_q1_text, "value of s at q = 1 (rational)");

  auto* all = app.add_subcommand("all", "full acceptance suite");
  all->add_option("--seed", seed, "sampling seed");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "iserre: " << e.what() << "\n";
    return 2;
  }

  const int saved_cap = iserre::degree_cap();
  struct Restore {
    int cap;
    ~Restore() {
      set_fault(Fault::None);
      set_degree_cap(cap);
    }
  } restore{saved_cap};
  if (fault == "t-sign") set_fault(Fault::TSign);
  if (degree_cap > 0) set_degree_cap(degree_cap);

  Output o;
  std::string command;
  try {
    auto cartans = [&](const std::string& a12) {
      std::vector<CartanData> cds;
      for (int a : ints(a12, "--a12")) cds.push_back(cartan_for(a, a21, eps1, eps2));
      return cds;
    };
    auto cartan_config = [&](const std::string& a12) {
      return Json{{"a12", a12}, {"a21", a21 == 1 ? Json("a12") : Json(a21)}, {"eps1", eps1}, {"eps2", eps2}};
    };
    if (identity->parsed()) {
      command = "identity " + kind;
      if (kind == "t") {
        o.config = Json{{"w", w}, {"u", u}, {"l", l}};
        o.suite = t_grid(ints(w, "--w"), ints(u, "--u"), ints(l, "--l"));
      } else if (kind == "g") {
        if (!identity->count("--l")) l = "1:3";
        if (!identity->count("--w")) w = "-3:3";
        if (!identity->count("--u")) u = "0:3";
        if (!identity->count("--p1")) p1 = "-2:2";
        if (!identity->count("--p2")) p2 = "-2:2";
        o.config = Json{{"w", w}, {"u", u}, {"l", l}, {"p0", p0}, {"p1", p1}, {"p2", p2}};
        o.suite = g_grid(ints(w, "--w"), ints(u, "--u"), ints(l, "--l"), ints(p0, "--p0"), ints(p1, "--p1"),
                         ints(p2, "--p2"));
      } else {
        if (!identity->count("--w")) w = "-6:6";
        if (!identity->count("--u")) u = "0:5";
        o.config = Json{{"w", w}, {"u", u}, {"p1", p1}, {"p2", p2}};
        o.suite = h_grid(ints(w, "--w"), ints(u, "--u"), ints(p1, "--p1"), ints(p2, "--p2"));
      }
    } else if (recursion->parsed()) {
      command = "recursion";
      std::vector<Rule> rules;
      if (rule == "all") rules = all_rules();
      else {
        try {
          rules.push_back(parse_rule(rule));
        } catch (const InvalidArgument& e) {
          throw UsageError(e.what());
        }
      }
      o.config = Json{{"rule", rule}, {"samples", samples}, {"seed", seed}};
      o.suite = recursions(rules, samples, seed);
    } else if (proof->parsed()) {
      command = "proof replay";
      if (!gargs.empty()) {
        const auto v = ints(gargs, "--args");
        if (v.size() != 6) throw UsageError("--args needs w,u,l,p0,p1,p2");
        const GArgs g{v[0], v[1], v[2], v[3], v[4], v[5]};
        if (g.ell < 1 || g.u < 0) throw UsageError("replay needs u >= 0 and ell >= 1");
        o.config = Json{{"args", gargs}};
        o.suite = single(replay_row(g));
        o.extra["trace"] = replay_theorem_G(g).to_json();
      } else {
        o.config = Json{{"samples", replay_samples}, {"seed", seed}};
        o.suite = replays(replay_samples, seed);
      }
    } else if (iserre->parsed()) {
      command = "iserre";
      o.config = cartan_config(a12_iserre);
      o.config["case"] = which;
      o.suite = iserre_suite(cartans(a12_iserre), which);
    } else if (idp->parsed()) {
      command = "idp";
      std::vector<Parity> ps;
      if (parity == "both") ps = {Parity::Even, Parity::Odd};
      else ps = {parse_parity(parity)};
      const auto a = ints(a12_idp, "--a12");
      if (a.size() != 1) throw UsageError("idp takes a single a12");
      const CartanData cd = cartan_for(a.front(), 1, eps1, eps1);
      o.config = Json{{"m", ms}, {"parity", parity}, {"offset", offsets}, {"a12", a12_idp}, {"eps1", eps1}, {"compare", compare}};
      if (compare) {
        o.suite = idp_compare(ints(ms, "--m"), ps, cd, ints(offsets, "--offset"));
      } else {
        for (int m : ints(ms, "--m"))
          for (Parity p : ps) {
            if (m < 0) throw UsageError("m must be nonnegative");
            o.suite.add(Report::ok("idp", Json{{"m", m}, {"parity", to_string(p)},
                                               {"closed_form", idp_poly(m, p, Scalar(1), cd.q1()).to_string(Alphabet::plain({"B"}))}}));
          }
      }
    } else if (bridge->parsed()) {
      command = "bridge";
      o.config = cartan_config(a12_bridge);
      o.config["case"] = which;
      o.suite = bridge_suite(cartans(a12_bridge), which);
    } else if (convert->parsed()) {
      command = "convert";
      o.config = Json{{"a12", a12_convert}};
      o.suite = convert_suite(ints(a12_convert, "--a12"));
    } else if (rescale->parsed()) {
      command = "rescale";
      o.config = Json{{"a12", a12_rescale}, {"eps1", eps1}};
      o.suite = simple_a12_suite(ints(a12_rescale, "--a12"), eps1, rescale_check);
    } else if (parity_cmd->parsed()) {
      command = "parity";
      o.config = Json{{"a12", a12_parity}, {"eps1", eps1}};
      o.suite = simple_a12_suite(ints(a12_parity, "--a12"), eps1, parity_independence_check);
    } else if (varpi->parsed()) {
      command = "varpi";
      o.config = Json{{"a12", a12_varpi}, {"rank1", rank1}};
      o.suite = varpi_suite(ints(a12_varpi, "--a12"), rank1);
    } else if (confluence->parsed()) {
      command = "confluence";
      o.config = Json{{"a12", a12_conf}, {"samples", conf_samples}, {"seed", seed}};
      o.suite = confluence_suite(ints(a12_conf, "--a12"), conf_samples, seed);
    } else if (present->parsed() || bar->parsed() || q1->parsed()) {
      const auto entries = load_config(config_path);
      o.config = Json{{"config", config_path}};
      if (present->parsed()) {
        command = "present";
        Json list = Json::array();
        for (const auto& e : entries) {
          const Presentation p = emit_presentation(e.params);
          list.push_back(presentation_json(e, p.to_json()));
          for (const auto& r : p.relations) {
            Json args = with_a12(Json{{"kind", r.kind}, {"nodes", Json::array()}, {"verified", r.verified}}, e.a12);
            for (int i : r.nodes) args["nodes"].push_back(i + 1);
            o.suite.add(Report::ok("relation", args));
          }
        }
        o.extra["presentations"] = list;
      } else if (bar->parsed()) {
        command = "bar";
        o.config["negative_control"] = negative_control;
        for (const auto& e : entries)
          if (!e.params.sigma_bar) throw UsageError("bar needs sigma_bar in the config file");
        o.suite = bar_suite(entries);
        if (negative_control) o.suite.append(negative_control_suite(entries));
      } else {
        command = "q1";
        Json list = Json::array();
        for (const auto& e : entries) {
          std::string text = sigma_q1_text;
          if (text.empty()) {
            auto it = e.kv.find("sigma_q1");
            text = it == e.kv.end() ? "1" : it->second;
          }
          Rational value;
          try {
            value = Rational(text);
            value.canonicalize();
          } catch (const std::exception&) {
            throw UsageError("sigma_q1 must be a rational number, got '" + text + "'");
          }
          Json args = with_a12(Json{{"sigma_q1", value.get_str()}}, e.a12);
          const PresentationQ1 p = specialize_presentation_q1(emit_presentation(e.params), value);
          list.push_back(presentation_json(e, p.to_json()));
          o.suite.add(Report::ok("q1", args));
        }
        o.extra["presentations_q1"] = list;
      }
    } else if (all->parsed()) {
      command = "all";
      o.config = Json{{"seed", seed}};
      std::vector<CartanData> iserre_cds, bridge_cds;
      for (int a = 0; a >= -6; --a) iserre_cds.push_back(CartanData::from_a12(a));
      for (int a = -1; a >= -4; --a) bridge_cds.push_back(CartanData::from_a12(a));
      std::vector<int> a12_6, a12_4, a12_4n{-1, -2, -3, -4};
      for (int a = 0; a >= -6; --a) a12_6.push_back(a);
      for (int a = 0; a >= -4; --a) a12_4.push_back(a);
      auto range = [](int lo, int hi) {
        std::vector<int> v;
        for (int i = lo; i <= hi; ++i) v.push_back(i);
        return v;
      };
      Suite s;
      s.append(t_grid(range(-8, 8), range(0, 6), range(0, 6)));
      s.append(recursions(all_rules(), 200, seed));
      s.append(h_grid(range(-6, 6), range(0, 5), range(-4, 4), range(-4, 4)));
      s.append(replays(100, seed));
      s.append(idp_compare(range(0, 8), {Parity::Even, Parity::Odd}, CartanData::from_a12(-1), range(-4, 4)));
      s.append(idp_compare(range(0, 8), {Parity::Even, Parity::Odd}, CartanData{2, 1, -1, -2}, range(-4, 4)));
      s.append(iserre_suite(iserre_cds, "all"));
      s.append(bridge_suite(bridge_cds, "all"));
      s.append(convert_suite(a12_4n));
      s.append(simple_a12_suite(a12_6, 1, parity_independence_check));
      s.append(varpi_suite(a12_6, 6));
      s.append(bar_suite(builtin_bar_configs(-4, 0)));
      s.append(negative_control_suite(builtin_bar_configs(-4, -1)));
      s.append(simple_a12_suite(a12_4, 1, rescale_check));
      s.append(confluence_suite({-1, -2, -3}, 1000, seed));
      o.suite = std::move(s);
    }
    if (!fault.empty()) o.config["fault"] = fault;
    if (degree_cap > 0) o.config["degree_cap"] = degree_cap;
  } catch (const UsageError& e) {
    err << "iserre: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "iserre: " << e.what() << "\n";
    return 2;
  }
  print(o, command, format, timings, out);
  return o.suite.pass() ? 0 : 1;
}

}  // namespace iserre::cli
