// gl3ks: evaluate GL(3) long-element Kloosterman sums, run the verification
// suites, and run the bilinear-form experiments.
//
// Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 cap exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gl3ks/gl3ks.hpp"

using nlohmann::ordered_json;
using namespace gl3ks;

namespace {

constexpr int kSchemaVersion = 1;

enum class Format { json, csv, text };

struct Global {
  std::string cap = "1e8";
  Int order_cap = kDefaultOrderCap;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;

  Caps caps() const {
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(cap, &used);
      if (used != cap.size()) throw std::invalid_argument(cap);
    } catch (const std::logic_error&) {
      throw InvalidArgument("--cap: not a number: " + cap);
    }
    if (!(v >= 1.0) || v > 9.0e18) throw InvalidArgument("--cap must be in [1, 9e18]");
    return {static_cast<Int>(v), order_cap};
  }
  Format fmt() const {
    if (format == "json") return Format::json;
    if (format == "csv") return Format::csv;
    return Format::text;
  }
};

// A table rendered as CSV, aligned text, or a JSON array of row objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<ordered_json>> rows;
};

std::string cell_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void write_table(std::ostream& os, const Table& t, Format f, ordered_json meta) {
  if (f == Format::json) {
    meta["rows"] = ordered_json::array();
    for (const auto& r : t.rows) {
      ordered_json row;
      for (std::size_t i = 0; i < t.header.size(); ++i) row[t.header[i]] = r[i];
      meta["rows"].push_back(row);
    }
    os << meta.dump(2) << "\n";
    return;
  }
  const std::string sep = f == Format::csv ? "," : "  ";
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? sep : "") << t.header[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      os << (i ? sep : "") << (f == Format::csv ? csv_escape(cell_text(r[i])) : cell_text(r[i]));
    os << "\n";
  }
}

ordered_json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ordered_json cyc_json(const CycInt& v) {
  ordered_json j;
  j["exact"] = v.to_string();
  j["order"] = v.order();
  j["coefficients"] = v.coeffs();
  j["complex"] = complex_json(v.to_complex());
  return j;
}

// Writes to --out or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidArgument("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

ordered_json header(const std::string& command) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

// ------------------------------------------------------------------ eval

struct EvalOpts {
  std::vector<Int> args;
  std::string mode = "fast";
};

int cmd_eval(const Global& g, const EvalOpts& o) {
  const Gl3Args a{o.args[0], o.args[1], o.args[2], o.args[3], o.args[4], o.args[5]};
  a.validate();
  const Caps caps = g.caps();
  std::optional<CycInt> naive, fast;
  if (o.mode == "naive" || o.mode == "both") naive = s_long_naive(a, caps);
  if (o.mode == "fast" || o.mode == "both") fast = s_long_fast(a, caps);
  const bool agree = !(naive && fast) || *naive == *fast;
  const CycInt& value = fast ? *fast : *naive;

  Sink sink(g.out);
  auto& os = sink.stream();
  switch (g.fmt()) {
    case Format::json: {
      auto j = header("eval");
      j["args"] = {{"m1", a.m1}, {"m2", a.m2}, {"n1", a.n1}, {"n2", a.n2}, {"D1", a.D1}, {"D2", a.D2}};
      j["mode"] = o.mode;
      if (naive) j["naive"] = cyc_json(*naive);
      if (fast) j["fast"] = cyc_json(*fast);
      if (naive && fast) j["agree"] = agree;
      os << j.dump(2) << "\n";
      break;
    }
    case Format::csv:
      os << "m1,m2,n1,n2,D1,D2,mode,exact,re,im,agree\n";
      os << a.m1 << "," << a.m2 << "," << a.n1 << "," << a.n2 << "," << a.D1 << "," << a.D2 << ","
         << o.mode << "," << csv_escape(value.to_string()) << "," << cell_text(value.to_complex().real())
         << "," << cell_text(value.to_complex().imag()) << "," << (agree ? "true" : "false") << "\n";
      break;
    case Format::text:
      os << to_string(a) << " = " << value.to_string() << "\n";
      os << "complex: " << cell_text(value.to_complex().real()) << " + "
         << cell_text(value.to_complex().imag()) << "i\n";
      if (naive && fast) os << (agree ? "naive and fast agree\n" : "naive and fast DISAGREE\n");
      break;
  }
  return agree ? 0 : 1;
}

// ------------------------------------------------------------------ shat

int cmd_shat(const Global& g, const std::vector<Int>& v) {
  const ShatArgs s{v[0], v[1], v[2], v[3], v[4], v[5]};
  const CycInt value = shat_naive(s, g.caps());
  std::optional<CycInt> closed;
  bool closed_applies = false;
  {
    const auto f1 = arith::as_prime_power(s.D1), f2 = arith::as_prime_power(s.D2);
    closed_applies = f1.exponent >= 0 && f2.exponent >= 0 &&
                     (f1.exponent == 0 || f2.exponent == 0 || f1.prime == f2.prime);
  }
  if (closed_applies) closed = shat_closed_form(s);
  const bool agree = !closed || *closed == value;

  Sink sink(g.out);
  auto& os = sink.stream();
  switch (g.fmt()) {
    case Format::json: {
      auto j = header("shat");
      j["args"] = {{"a", s.a}, {"u", s.u}, {"t", s.t}, {"b", s.b}, {"D1", s.D1}, {"D2", s.D2}};
      j["value"] = cyc_json(value);
      if (closed) {
        j["closed_form"] = cyc_json(*closed);
        j["agree"] = agree;
      } else {
        j["closed_form"] = nullptr;
      }
      os << j.dump(2) << "\n";
      break;
    }
    case Format::csv:
      os << "a,u,t,b,D1,D2,exact,re,im,closed_form_agrees\n";
      os << s.a << "," << s.u << "," << s.t << "," << s.b << "," << s.D1 << "," << s.D2 << ","
         << csv_escape(value.to_string()) << "," << cell_text(value.to_complex().real()) << ","
         << cell_text(value.to_complex().imag()) << "," << (closed ? (agree ? "true" : "false") : "")
         << "\n";
      break;
    case Format::text:
      os << to_string(s) << " = " << value.to_string() << "\n";
      if (closed) os << "closed form " << (agree ? "agrees" : "DISAGREES") << "\n";
      break;
  }
  return agree ? 0 : 1;
}

// ------------------------------------------------------------------ rfun

int cmd_rfun(const Global& g, const std::vector<Int>& v) {
  const Int t = v[0], D1 = v[1], D2 = v[2];
  const Caps caps = g.caps();
  const auto prof = r_profile(D1, D2, caps);
  const auto swapped = r_profile(D2, D1, caps);
  const double r = prof.r[arith::mod(t, D1)], alt = prof.r_alternate[arith::mod(t, D1)];
  const double rp = prof.r_prime[arith::mod(t, D2)], rp_dual = swapped.r[arith::mod(t, D2)];
  const bool ok = std::abs(r - alt) <= kRTolerance && std::abs(rp - rp_dual) <= kRTolerance;

  Sink sink(g.out);
  Table tab{{"t", "D1", "D2", "R", "R_alternate", "R_prime", "R_swapped", "consistent"},
            {{t, D1, D2, r, alt, rp, rp_dual, ok}}};
  write_table(sink.stream(), tab, g.fmt(), header("rfun"));
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Global& g, const std::string& suite) {
  verify::Options o{g.caps(), g.seed};
  const auto reports = verify::run(suite, o);
  bool passed = true;
  for (const auto& r : reports) passed = passed && r.passed();

  Sink sink(g.out);
  auto& os = sink.stream();
  if (g.fmt() == Format::json) {
    auto j = header("verify");
    j["suite"] = suite;
    j["seed"] = g.seed;
    j["cap"] = o.caps.naive;
    j["passed"] = passed;
    j["suites"] = ordered_json::array();
    for (const auto& r : reports) {
      ordered_json s{{"name", r.name}, {"passed", r.passed()}, {"checks", ordered_json::array()}};
      for (const auto& c : r.checks) {
        ordered_json cj{{"name", c.name}, {"passed", c.passed}, {"checked", c.checked}, {"skipped", c.skipped}};
        cj["counterexample"] = c.counterexample.empty() ? ordered_json(nullptr) : ordered_json(c.counterexample);
        ordered_json vals = ordered_json::object();
        for (const auto& [k, v] : c.values) vals[k] = v;
        cj["values"] = vals;
        s["checks"].push_back(cj);
      }
      j["suites"].push_back(s);
    }
    os << j.dump(2) << "\n";
  } else {
    Table tab{{"suite", "check", "passed", "checked", "skipped", "counterexample"}, {}};
    for (const auto& r : reports)
      for (const auto& c : r.checks)
        tab.rows.push_back({r.name, c.name, c.passed, c.checked, c.skipped, c.counterexample});
    write_table(os, tab, g.fmt(), {});
  }
  return passed ? 0 : 1;
}

// ------------------------------------------------------------ experiment

struct ExperimentOpts {
  std::vector<Int> N{4, 8, 16};
  std::vector<Int> X{4, 6, 8};
  std::vector<Int> X1, X2, H1, H2;
  int trials = 10;
  std::string alpha, beta, gamma;
};

// (X1, X2) pairs: the cartesian product of --X1 and --X2 when given,
// otherwise X1 = X2 over --X.
std::vector<std::pair<Int, Int>> x_grid(const ExperimentOpts& o) {
  std::vector<std::pair<Int, Int>> out;
  if (!o.X1.empty() || !o.X2.empty()) {
    const auto& a = o.X1.empty() ? o.X : o.X1;
    const auto& b = o.X2.empty() ? o.X : o.X2;
    for (Int x1 : a)
      for (Int x2 : b) out.emplace_back(x1, x2);
  } else {
    for (Int x : o.X) out.emplace_back(x, x);
  }
  return out;
}

double max_comparison(const std::vector<BoundReport>& reps, std::size_t i) {
  double m = 0.0;
  for (const auto& r : reps) m = std::max(m, r.comparisons[i].second);
  return m;
}

Table theorem2_table(const ExperimentOpts& o, std::uint64_t seed, const Caps& caps) {
  Table t{{"N", "X1", "X2", "trials", "worst_trial", "lhs", "rhs", "M_alpha", "M_beta", "max_ratio",
           "max_trivial_ratio", "max_large_sieve_form_ratio", "max_m_beta_large_sieve_ratio"},
          {}};
  for (Int N : o.N)
    for (auto [X1, X2] : x_grid(o)) {
      const auto reps = theorem2_experiment(N, X1, X2, o.trials, seed, caps);
      const BoundReport* w = worst(reps);
      if (!w) {
        t.rows.push_back({N, X1, X2, o.trials, nullptr, nullptr, nullptr, nullptr, nullptr, 0.0, 0.0, 0.0, 0.0});
        continue;
      }
      t.rows.push_back({N, X1, X2, o.trials, w->trial, w->lhs, w->rhs, w->rhs_components[0].second,
                        w->rhs_components[1].second, w->ratio, max_comparison(reps, 0),
                        max_comparison(reps, 1), max_comparison(reps, 2)});
    }
  return t;
}

Table theorem3_table(const ExperimentOpts& o, std::uint64_t seed, const Caps& caps) {
  Table t{{"N", "X1", "X2", "H1", "H2", "trials", "worst_trial", "lhs", "M_star_alpha", "M_star_beta",
           "first_term", "second_term", "rhs", "max_ratio"},
          {}};
  for (Int N : o.N)
    for (auto [X1, X2] : x_grid(o)) {
      std::vector<std::pair<Int, Int>> hs;
      if (o.H1.empty() && o.H2.empty()) {
        for (Int h : {Int{1}, Int{2}, std::min(X1, X2)})
          if (h <= std::min(X1, X2) &&
              std::find(hs.begin(), hs.end(), std::pair{h, h}) == hs.end())
            hs.emplace_back(h, h);
        if (X1 != X2) hs.emplace_back(X1, X2);
      } else {
        const auto& a = o.H1.empty() ? o.H2 : o.H1;
        const auto& b = o.H2.empty() ? o.H1 : o.H2;
        for (Int h1 : a)
          for (Int h2 : b) hs.emplace_back(h1, h2);
      }
      for (auto [H1, H2] : hs) {
        const auto reps = theorem3_experiment(N, X1, X2, H1, H2, o.trials, seed, caps);
        const BoundReport* w = worst(reps);
        if (!w) {
          t.rows.push_back({N, X1, X2, H1, H2, o.trials, nullptr, nullptr, nullptr, nullptr, nullptr,
                            nullptr, nullptr, 0.0});
          continue;
        }
        t.rows.push_back({N, X1, X2, H1, H2, o.trials, w->trial, w->lhs, w->rhs_components[0].second,
                          w->rhs_components[1].second, w->rhs_components[2].second,
                          w->rhs_components[3].second, w->rhs, w->ratio});
      }
    }
  return t;
}

Table strata_table(const ExperimentOpts& o, std::uint64_t seed, const Caps& caps) {
  Table t{{"N", "X1", "X2", "total_re", "total_im", "coprime_abs", "equal_prime_abs", "remainder_abs",
           "equal_prime_main_abs", "additivity_error", "coprime_factor_error", "equal_prime_formula_error",
           "passed"},
          {}};
  for (Int N : o.N)
    for (auto [X1, X2] : x_grid(o)) {
      Rng rng(derive_seed(seed, {3, N, X1, X2}));
      const CoeffSeq alpha = o.alpha.empty() ? random_coeffs(N, 1, rng) : read_coeff_file(o.alpha, N);
      const CoeffSeq beta = o.beta.empty() ? random_coeffs(N, 1, rng) : read_coeff_file(o.beta, N);
      GammaSeq gamma(X1, X2);
      if (o.gamma.empty()) {
        for (Int d1 = 1; d1 <= X1; ++d1)
          for (Int d2 = 1; d2 <= X2; ++d2)
            gamma.set(d1, d2, std::polar(1.0, 2.0 * std::numbers::pi * rng.unit()));
      } else {
        gamma = read_gamma_file(o.gamma, std::pair{X1, X2});
      }
      const auto s = gcd_stratification(alpha, beta, gamma, {}, caps);
      const bool ok = s.additivity_error <= kStrataTolerance && s.coprime_error <= kStrataTolerance &&
                      s.equal_prime_error <= kStrataTolerance;
      t.rows.push_back({N, X1, X2, s.total.real(), s.total.imag(), std::abs(s.coprime),
                        std::abs(s.equal_prime), std::abs(s.remainder), std::abs(s.equal_prime_main),
                        s.additivity_error, s.coprime_error, s.equal_prime_error, ok});
    }
  return t;
}

Table large_sieve_table(const ExperimentOpts& o, std::uint64_t seed) {
  Table t{{"N", "X1", "X2", "trials", "max_ratio"}, {}};
  for (Int N : o.N)
    for (auto [X1, X2] : x_grid(o)) {
      Rng rng(derive_seed(seed, {4, N, X1, X2}));
      double best = 0.0;
      for (int i = 0; i < o.trials; ++i) {
        const CoeffSeq beta = random_coeffs(N, i, rng);
        const double nb = beta.norm();
        best = std::max(best, safe_ratio(m_beta(beta, X1, X2),
                                         (static_cast<double>(X1 * X1 + N)) * nb * nb));
      }
      t.rows.push_back({N, X1, X2, o.trials, best});
    }
  return t;
}

int cmd_experiment(const Global& g, const std::string& name, const ExperimentOpts& o) {
  if (o.trials < 0) throw InvalidArgument("--trials must be >= 0");
  const Caps caps = g.caps();
  Table t;
  bool ok = true;
  if (name == "theorem2") t = theorem2_table(o, g.seed, caps);
  else if (name == "theorem3") t = theorem3_table(o, g.seed, caps);
  else if (name == "strata") {
    t = strata_table(o, g.seed, caps);
    for (const auto& r : t.rows) ok = ok && r.back().get<bool>();
  } else if (name == "large-sieve-ratio") t = large_sieve_table(o, g.seed);
  else throw InvalidArgument("unknown experiment '" + name + "'");

  auto meta = header("experiment");
  meta["experiment"] = name;
  meta["seed"] = g.seed;
  Sink sink(g.out);
  write_table(sink.stream(), t, g.fmt(), meta);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GL(3) long-element Kloosterman sums: evaluation, verification, experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--cap", g.cap, "naive state-space cap, (D1 D2)^2 (e.g. 1e8)");
  app.add_option("--order-cap", g.order_cap, "largest cyclotomic order of an exact value");
  app.add_option("--seed", g.seed, "seed for every randomized trial");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", g.out, "write output to FILE instead of stdout");

  EvalOpts eval;
  auto* c_eval = app.add_subcommand("eval", "evaluate S(m1, m2, n1, n2; D1, D2)");
  c_eval->add_option("args", eval.args, "m1 m2 n1 n2 D1 D2")->required()->expected(6);
  c_eval->add_option("--mode", eval.mode, "evaluator")->check(CLI::IsMember({"naive", "fast", "both"}));

  std::vector<Int> shat_args;
  auto* c_shat = app.add_subcommand("shat", "evaluate the partial Fourier transform Ŝ(a, u, t, b; D1, D2)");
  c_shat->add_option("args", shat_args, "a u t b D1 D2")->required()->expected(6);

  std::vector<Int> rfun_args;
  auto* c_rfun = app.add_subcommand("rfun", "evaluate R(t; D1, D2) and R'(t; D1, D2)");
  c_rfun->add_option("args", rfun_args, "t D1 D2")->required()->expected(3);

  std::string suite;
  auto* c_verify = app.add_subcommand("verify", "run a verification suite");
  c_verify->add_option("suite", suite)
      ->required()
      ->check(CLI::IsMember({"identities", "fourier", "rbound", "decomposition", "all"}));

  std::string experiment;
  ExperimentOpts ex;
  auto* c_exp = app.add_subcommand("experiment", "run a ratio experiment over a grid");
  c_exp->add_option("name", experiment)
      ->required()
      ->check(CLI::IsMember({"theorem2", "theorem3", "strata", "large-sieve-ratio"}));
  // Grid lists may be given empty (a bare `--N`), which yields an empty grid.
  std::vector<std::pair<CLI::Option*, std::vector<Int>*>> lists;
  auto add_list = [&](const std::string& flag, std::vector<Int>& v, const std::string& help) {
    lists.emplace_back(c_exp->add_option(flag, v, help)->delimiter(',')->expected(0, 1 << 20), &v);
  };
  add_list("--N", ex.N, "coefficient lengths");
  add_list("--X", ex.X, "moduli bounds with X1 = X2");
  add_list("--X1", ex.X1, "bounds for D1");
  add_list("--X2", ex.X2, "bounds for D2");
  add_list("--H1", ex.H1, "H1 values (theorem3)");
  add_list("--H2", ex.H2, "H2 values (theorem3)");
  c_exp->add_option("--trials", ex.trials, "random trials per grid point");
  c_exp->add_option("--alpha", ex.alpha, "α coefficients, CSV index,re,im (strata)");
  c_exp->add_option("--beta", ex.beta, "β coefficients, CSV index,re,im (strata)");
  c_exp->add_option("--gamma", ex.gamma, "γ coefficients, CSV d1,d2,re,im (strata)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (auto [opt, v] : lists) {
    const auto& res = opt->results();
    if (opt->count() > 0 && std::all_of(res.begin(), res.end(), [](const std::string& r) { return r.empty(); }))
      v->clear();
  }

  try {
    if (*c_eval) return cmd_eval(g, eval);
    if (*c_shat) return cmd_shat(g, shat_args);
    if (*c_rfun) return cmd_rfun(g, rfun_args);
    if (*c_verify) return cmd_verify(g, suite);
    if (*c_exp) return cmd_experiment(g, experiment, ex);
  } catch (const gl3ks::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}
