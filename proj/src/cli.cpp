#include "dnfkit/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dnfkit/count.hpp"
#include "dnfkit/dnf_io.hpp"
#include "dnfkit/exact.hpp"
#include "dnfkit/parallel.hpp"
#include "dnfkit/prg.hpp"
#include "dnfkit/random.hpp"
#include "dnfkit/sparsify.hpp"
#include "dnfkit/switching.hpp"

namespace dnfkit {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  unsigned threads = 0;
  std::uint64_t seed = 0;
};

struct CountArgs {
  std::string input;
  double eps = 0.25;
  std::string mode = "auto";
  double budget = 1e9;
  std::string audit;
  std::optional<unsigned> field_log;
  double c_k = 1.0;
  double c_eps = 1.0;
  bool timing = false;
};

struct SparsifyArgs {
  std::string input;
  double eps = 0.1;
  std::string emit = "both";
  std::string out;
  std::string audit;
  std::optional<double> size_target;
  std::string engine = "quasi";
  std::size_t k = 3;
};

struct PrgArgs {
  std::size_t n = 8;
  std::optional<unsigned> field_log;
  std::optional<double> eps;
  std::string input;
};

struct SwitchArgs {
  std::string input;
  std::string mode = "iid";
  std::optional<double> p;
  std::optional<std::size_t> w;
  std::size_t s = 2;
  double eps = 0.1;
  double delta = 0.1;
  double c_claim = 0.05;
  std::size_t trials = 1000;
  bool no_sandwich = false;
};

struct VerifyArgs {
  std::size_t n = 12;
  std::size_t w = 3;
  std::size_t instances = 100;
  double eps = 0.25;
};

unsigned thread_count(const Common& c) { return c.threads ? c.threads : default_threads(); }

DnfFormula load(const std::string& path, std::ostream& err) {
  ParsedDnf p = parse_dnf_file(path);
  for (const std::string& w : p.warnings) err << "warning: " << path << ": " << w << '\n';
  return p.formula;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int cmd_count(const CountArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  if (!(a.eps > 0 && a.eps < 1)) throw UsageError("--eps must lie in (0, 1)");
  const DnfFormula f = load(a.input, err);
  CountOptions opts;
  opts.mode = a.mode == "lv" ? CountMethod::LubyVelickovic
              : a.mode == "bruteforce" ? CountMethod::BruteForce
                                       : CountMethod::Auto;
  opts.budget = a.budget;
  opts.knobs = {a.c_k, a.c_eps};
  opts.field_log = a.field_log;
  opts.threads = thread_count(c);
  opts.keep_per_hash = !a.audit.empty();
  CountResult r;
  try {
    r = dnf_count(f, a.eps, opts);
  } catch (const CountAborted& e) {
    err << "count aborted: " << e.what() << '\n';
    if (!a.audit.empty()) write_text(a.audit, e.partial().dump(2) + "\n");
    return kExitVerificationFailed;
  }
  json j = result_json(r, a.timing);
  if (!a.audit.empty()) write_text(a.audit, j.dump(2) + "\n");
  j.erase("per_hash");
  out << j.dump(2) << '\n';
  err << "estimate " << r.estimate.value() << "  claimed error " << r.claimed_error << "  method "
      << to_string(r.method) << " (" << r.plan.gate << ")\n";
  return kExitOk;
}

int cmd_sparsify(const SparsifyArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.eps > 0 && a.eps <= 0.25)) throw UsageError("--eps must lie in (0, 1/4]");
  const DnfFormula f = load(a.input, err);
  SparsifyOptions opts;
  opts.size_target = a.size_target;
  opts.engine = a.engine == "sunflower" ? StepEngine::Sunflower : StepEngine::QuasiSunflower;
  opts.sunflower_k = a.k;
  const SandwichPair p = sparsify(f, a.eps, opts);

  std::string prefix = a.out;
  if (prefix.empty()) prefix = std::filesystem::path(a.input).replace_extension().string();
  json files = json::object();
  auto emit = [&](const char* which, const DnfFormula& g, const BiasValue& e) {
    const std::string path = prefix + "." + which + ".dnf";
    write_text(path, to_dnf_string(g, {std::string(which) + " approximator, certified error " + e.to_string()}));
    files[which] = path;
  };
  if (a.emit == "lower" || a.emit == "both") emit("lower", p.lower, p.lower_err);
  if (a.emit == "upper" || a.emit == "both") emit("upper", p.upper, p.upper_err);
  if (!a.audit.empty()) write_text(a.audit, audit_jsonl(p));

  json j = {{"input", {{"n", f.num_vars()}, {"size", f.size()}, {"width", f.width()}}},
            {"eps", a.eps},
            {"size_target",
             {{"fact1", p.target.value}, {"representable", p.target.representable},
              {"used", a.size_target ? *a.size_target : p.target.value}}},
            {"lower", {{"size", p.lower.size()}, {"width", p.lower.width()}, {"err", p.lower_err}, {"stop", p.lower_stop}}},
            {"upper", {{"size", p.upper.size()}, {"width", p.upper.width()}, {"err", p.upper_err}, {"stop", p.upper_stop}}},
            {"steps", p.steps.size()},
            {"files", files}};
  out << j.dump(2) << '\n';
  err << "direction  size  width  certified error  stop\n";
  err << "lower      " << p.lower.size() << "  " << p.lower.width() << "  " << p.lower_err.value() << "  "
      << p.lower_stop << '\n';
  err << "upper      " << p.upper.size() << "  " << p.upper.width() << "  " << p.upper_err.value() << "  "
      << p.upper_stop << '\n';
  return kExitOk;
}

int cmd_prg(const PrgArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n < 1 || a.n > 24) throw UsageError("--n must lie in [1, 24]");
  if (a.field_log && a.eps) throw UsageError("give --field-log or --eps, not both");
  const SmallBiasGenerator gen = a.eps ? SmallBiasGenerator::for_bias(a.n, *a.eps)
                                       : SmallBiasGenerator(a.n, a.field_log ? *a.field_log : 5);
  const ParityReport pr = max_parity_bias(gen);
  const bool ok = pr.max_bias <= gen.epsilon_guarantee_exact();
  json j = {{"generator", gen.spec()},
            {"max_parity_bias", pr.max_bias},
            {"argmax_subset", pr.argmax},
            {"guarantee_holds", ok}};
  if (!a.input.empty()) {
    const DnfFormula f = load(a.input, err);
    if (f.num_vars() != a.n) throw UsageError("formula has " + std::to_string(f.num_vars()) + " variables, --n is " +
                                              std::to_string(a.n));
    const FoolingReport fr = fooling_error(f, gen);
    j["fooling"] = {{"expectation", fr.expectation}, {"bias", fr.bias}, {"error", fr.error}};
  }
  out << j.dump(2) << '\n';
  err << "n " << a.n << "  l " << gen.field_log() << "  max parity bias " << pr.max_bias.value() << "  guarantee "
      << gen.epsilon_guarantee() << (ok ? "  ok" : "  VIOLATED") << '\n';
  return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_switch(const SwitchArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const DnfFormula f = load(a.input, err);
  ExperimentConfig cfg;
  cfg.trials = a.trials;
  cfg.s = a.s;
  cfg.eps = a.eps;
  cfg.seed = c.seed;
  cfg.check_sandwich = !a.no_sandwich;
  cfg.threads = thread_count(c);
  json j;
  if (a.mode == "iid") {
    if (!a.p) throw UsageError("iid mode needs --p");
    cfg.kind = SamplerKind::Iid;
    cfg.p = *a.p;
    const SingleTermRates st = single_term_rates(cfg.p, std::max<std::size_t>(1, f.width()));
    j["single_term_reference"] = {{"not_killed", st.not_killed}, {"depth_at_least_one", st.depth_at_least_one}};
  } else {
    const std::size_t w = a.w ? *a.w : std::max<std::size_t>(1, f.width());
    if (a.s > w) throw UsageError("--s must not exceed --w");
    cfg.kind = SamplerKind::Derandomized;
    cfg.schedule = make_schedule(f.num_vars(), w, a.s, a.eps, a.delta, a.c_claim);
    j["schedule"] = schedule_json(*cfg.schedule);
  }
  const ExperimentReport rep = switching_experiment(f, cfg);
  j["mode"] = a.mode;
  j["s"] = a.s;
  j["report"] = report_json(rep);
  out << j.dump(2) << '\n';
  err << "trials " << rep.trials << "  DT>=s rate " << rep.depth_rate() << " (sigma " << rep.depth_sigma()
      << ")  no-sandwich rate " << rep.sandwich_rate();
  if (rep.baseline_bound) err << "  bound (5pw)^s " << *rep.baseline_bound;
  err << '\n';
  return kExitOk;
}

struct Check {
  explicit Check(std::string n) : name(std::move(n)) {}
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::string first_failure;
  void record(bool ok, const std::string& where) {
    if (ok) {
      ++passed;
      return;
    }
    if (failed++ == 0) first_failure = where;
  }
};

int cmd_verify(const VerifyArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  if (a.n < 2 || a.n > 16) throw UsageError("--n must lie in [2, 16]");
  if (a.w < 1 || a.w > a.n) throw UsageError("--w must lie in [1, n]");
  if (!(a.eps > 0 && a.eps <= 0.25)) throw UsageError("--eps must lie in (0, 1/4]");

  std::vector<Check> checks;
  for (const char* name : {"canonicalize", "exact_bias", "restrict", "dt_depth", "unate_split", "sandwich", "greedy",
                           "count", "dnf_roundtrip", "small_bias"})
    checks.emplace_back(name);
  enum { kCanon, kBias, kRestrict, kDepth, kUnate, kSandwich, kGreedy, kCount, kRoundtrip, kSmallBias };

  for (std::size_t inst = 0; inst < a.instances; ++inst) {
    CounterRng rng(c.seed, inst);
    RandomDnfSpec spec;
    spec.n = a.n;
    spec.width = a.w;
    spec.terms = 1 + rng.below(3 * a.n);
    spec.monotone = rng.below(4) == 0;
    const DnfFormula f = random_dnf(spec, rng);
    const std::string where = "instance " + std::to_string(inst);
    const TruthTable tt(f);

    {
      std::vector<Term> raw = f.terms();
      if (!raw.empty()) raw.push_back(raw.front().intersect(raw.front()));  // duplicate
      const DnfFormula g = canonicalize(DnfFormula(f.num_vars(), raw));
      checks[kCanon].record(g == canonicalize(g) && TruthTable(g).words() == tt.words(), where);
    }
    const BiasValue bias = exact_bias(f);
    checks[kBias].record(bias == BiasValue(tt.count(), static_cast<unsigned>(a.n)), where);

    {
      std::vector<Assign> vals(a.n);
      for (auto& v : vals) v = static_cast<Assign>(rng.below(3));
      const Restriction rho{std::span<const Assign>(vals)};
      const DnfFormula fr = restrict(f, rho);
      bool ok = true;
      const std::uint64_t live = std::uint64_t{1} << rho.num_live();
      for (std::uint64_t y = 0; y < live && ok; ++y) {
        const VarSet x = complete(rho, VarSet::from_word(rho.num_live(), y));
        ok = fr.evaluate_word(y) == f.evaluate_word(x.low_word());
      }
      checks[kRestrict].record(ok, where);
    }
    {
      const Compacted cf = compact(f);
      bool ok = true;
      if (cf.formula.num_vars() <= 10) {
        const std::size_t d = dt_depth(f);
        const bool constant = tt.count() == 0 || tt.count() == tt.num_assignments();
        ok = d <= cf.formula.num_vars() && (d == 0) == constant;
      }
      checks[kDepth].record(ok, where);
    }
    {
      const UnateSplit s = extract_unate(f);
      const DnfFormula g = f.subformula(s.unate_indices);
      const bool ok = g.is_unate() &&
                      std::ldexp(static_cast<double>(s.unate_indices.size()), static_cast<int>(f.width())) >=
                          static_cast<double>(f.size());
      checks[kUnate].record(ok, where);
    }
    {
      SparsifyOptions opts;
      opts.size_target = static_cast<double>(f.size() / 2);
      const SandwichPair p = sparsify(f, a.eps, opts);
      const SandwichCheck sc = sandwich_check(p.lower, f, p.upper);
      checks[kSandwich].record(sc.ordered && sc.lower_err <= p.lower_err && sc.upper_err <= p.upper_err, where);
    }
    {
      const GreedyResult g = greedy_sparsify(f, a.eps);
      const SandwichCheck sc = sandwich_check(g.formula, f, f);
      checks[kGreedy].record(sc.ordered && sc.lower_err.value() <= a.eps && sc.lower_err == g.uncovered, where);
    }
    {
      CountOptions opts;
      opts.threads = thread_count(c);
      const CountResult r = dnf_count(f, a.eps, opts);
      checks[kCount].record(abs_difference(r.estimate, bias) <= r.claimed_error + 1e-12, where);
    }
    {
      const ParsedDnf back = parse_dnf(to_dnf_string(f));
      checks[kRoundtrip].record(back.formula == f, where);
    }
  }
  for (unsigned l = 4; l <= 6; ++l) {
    const SmallBiasGenerator gen(std::min<std::size_t>(a.n, 12), l);
    checks[kSmallBias].record(max_parity_bias(gen).max_bias <= gen.epsilon_guarantee_exact(),
                              "l=" + std::to_string(l));
  }

  bool ok = true;
  json rows = json::array();
  err << std::left << std::setw(16) << "check" << std::setw(8) << "pass" << std::setw(8) << "fail" << "status\n";
  for (const Check& ch : checks) {
    ok = ok && ch.failed == 0;
    json row = {{"name", ch.name}, {"passed", ch.passed}, {"failed", ch.failed}};
    if (ch.failed) row["first_failure"] = ch.first_failure;
    rows.push_back(row);
    err << std::left << std::setw(16) << ch.name << std::setw(8) << ch.passed << std::setw(8) << ch.failed
        << (ch.failed ? "FAIL" : "ok") << '\n';
  }
  json j = {{"config", {{"n", a.n}, {"w", a.w}, {"instances", a.instances}, {"eps", a.eps}, {"seed", c.seed}}},
            {"checks", rows},
            {"ok", ok}};
  out << j.dump(2) << '\n';
  return ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"dnfkit: DNF sparsification, small-bias generators, deterministic counting, restrictions"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (default: DNFKIT_THREADS or 1)");
  app.add_option("--seed", common.seed, "Global seed for generated instances and experiments");

  CountArgs ca;
  auto* count = app.add_subcommand("count", "Approximate the fraction of satisfying assignments");
  count->add_option("--input", ca.input, "DNF file")->required()->check(CLI::ExistingFile);
  count->add_option("--eps", ca.eps, "Additive error parameter");
  count->add_option("--mode", ca.mode, "auto, lv or bruteforce")->check(CLI::IsMember({"auto", "lv", "bruteforce"}));
  count->add_option("--budget", ca.budget, "Work budget for the generator route");
  count->add_option("--audit", ca.audit, "Write plan and per-hash values as JSON");
  count->add_option("--field-log", ca.field_log, "Override the per-bucket field size (uncertified)");
  count->add_option("--c-k", ca.c_k, "Constant in the independence parameter");
  count->add_option("--c-eps", ca.c_eps, "Constant in the bias parameter");
  count->add_flag("--timing", ca.timing, "Include wall-clock seconds in the output");

  SparsifyArgs sa;
  auto* sp = app.add_subcommand("sparsify", "Build certified sandwiching approximators");
  sp->add_option("--input", sa.input, "DNF file")->required()->check(CLI::ExistingFile);
  sp->add_option("--eps", sa.eps, "Error budget per direction, at most 1/4");
  sp->add_option("--emit", sa.emit, "lower, upper or both")->check(CLI::IsMember({"lower", "upper", "both"}));
  sp->add_option("--out", sa.out, "Output prefix (default: input path without extension)");
  sp->add_option("--audit", sa.audit, "Write the step log as JSON lines");
  sp->add_option("--size-target", sa.size_target, "Stop once the size is at most this (default: Fact 1 target)");
  sp->add_option("--engine", sa.engine, "quasi or sunflower")->check(CLI::IsMember({"quasi", "sunflower"}));
  sp->add_option("--k", sa.k, "Sunflower size for the sunflower engine")->check(CLI::Range(3, 64));

  PrgArgs pa;
  auto* prg = app.add_subcommand("prg-check", "Certify the small-bias generator by full seed enumeration");
  prg->add_option("--n", pa.n, "Output bits");
  prg->add_option("--field-log", pa.field_log, "Field GF(2^l)")->check(CLI::Range(1, 12));
  prg->add_option("--eps", pa.eps, "Requested bias (chooses l)");
  prg->add_option("--input", pa.input, "Also measure the fooling error on this formula")->check(CLI::ExistingFile);

  SwitchArgs wa;
  auto* sw = app.add_subcommand("switch", "Random restriction experiments");
  sw->add_option("--input", wa.input, "DNF file")->required()->check(CLI::ExistingFile);
  sw->add_option("--mode", wa.mode, "iid or derand")->check(CLI::IsMember({"iid", "derand"}));
  sw->add_option("--p", wa.p, "Live probability (iid)");
  sw->add_option("--w", wa.w, "Width for the round schedule (default: formula width)");
  sw->add_option("--s", wa.s, "Target depth / width")->check(CLI::PositiveNumber);
  sw->add_option("--eps", wa.eps, "Sandwich error");
  sw->add_option("--delta", wa.delta, "Schedule failure parameter");
  sw->add_option("--c-claim", wa.c_claim, "Constant in the per-round survival probability");
  sw->add_option("--trials", wa.trials, "Number of restrictions");
  sw->add_flag("--no-sandwich", wa.no_sandwich, "Skip the sandwich criterion");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run the oracle-backed invariant suite on random instances");
  ver->add_option("--n", va.n, "Variables");
  ver->add_option("--w", va.w, "Width");
  ver->add_option("--instances", va.instances, "Random instances");
  ver->add_option("--eps", va.eps, "Error parameter, at most 1/4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*count) return cmd_count(ca, common, out, err);
    if (*sp) return cmd_sparsify(sa, out, err);
    if (*prg) return cmd_prg(pa, out, err);
    if (*sw) return cmd_switch(wa, common, out, err);
    if (*ver) return cmd_verify(va, common, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
  return kExitUsage;
}

}  // namespace dnfkit
