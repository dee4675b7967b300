// hkdb: exact claim checks, Monte Carlo runs, sweeps, guard checks and the
// acceptance bound from the command line.
//
// Exit status: 0 when every check passes, 1 on a violated invariant, 2 on a
// usage error.

#include "hkdb/adversary.hpp"
#include "hkdb/harness.hpp"
#include "hkdb/oracle.hpp"
#include "hkdb/protocol.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

using namespace hkdb;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

protocol::ProtocolConfig load_config(const std::string& path) {
  protocol::ProtocolConfig cfg;
  if (path.empty()) return cfg;
  try {
    cfg = protocol::config_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  return cfg;
}

void print_lint(const protocol::ProtocolConfig& cfg) {
  for (const auto& w : cfg.lint()) std::cerr << "warning: " << w << '\n';
}

std::pair<unsigned, unsigned> parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      unsigned v = static_cast<unsigned>(std::stoul(text));
      return {v, v};
    }
    return {static_cast<unsigned>(std::stoul(text.substr(0, dots))),
            static_cast<unsigned>(std::stoul(text.substr(dots + 2)))};
  } catch (const std::exception&) {
    throw UsageError("bad ell range '" + text + "', expected A..B");
  }
}

struct EnumerateArgs {
  std::string claim;
  unsigned ell = 3;
  std::string out = "json";
};

int run_enumerate(const EnumerateArgs& a) {
  harness::ClaimResult r;
  try {
    r = harness::run_claim(a.claim, a.ell);
  } catch (const oracle::BudgetExceeded& e) {
    throw UsageError(e.what());
  }
  if (a.out == "csv") {
    harness::write_csv(std::cout, r);
  } else {
    std::cout << harness::to_json(r).dump(2) << '\n';
  }
  return r.pass ? kOk : kViolation;
}

struct SimulateArgs {
  std::string strategy;
  unsigned ell = 8;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string config;
  unsigned pre_queries = 1;
  std::string early_mode;
  unsigned workers = 0;
};

adversary::Strategy make_strategy(const std::string& name, unsigned pre_queries, const std::string& early_mode) {
  adversary::Strategy s = adversary::strategy_from_name(name);
  s.pre_queries = pre_queries;
  if (early_mode == "kernel") {
    s.early_mode = adversary::EarlyMode::kernel;
  } else if (early_mode == "full") {
    s.early_mode = adversary::EarlyMode::full;
  }
  return s;
}

int run_simulate(const SimulateArgs& a) {
  auto cfg = load_config(a.config);
  cfg.ell = a.ell;
  cfg.validate();
  print_lint(cfg);
  nlohmann::json out = {{"config", protocol::to_json(cfg)}, {"seed", a.seed}};
  if (a.strategy == "honest") {
    auto e = harness::monte_carlo_honest(cfg, a.trials, a.seed, a.workers);
    out["strategy"] = "honest";
    out["estimate"] = harness::to_json(e);
    std::cout << out.dump(2) << '\n';
    return e.successes == e.trials ? kOk : kViolation;
  }
  auto s = make_strategy(a.strategy, a.pre_queries, a.early_mode);
  out["strategy"] = s.name();
  try {
    auto e = harness::monte_carlo(cfg, s, a.trials, a.seed, a.workers);
    out["estimate"] = harness::to_json(e);
    std::cout << out.dump(2) << '\n';
    return !e.analytic || e.consistent(5.0) ? kOk : kViolation;
  } catch (const adversary::StrategyInfeasible& e) {
    out["infeasible"] = e.what();
    std::cout << out.dump(2) << '\n';
    return kViolation;
  }
}

struct SweepArgs {
  std::string strategy;
  std::string ell = "1..8";
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  unsigned pre_queries = 1;
  std::string early_mode;
  unsigned workers = 0;
};

int run_sweep(const SweepArgs& a) {
  auto [lo, hi] = parse_range(a.ell);
  auto cfg = load_config(a.config);
  cfg.ell = lo;
  cfg.validate();
  print_lint(cfg);
  auto s = make_strategy(a.strategy, a.pre_queries, a.early_mode);
  harness::SweepResult r;
  try {
    r = harness::sweep(cfg, s, lo, hi, a.trials, a.seed, a.workers);
  } catch (const adversary::StrategyInfeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kViolation;
  }
  if (a.out.empty() || a.out == "-") {
    harness::write_csv(std::cout, r);
  } else {
    std::ofstream csv(a.out);
    if (!csv) throw UsageError("cannot write " + a.out);
    harness::write_csv(csv, r);
    nlohmann::json summary = {{"strategy", s.name()}, {"csv", a.out}, {"rows", r.rows.size()}};
    if (r.decay_ratio) summary["decay_ratio"] = *r.decay_ratio;
    std::cout << summary.dump(2) << '\n';
  }
  if (r.decay_ratio) std::cerr << "decay ratio: " << *r.decay_ratio << '\n';
  return kOk;
}

struct GuardArgs {
  std::string spec;
  bool algebraic = false;
  bool probabilistic = false;
  unsigned budget_bits = 24;
};

int run_guard_check(const GuardArgs& a) {
  oracle::GuardSpec spec;
  try {
    spec = oracle::guard_spec_from_json(read_json(a.spec));
  } catch (const std::invalid_argument& e) {
    throw UsageError(a.spec + ": " + e.what());
  }
  oracle::EnumOptions opts;
  opts.budget_bits = a.budget_bits;
  auto mode = a.algebraic ? oracle::GuessMode::algebraic : oracle::GuessMode::map;
  oracle::GuardReport rep;
  try {
    rep = oracle::check_prob_guard(spec, mode, opts);
  } catch (const oracle::BudgetExceeded& e) {
    throw UsageError(e.what());
  }
  auto j = oracle::to_json(rep, spec);
  j["mode"] = a.algebraic ? "algebraic" : "probabilistic";
  std::cout << j.dump(2) << '\n';
  return rep.holds ? kOk : kViolation;
}

struct BoundArgs {
  std::string pA, pE, C, D;
};

int run_bound(const BoundArgs& a) {
  Rational v = harness::bayes_bound(parse_rational(a.pA), parse_rational(a.pE), parse_rational(a.C),
                                    parse_rational(a.D));
  nlohmann::json out = {{"bound", oracle::rational_json(v)}, {"decimal", to_decimal(v, 15)}};
  std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hancke-Kuhn distance bounding: exact guessing chances and attack simulation"};
  app.require_subcommand(1);

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "Exact claim check by enumeration");
  enumerate->add_option("--claim", en.claim, "Claim to check")
      ->required()
      ->check(CLI::IsMember(harness::claim_names()));
  enumerate->add_option("--ell", en.ell, "Challenge length")->check(CLI::Range(0u, 24u));
  enumerate->add_option("--out", en.out, "Output format")->check(CLI::IsMember({"json", "csv"}));

  SimulateArgs sim;
  auto names = adversary::strategy_names();
  names.push_back("honest");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the acceptance rate");
  simulate->add_option("--strategy", sim.strategy, "Adversary strategy")->required()->check(CLI::IsMember(names));
  simulate->add_option("--ell", sim.ell, "Challenge length")->check(CLI::Range(1u, 64u));
  simulate->add_option("--trials", sim.trials, "Number of sessions")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--config", sim.config, "Protocol configuration JSON")->check(CLI::ExistingFile);
  simulate->add_option("--pre-queries", sim.pre_queries, "Queries to the prover (prequery-stick)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--early-mode", sim.early_mode, "Early responder mode")
      ->check(CLI::IsMember({"kernel", "full"}));
  simulate->add_option("--workers", sim.workers, "Worker threads (0: all cores)");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Acceptance rate over a range of challenge lengths");
  sweep->add_option("--strategy", sw.strategy, "Adversary strategy")
      ->required()
      ->check(CLI::IsMember(adversary::strategy_names()));
  sweep->add_option("--ell", sw.ell, "Range A..B");
  sweep->add_option("--trials", sw.trials, "Sessions per ell")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sw.seed, "Master seed");
  sweep->add_option("--out", sw.out, "CSV file ('-' for stdout)");
  sweep->add_option("--config", sw.config, "Protocol configuration JSON")->check(CLI::ExistingFile);
  sweep->add_option("--pre-queries", sw.pre_queries, "Queries to the prover (prequery-stick)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--early-mode", sw.early_mode, "Early responder mode")->check(CLI::IsMember({"kernel", "full"}));
  sweep->add_option("--workers", sw.workers, "Worker threads (0: all cores)");

  GuardArgs gc;
  auto* guard = app.add_subcommand("guard-check", "Check a guard specification over every context subset");
  guard->add_option("--spec", gc.spec, "Guard specification JSON")->required()->check(CLI::ExistingFile);
  auto* alg = guard->add_flag("--algebraic", gc.algebraic, "Guessing restricted to derivations");
  auto* prob = guard->add_flag("--probabilistic", gc.probabilistic, "Optimal guessing (default)");
  alg->excludes(prob);
  guard->add_option("--budget-bits", gc.budget_bits, "Largest enumeration in bits");

  BoundArgs bd;
  auto* bound = app.add_subcommand("bound", "Lower bound on an honest challenge-response run");
  bound->add_option("--pA", bd.pA, "Attacker success probability")->required();
  bound->add_option("--pE", bd.pE, "Early-prover success probability")->required();
  bound->add_option("--C", bd.C, "Probability of a run with the adversary")->required();
  bound->add_option("--D", bd.D, "Probability of a run with an honest prover")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*enumerate) return run_enumerate(en);
    if (*simulate) return run_simulate(sim);
    if (*sweep) return run_sweep(sw);
    if (*guard) return run_guard_check(gc);
    if (*bound) return run_bound(bd);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  }
  return kUsage;
}
