// Acceptance run: one PASS/FAIL line per criterion, each checked at its
// stated tolerance and time limit.
//
//   hkdb_acceptance            all criteria
//   hkdb_acceptance -c 6 -c 8  selected criteria

#include "hkdb/adversary.hpp"
#include "hkdb/harness.hpp"
#include "hkdb/oracle.hpp"
#include "hkdb/protocol.hpp"
#include "hkdb/symbolic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace hkdb;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "failed: " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

struct Criterion {
  int id;
  const char* title;
  double seconds;  // time limit
  std::function<Outcome()> run;
};

std::string str(const Rational& r) { return ExactProb(r).to_string(); }

Rational three_quarters(unsigned ell) { return ExactProb::power(Rational(3, 4), ell).value(); }

Outcome c01() {
  Outcome o;
  const Rational want[] = {Rational(3, 4), Rational(9, 16), Rational(27, 64), Rational(81, 256)};
  for (unsigned ell = 1; ell <= 4; ++ell) {
    auto r = harness::claim_monty(ell);
    o.require(r.pass, "monty ell=" + std::to_string(ell));
    for (const auto& row : r.rows) o.require(row.value == want[ell - 1], row.label);
  }
  o.note("3/4, 9/16, 27/64, 81/256 over every z");
  return o;
}

Outcome c02() {
  Outcome o;
  for (unsigned ell = 1; ell <= 4; ++ell) {
    auto r = harness::claim_attacker_average(ell, 20);
    o.require(r.pass, "attacker average ell=" + std::to_string(ell));
    for (const auto& row : r.rows) {
      if (row.label.rfind("sum_x", 0) == 0) o.require(row.value == three_quarters(ell), row.label);
    }
  }
  o.note("sum over x equals (3/4)^ell for every z, ell<=4; binomial identity ell<=20");
  return o;
}

Outcome c03() {
  Outcome o;
  for (unsigned ell = 1; ell <= 3; ++ell) {
    auto r = harness::claim_early(ell);
    o.require(r.pass, "early ell=" + std::to_string(ell));
    o.require(r.rows.front().value == three_quarters(ell), "average ell=" + std::to_string(ell));
  }
  o.note("average over all 2^(2 ell) tokens equals (3/4)^ell, ell<=3");
  return o;
}

Outcome c04() {
  Outcome o;
  auto r = harness::claim_kernel(4, 20, 4);
  o.require(r.pass, "kernel chance");
  o.note(std::to_string(r.rows.size() / 2) + " tokens at ell=4");
  return o;
}

Outcome c05() {
  Outcome o;
  auto r = harness::claim_hamming(3);
  o.require(r.pass, "hamming");
  o.require(r.detail.contains("dependent_counterexample"), "dependent halves must break the equality");
  o.note("64 pairs at ell=3 equal 2^-Delta; dependent halves at ell=2 break it");
  return o;
}

Outcome c06() {
  Outcome o;
  auto r = harness::claim_subbayes(60, 2024, 12);
  const auto& d = r.detail;
  o.require(d["scenarios"].get<std::size_t>() >= 50, "corpus size");
  o.require(d["inequality_violations"].get<unsigned>() == 0,
            std::to_string(d["inequality_violations"].get<unsigned>()) + " inequality violations");
  o.require(d["equality_misses"].get<unsigned>() == 0,
            std::to_string(d["equality_misses"].get<unsigned>()) + " equality misses with disjoint FV");
  o.note(std::to_string(d["scenarios"].get<std::size_t>()) + " scenarios");
  if (!d["examples"].empty()) {
    const auto& e = d["examples"][0];
    o.note("e.g. Xi=" + e["xi"].get<std::string>() + " Gamma=" + e["gamma"].get<std::string>() +
           " Theta=" + e["theta"].get<std::string>() + " lhs=" + e["lhs"]["num"].get<std::string>() + "/" +
           e["lhs"]["den"].get<std::string>() + " rhs=" + e["rhs"]["num"].get<std::string>() + "/" +
           e["rhs"]["den"].get<std::string>());
  }
  return o;
}

Outcome c07() {
  Outcome o;
  for (bool with_x : {false, true}) {
    auto rep = oracle::check_prob_guard(harness::attack_guard_spec(1, 2, with_x));
    o.require(rep.holds, std::string("attack guard") + (with_x ? " with x" : ""));
    o.note("attack" + std::string(with_x ? "+x" : "") + ": " + std::to_string(rep.checked) + "/" +
           std::to_string(rep.subsets) + " subsets with advantage");
  }
  auto rep = oracle::check_prob_guard(harness::early_guard_spec(1, 2));
  o.require(rep.holds, "early guard");
  o.note("early: " + std::to_string(rep.checked) + "/" + std::to_string(rep.subsets));
  return o;
}

Outcome c08() {
  Outcome o;
  protocol::ProtocolConfig cfg;
  auto check = [&](const char* name, unsigned ell, std::uint64_t trials, const Rational& want) {
    cfg.ell = ell;
    auto e = harness::monte_carlo(cfg, adversary::strategy_from_name(name), trials, 20240 + ell);
    bool exact = e.analytic && e.analytic->value() == want;
    o.require(exact && e.consistent(5.0), std::string(name) + " ell=" + std::to_string(ell) + " p_hat=" +
                                             std::to_string(e.p_hat) + " z=" + std::to_string(e.z_score));
    return e;
  };
  auto stick = check("prequery-stick", 8, 1000000, three_quarters(8));
  o.require(ExactProb(three_quarters(8)).to_decimal(7) == "0.1001129", "reference value 0.1001129");
  for (unsigned ell = 1; ell <= 6; ++ell) check("naive-guess", ell, 100000, ExactProb::pow2_neg(ell).value());
  for (unsigned ell = 1; ell <= 8; ++ell) check("early-full", ell, 100000, three_quarters(ell));
  std::ostringstream os;
  os << "prequery-stick ell=8 p_hat=" << stick.p_hat << " z=" << stick.z_score;
  o.note(os.str());
  return o;
}

Outcome c09() {
  Outcome o;
  protocol::ProtocolConfig cfg;
  cfg.enforce_freshness = false;
  auto s = adversary::strategy_from_name("counter-reuse-extract");
  auto e = harness::monte_carlo(cfg, s, 10000, 9);
  o.require(e.successes == e.trials, "acceptance " + std::to_string(e.successes) + "/10000");
  bool infeasible = false;
  try {
    harness::monte_carlo(protocol::ProtocolConfig{}, s, 10, 9);
  } catch (const adversary::StrategyInfeasible&) {
    infeasible = true;
  }
  o.require(infeasible, "must be infeasible under freshness");
  o.note("10000/10000 accepted without freshness; infeasible with it");
  return o;
}

Outcome c10() {
  Outcome o;
  protocol::ProtocolConfig cfg;
  cfg.ell = 32;
  cfg.estimator = protocol::Estimator::mean;
  cfg.record_events = false;
  auto s = adversary::strategy_from_name("early-kernel");
  const int runs = 1000;
  double early_sum = 0, honest_sum = 0, ratio_sum = 0, expect_sum = 0, worst = 0;
  int accepted = 0;
  for (int i = 0; i < runs; ++i) {
    auto seed = harness::trial_seed(1010, static_cast<std::uint64_t>(i));
    auto early = adversary::attack_session(cfg, s, seed);
    auto honest = protocol::run_honest_session(cfg, seed);
    o.require(early.transcript.verifier_token == honest.transcript.verifier_token, "shared token");
    if (early.verdict.accepted) ++accepted;
    double k = static_cast<double>(kernel(early.transcript.verifier_token).size());
    double ratio = early.verdict.estimated_distance / honest.verdict.estimated_distance;
    double expect = 1.0 - k / cfg.ell;
    early_sum += early.verdict.estimated_distance;
    honest_sum += honest.verdict.estimated_distance;
    ratio_sum += ratio;
    expect_sum += expect;
    if (expect > 0) worst = std::max(worst, std::abs(ratio / expect - 1.0));
  }
  o.require(accepted == runs, "acceptance " + std::to_string(accepted) + "/" + std::to_string(runs));
  o.require(early_sum < honest_sum, "mean estimate must drop");
  double rel = std::abs(ratio_sum / expect_sum - 1.0);
  o.require(rel <= 0.10 && worst <= 0.10, "reduction factor off by more than 10%");
  std::ostringstream os;
  os << "mean estimate " << early_sum / runs << " vs honest " << honest_sum / runs << ", mean ratio "
     << ratio_sum / runs << " vs 1-|k|/ell " << expect_sum / runs;
  o.note(os.str());
  return o;
}

Outcome c11() {
  Outcome o;
  using namespace symbolic;
  auto dh = Theory::by_name("dh");
  auto p = [&](const Theory& th, std::initializer_list<const char*> ts) {
    std::vector<Term> out;
    for (auto t : ts) out.push_back(th.parse(t));
    return out;
  };
  auto gxy = dh.parse("exp(g,mult(x,y))");
  o.require(derivable(p(dh, {"x", "exp(g,y)"}), gxy, dh), "{x, g^y} derives g^xy");
  o.require(!derivable(p(dh, {"exp(g,x)", "exp(g,y)"}), gxy, dh), "{g^x, g^y} must not derive g^xy");
  auto closure = derive_closure(p(dh, {"exp(g,x)", "exp(g,y)"}), dh, {3, 64, 20000});
  o.require(closure.terms.count(gxy) == 0, "closure of {g^x, g^y}");
  auto guard = check_alg_guard({p(dh, {"x", "exp(g,y)"}), p(dh, {"y", "exp(g,x)"})}, gxy,
                               p(dh, {"x", "y", "exp(g,x)", "exp(g,y)"}), dh);
  o.require(guard.holds, "DH guard");

  auto pr = Theory::by_name("pairing");
  o.require(derivable(p(pr, {"a.b"}), pr.parse("a"), pr) && derivable(p(pr, {"a.b"}), pr.parse("b"), pr),
            "pairing projections");

  // Guessers that read no random bits: the probabilistic guard check reduces
  // to the algebraic one.
  struct Case {
    const char* theory;
    std::vector<std::vector<const char*>> guards;
    const char* target;
    std::vector<const char*> context;
  };
  std::vector<Case> corpus = {
      {"dh", {{"x", "exp(g,y)"}, {"y", "exp(g,x)"}}, "exp(g,mult(x,y))", {"x", "y", "exp(g,x)", "exp(g,y)"}},
      {"dh", {{"x"}}, "exp(g,mult(x,y))", {"y", "exp(g,x)", "exp(g,y)"}},
      {"pairing", {{"x"}}, "x", {"x.y", "y"}},
      {"pairing", {{"y"}}, "x", {"x.y", "y"}},
      {"dy", {{"k"}}, "m", {"enc(m,k)", "k", "y"}},
      {"dy", {{"j"}}, "m", {"enc(m,k)", "enc(k,j)", "j"}},
      {"cr", {{"c(n)", "s"}}, "r(n,s)", {"c(n)", "s", "n"}},
      {"hk", {{"s"}, {"boxplus(z,h)"}}, "boxplus(x,h)", {"h", "x", "z", "boxplus(z,h)"}},
  };
  int agree = 0;
  for (const auto& c : corpus) {
    auto th = Theory::by_name(c.theory);
    oracle::GuardSpec spec;
    spec.theory = c.theory;
    for (const auto& g : c.guards) {
      std::vector<Term> set;
      for (auto t : g) set.push_back(th.parse(t));
      spec.guards.push_back(set);
    }
    spec.target = th.parse(c.target);
    for (auto t : c.context) spec.context.push_back(th.parse(t));
    auto alg = oracle::check_prob_guard(spec, oracle::GuessMode::algebraic);
    auto sym = check_alg_guard(spec.guards, spec.target, spec.context, th);
    if (alg.holds == sym.holds) ++agree;
  }
  o.require(agree == static_cast<int>(corpus.size()), "collapse corpus");
  o.note("DH example, projections, and " + std::to_string(agree) + "/" + std::to_string(corpus.size()) +
         " collapse scenarios agree");
  return o;
}

Outcome c12() {
  Outcome o;
  Rational p = three_quarters(16);
  Rational b = harness::bayes_bound(p, p, Rational(1, 2), Rational(1, 2));
  // Independent evaluation in floating point.
  double ref = 1.0 - 2.0 * std::pow(0.75, 16);
  char a[32], r[32];
  std::snprintf(a, sizeof a, "%.10g", static_cast<double>(b));
  std::snprintf(r, sizeof r, "%.10g", ref);
  o.require(std::string(a) == r, std::string("bound ") + a + " vs " + r);
  o.require(b == 1 - 2 * p, "exact form");
  o.note(std::string("1 - 2 (3/4)^16 = ") + a + " (" + str(b) + ")");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("-c,--criterion", only, "Criterion number (repeatable)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  std::vector<Criterion> all = {
      {1, "exact Monty-Hall value", 1, c01},
      {2, "attacker expectation", 5, c02},
      {3, "early-prover expectation", 5, c03},
      {4, "kernel chance", 5, c04},
      {5, "Hamming chance", 10, c05},
      {6, "subbayesian inequality", 30, c06},
      {7, "guard propositions", 60, c07},
      {8, "Monte Carlo calibration", 120, c08},
      {9, "counter-reuse attack", 10, c09},
      {10, "distance-fraud observable", 30, c10},
      {11, "symbolic engine", 5, c11},
      {12, "acceptance bound", 1, c12},
  };

  bool all_pass = true;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs of %.0fs", secs, c.seconds);
    o.require(secs <= c.seconds, std::string("time limit (") + timing + ")");
    all_pass = all_pass && o.pass;
    std::printf("criterion %2d %s  %s [%s]: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, timing, o.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
