#pragma once

// Monte Carlo estimation, sweeps, the Bayes bound, and the exact claim
// checks behind `hkdb enumerate`.

#include "hkdb/adversary.hpp"
#include "hkdb/oracle.hpp"
#include "hkdb/protocol.hpp"
#include "hkdb/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hkdb::harness {

/// Seed of trial `index`: splitmix64 applied to master_seed + index.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for `successes` out of `trials` at `z` standard deviations.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

struct Estimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  Interval ci95;
  std::optional<ExactProb> analytic;
  double z_score = 0.0;  // (p_hat - p0) / sqrt(p0 (1 - p0) / n); 0 when p0 is 0 or 1

  /// The analytic value lies inside the Wilson interval at `sigmas`.
  bool consistent(double sigmas = 5.0) const;
  /// Mean verifier distance estimate over accepted and rejected runs.
  double mean_estimated_distance = 0.0;
};

/// Runs `trials` independent sessions, each in a fresh world seeded by
/// trial_seed(master_seed, i). The count does not depend on `workers`.
Estimate monte_carlo(const protocol::ProtocolConfig& cfg, const adversary::Strategy& s, std::uint64_t trials,
                     std::uint64_t master_seed, unsigned workers = 0);

/// Same for the honest prover (no strategy).
Estimate monte_carlo_honest(const protocol::ProtocolConfig& cfg, std::uint64_t trials, std::uint64_t master_seed,
                            unsigned workers = 0);

struct SweepRow {
  unsigned ell = 0;
  std::string strategy;
  Estimate estimate;
  std::optional<double> ratio_to_prev;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// exp of the least-squares slope of log p_hat against ell (rows with p_hat > 0).
  std::optional<double> decay_ratio;
};

SweepResult sweep(const protocol::ProtocolConfig& base, const adversary::Strategy& s, unsigned ell_lo,
                  unsigned ell_hi, std::uint64_t trials, std::uint64_t master_seed, unsigned workers = 0);

/// Header: ell,strategy,trials,successes,p_hat,ci_lo,ci_hi,analytic_num,analytic_den,z
void write_csv(std::ostream& os, const SweepResult& r);
nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const SweepResult& r);

/// 1 - (pA C)/D - (pE C)/D clamped to [0, 1]. Throws std::invalid_argument on
/// D = 0 or arguments outside their ranges.
Rational bayes_bound(const Rational& pA, const Rational& pE, const Rational& C, const Rational& D);

// Exact claim checks.

struct ClaimResult {
  std::string claim;
  unsigned ell = 0;
  bool pass = true;
  nlohmann::json detail = nlohmann::json::object();
  /// Flat rows for CSV output: label, value, expected, ok.
  struct Row {
    std::string label;
    Rational value;
    Rational expected;
    bool ok = true;
  };
  std::vector<Row> rows;

  void add(std::string label, const Rational& value, const Rational& expected, bool ok);
  void add(std::string label, const Rational& value, const Rational& expected) {
    add(std::move(label), value, expected, value == expected);
  }
};

/// {z, z boxplus h} |- x boxplus h and {z boxplus h} |- x boxplus h for every z.
ClaimResult claim_monty(unsigned ell);
/// sum_x 2^-ell ({x, z, z boxplus h} |- x boxplus h) for every z, and the
/// binomial identity for 0..binomial_max.
ClaimResult claim_attacker_average(unsigned ell, unsigned binomial_max = 20);
/// Average of ({h} |- x boxplus h) over every token h.
ClaimResult claim_early(unsigned ell);
/// `samples` random tokens: ({h} |- x boxplus h) = 2^(|kernel| - ell), and
/// ({x, h}) = ({x masked by the kernel, h}).
ClaimResult claim_kernel(unsigned ell, unsigned samples = 20, std::uint64_t seed = 4);
/// Every (x, z): ({x, z, f(z)} |- f(x)) = 2^-Delta for a uniform token f,
/// and a bitwise f with dependent halves breaks the equality.
ClaimResult claim_hamming(unsigned ell);
/// Random corpus of small scenarios plus fixed examples, one of them a
/// counterexample small enough to check by hand.
ClaimResult claim_subbayes(unsigned scenarios = 60, std::uint64_t seed = 2024, unsigned max_bits = 12);
ClaimResult claim_binomial(unsigned ell_max);
/// Guessing x boxplus H(s.a.b) with and without s, at ell and |s| = secret_bits.
ClaimResult claim_known_secret(unsigned ell, unsigned secret_bits = 2);

ClaimResult run_claim(const std::string& name, unsigned ell);
std::vector<std::string> claim_names();

nlohmann::json to_json(const ClaimResult& r);
void write_csv(std::ostream& os, const ClaimResult& r);

/// Guard specifications of the two guard propositions at ell and |s|.
/// `with_x` adds x to the attack context.
oracle::GuardSpec attack_guard_spec(unsigned ell, unsigned secret_bits, bool with_x);
oracle::GuardSpec early_guard_spec(unsigned ell, unsigned secret_bits);

}  // namespace hkdb::harness
