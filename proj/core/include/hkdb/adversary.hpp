#pragma once

// Attacker and dishonest-prover strategies that plug into run_session.

#include "hkdb/protocol.hpp"
#include "hkdb/rational.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hkdb::adversary {

enum class Kind { naive_guess, prequery_stick, counter_reuse_extract, early_responder, secret_guesser };
enum class EarlyMode { kernel, full };

struct Strategy {
  Kind kind = Kind::naive_guess;
  /// PreQueryStick: queries sent to Peggy before the challenge. Only the
  /// first uses the session counters; the rest use fresh ones.
  unsigned pre_queries = 1;
  EarlyMode early_mode = EarlyMode::full;
  /// PreQueryStick / CounterReuseExtract: the attacker's own challenge. Drawn
  /// uniformly when unset.
  std::optional<BitString> fixed_z;

  std::string name() const;
};

/// Accepts naive-guess, prequery-stick, counter-reuse-extract,
/// early-responder, early-full, early-kernel, secret-guesser.
Strategy strategy_from_name(std::string_view name);
std::vector<std::string> strategy_names();

class StrategyInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws StrategyInfeasible when `s` cannot run under `cfg`.
void check_feasible(const Strategy& s, const protocol::ProtocolConfig& cfg);

std::unique_ptr<protocol::Responder> make_responder(const Strategy& s);

/// One session with a fresh world drawn from `seed`.
protocol::SessionResult attack_session(const protocol::ProtocolConfig& cfg, const Strategy& s, std::uint64_t seed);

/// One session reading all randomness from `entropy`.
protocol::SessionResult attack_session(const protocol::ProtocolConfig& cfg, const Strategy& s,
                                       protocol::EntropySource& entropy);

struct ExactAcceptance {
  ExactProb probability;
  unsigned tape_bits = 0;    // longest tape used by any run
  std::uint64_t runs = 0;    // complete runs enumerated
};

/// Acceptance probability by running every sequence of random bits. Runs may
/// draw different numbers of bits; each complete run of d bits weighs 2^-d.
/// Throws std::invalid_argument when a run needs more than `max_bits`.
ExactAcceptance exact_acceptance(const protocol::ProtocolConfig& cfg, const Strategy& s, unsigned max_bits = 22);

/// Exact expected acceptance from the one-bit model raised to the power ell:
/// naive 2^-ell, prequery-stick (3/4)^ell, early (full) (3/4)^ell.
ExactProb per_bit_success(const Strategy& s, unsigned ell);

/// Closed form where one exists (per_bit_success, 1 for counter reuse,
/// and 2^-|s| + (1 - 2^-|s|) 2^-ell for secret guessing).
std::optional<ExactProb> analytic_acceptance(const Strategy& s, const protocol::ProtocolConfig& cfg);

/// Number of the 8 equiprobable (x, h0, h1) outcomes at ell = 1 won by the
/// best deterministic answer policy (z, z boxplus h) -> bit, and by sticking.
struct PolicySearch {
  unsigned stick_wins = 0;
  unsigned best_wins = 0;
  unsigned policies = 0;
};
PolicySearch stick_policy_search(bool z);

}  // namespace hkdb::adversary
