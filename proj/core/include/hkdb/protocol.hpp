#pragma once

// Discrete-event simulation of the Hancke-Kuhn exchange.
//
// Stage 1 sends the counters a (prover) and b (verifier) in the clear; both
// ends derive h = H(s.a.b). Stage 2 sends the challenge bits x_i in fixed,
// publicly known slots and times each response.

#include "hkdb/bits.hpp"
#include "hkdb/hkfun.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace hkdb::protocol {

enum class Estimator { max, mean };

struct ProtocolConfig {
  unsigned ell = 8;
  unsigned secret_bits = 64;
  unsigned counter_bits = 16;
  std::int64_t velocity = 1;  // distance units per tick
  std::int64_t distance_bound = 10;
  std::int64_t processing_ticks = 0;
  std::map<std::string, std::int64_t> positions{{"V", 0}, {"P", 3}, {"A", 0}};
  bool enforce_freshness = true;
  Estimator estimator = Estimator::max;
  bool record_events = true;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
  /// Human-readable warnings, e.g. a secret no longer than the challenge.
  std::vector<std::string> lint() const;

  std::int64_t position(const std::string& who) const;
  std::int64_t delay(const std::string& from, const std::string& to) const;
  /// Longest accepted round trip: ceil(2 * bound / velocity) + processing.
  std::int64_t window() const;
};

ProtocolConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ProtocolConfig& cfg);

/// Source of every random bit a session consumes.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual bool bit() = 0;
  BitString bits(std::size_t n);
};

class Mt19937Source final : public EntropySource {
 public:
  explicit Mt19937Source(std::uint64_t seed) : rng_(seed) {}
  bool bit() override;
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::uint64_t buffer_ = 0;
  unsigned left_ = 0;
};

/// Reads a fixed bit tape; used to enumerate every random choice exactly.
class TapeSource final : public EntropySource {
 public:
  TapeSource(std::uint64_t tape, unsigned length) : tape_(tape), length_(length) {}
  bool bit() override;
  unsigned consumed() const noexcept { return pos_; }

 private:
  std::uint64_t tape_;
  unsigned length_;
  unsigned pos_ = 0;
};

/// Counts the bits drawn while answering zeros.
class CountingSource final : public EntropySource {
 public:
  bool bit() override {
    ++count_;
    return false;
  }
  unsigned count() const noexcept { return count_; }

 private:
  unsigned count_ = 0;
};

class TapeExhausted : public std::runtime_error {
 public:
  TapeExhausted() : std::runtime_error("entropy tape exhausted") {}
};

/// Memoized idealized hash. Either keyed (output a fixed function of the
/// master seed and the input) or fed from an entropy source on first query.
class RandomOracle {
 public:
  RandomOracle(std::uint64_t master_seed, std::size_t out_bits);
  RandomOracle(EntropySource& source, std::size_t out_bits);

  BitString query(const BitString& input);
  std::size_t out_bits() const noexcept { return out_bits_; }
  std::size_t table_size() const;

 private:
  std::uint64_t master_seed_ = 0;
  EntropySource* source_ = nullptr;
  std::size_t out_bits_;
  mutable std::mutex mu_;
  std::map<BitString, BitString> table_;
};

/// Keyed random_oracle(key) -> 2*ell bits, for standalone use.
BitString random_oracle(std::uint64_t master_seed, const BitString& input, std::size_t out_bits);

class CounterStore {
 public:
  bool contains(const std::string& principal, const BitString& a, const BitString& b) const;
  /// Returns false if the pair was already present.
  bool insert(const std::string& principal, const BitString& a, const BitString& b);
  std::size_t size() const noexcept;

 private:
  std::map<std::string, std::set<std::pair<BitString, BitString>>> used_;
};

struct Event {
  enum class Kind { fresh, send, receive, note };
  std::int64_t tick = 0;
  std::string principal;
  Kind kind = Kind::note;
  std::string label;
  std::string payload;
};

struct Transcript {
  std::vector<Event> events;
  std::string responder;
  BitString a;
  BitString b;
  BitString x;                     // verifier's fresh challenge
  ResponseToken verifier_token;    // h as computed by the verifier
  BitString responses;             // bits received by the verifier
  std::vector<std::int64_t> sent_at;      // challenge send ticks
  std::vector<std::int64_t> received_at;  // response arrival ticks, -1 if none
  bool counters_reused = false;

  void add(std::int64_t tick, std::string principal, Event::Kind kind, std::string label, std::string payload = {});
  void write_jsonl(std::ostream& os) const;
};

enum class Reason { ok, wrong_bits, too_far, counter_reused };
const char* to_string(Reason r);

struct Verdict {
  bool accepted = false;
  std::size_t bits_correct = 0;
  std::vector<std::int64_t> per_bit_rtt;
  double estimated_distance = 0.0;
  Reason reason = Reason::ok;
};

/// Pure function of the transcript. Throws std::invalid_argument when the
/// transcript is malformed.
Verdict verifier_decide(const Transcript& t, const ProtocolConfig& cfg);

/// Long-lived state shared by the sessions of one experiment: the secret,
/// the counters, the hash, and the verifier's record of used counters.
class World {
 public:
  World(const ProtocolConfig& cfg, EntropySource& entropy);

  const ProtocolConfig& config() const noexcept { return cfg_; }
  EntropySource& entropy() noexcept { return entropy_; }
  RandomOracle& oracle() noexcept { return oracle_; }
  CounterStore& store() noexcept { return store_; }
  const BitString& secret() const noexcept { return secret_; }

  /// The prover's counter for a new session; advances only under freshness.
  BitString next_prover_counter();
  /// The verifier's next counter without consuming it (counters are predictable).
  BitString peek_verifier_counter() const;
  BitString next_verifier_counter();

  /// H(s'.a.b) split into halves, for any candidate secret.
  ResponseToken token(const BitString& secret, const BitString& a, const BitString& b);
  ResponseToken token(const BitString& a, const BitString& b) { return token(secret_, a, b); }

  /// Peggy answering `challenge` in a session keyed by (a, b).
  BitString prover_answer(const BitString& a, const BitString& b, const BitString& challenge);
  std::size_t prover_queries() const noexcept { return prover_queries_; }

 private:
  ProtocolConfig cfg_;
  EntropySource& entropy_;
  BitString secret_;
  RandomOracle oracle_;
  CounterStore store_;
  std::uint64_t prover_counter_ = 0;
  std::uint64_t verifier_counter_ = 0;
  std::size_t prover_queries_ = 0;
};

struct Session;

/// Whoever answers the verifier's challenges.
class Responder {
 public:
  virtual ~Responder() = default;
  virtual std::string name() const = 0;
  /// Principal whose position is used ("P" or "A").
  virtual std::string principal() const = 0;
  /// After stage 1, before the first challenge.
  virtual void prepare(Session&) {}
  /// Whether bit i (1-based) is sent without waiting for the challenge.
  virtual bool answers_early(std::size_t, Session&) { return false; }
  /// The response bit; `challenge` is empty for early answers.
  virtual bool reply(std::size_t i, std::optional<bool> challenge, Session& s) = 0;
};

struct Session {
  World& world;
  Transcript& transcript;
  BitString a;
  BitString b;
};

/// Peggy, honest: knows s and waits for each challenge bit.
class HonestProver final : public Responder {
 public:
  std::string name() const override { return "honest"; }
  std::string principal() const override { return "P"; }
  void prepare(Session& s) override;
  bool reply(std::size_t i, std::optional<bool> challenge, Session& s) override;

 private:
  ResponseToken h_;
};

struct SessionResult {
  Transcript transcript;
  Verdict verdict;
};

/// One complete session against `responder`.
SessionResult run_session(World& world, Responder& responder);

/// Convenience: fresh world seeded with `seed`, honest prover.
SessionResult run_honest_session(const ProtocolConfig& cfg, std::uint64_t seed);

}  // namespace hkdb::protocol
