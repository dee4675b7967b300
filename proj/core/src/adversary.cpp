#include "hkdb/adversary.hpp"

#include <stdexcept>

namespace hkdb::adversary {

using protocol::EntropySource;
using protocol::ProtocolConfig;
using protocol::Responder;
using protocol::Session;

std::string Strategy::name() const {
  switch (kind) {
    case Kind::naive_guess:
      return "naive-guess";
    case Kind::prequery_stick:
      return "prequery-stick";
    case Kind::counter_reuse_extract:
      return "counter-reuse-extract";
    case Kind::early_responder:
      return early_mode == EarlyMode::full ? "early-full" : "early-kernel";
    case Kind::secret_guesser:
      return "secret-guesser";
  }
  return "unknown";
}

Strategy strategy_from_name(std::string_view name) {
  Strategy s;
  if (name == "naive-guess") {
    s.kind = Kind::naive_guess;
  } else if (name == "prequery-stick") {
    s.kind = Kind::prequery_stick;
  } else if (name == "counter-reuse-extract") {
    s.kind = Kind::counter_reuse_extract;
  } else if (name == "early-responder" || name == "early-full") {
    s.kind = Kind::early_responder;
    s.early_mode = EarlyMode::full;
  } else if (name == "early-kernel") {
    s.kind = Kind::early_responder;
    s.early_mode = EarlyMode::kernel;
  } else if (name == "secret-guesser") {
    s.kind = Kind::secret_guesser;
  } else {
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> strategy_names() {
  return {"naive-guess", "prequery-stick", "counter-reuse-extract", "early-responder",
          "early-full",  "early-kernel",   "secret-guesser"};
}

void check_feasible(const Strategy& s, const ProtocolConfig& cfg) {
  if (s.kind == Kind::counter_reuse_extract && cfg.enforce_freshness) {
    throw StrategyInfeasible("counter-reuse-extract needs counter freshness disabled");
  }
  if (s.kind == Kind::prequery_stick && s.pre_queries < 1) {
    throw StrategyInfeasible("prequery-stick needs at least one pre-query");
  }
  if (s.fixed_z && s.fixed_z->size() != cfg.ell) throw std::invalid_argument("fixed z must have ell bits");
}

namespace {

// Mafia-fraud attacker without s: answers uniformly.
class NaiveGuess final : public Responder {
 public:
  std::string name() const override { return "naive-guess"; }
  std::string principal() const override { return "A"; }
  bool reply(std::size_t, std::optional<bool>, Session& s) override { return s.world.entropy().bit(); }
};

// Queries Peggy with its own z before the challenge, then repeats z boxplus h.
class PreQueryStick final : public Responder {
 public:
  explicit PreQueryStick(const Strategy& s) : spec_(s) {}
  std::string name() const override { return "prequery-stick"; }
  std::string principal() const override { return "A"; }

  void prepare(Session& s) override {
    const auto& cfg = s.world.config();
    BitString z = spec_.fixed_z ? *spec_.fixed_z : s.world.entropy().bits(cfg.ell);
    response_ = s.world.prover_answer(s.a, s.b, z);
    if (cfg.record_events) {
      s.transcript.add(0, "A", protocol::Event::Kind::send, "z", z.to_string());
      s.transcript.add(0, "A", protocol::Event::Kind::receive, "z*h", response_.to_string());
    }
    // Further queries cannot reuse (a, b); Peggy answers them under fresh counters.
    for (unsigned q = 1; q < spec_.pre_queries; ++q) {
      BitString y = s.world.entropy().bits(cfg.ell);
      BitString a_y = s.world.next_prover_counter();
      BitString r_y = s.world.prover_answer(a_y, s.b, y);
      if (cfg.record_events) {
        s.transcript.add(0, "A", protocol::Event::Kind::send, "y" + std::to_string(q), y.to_string());
        s.transcript.add(0, "A", protocol::Event::Kind::receive, "y*h'" + std::to_string(q), r_y.to_string());
      }
    }
  }

  bool reply(std::size_t i, std::optional<bool>, Session&) override { return response_.bit(i); }

 private:
  Strategy spec_;
  BitString response_;
};

// With reusable counters: asks z and not-z under the same (a, b), extracts h.
class CounterReuseExtract final : public Responder {
 public:
  explicit CounterReuseExtract(const Strategy& s) : spec_(s) {}
  std::string name() const override { return "counter-reuse-extract"; }
  std::string principal() const override { return "A"; }

  void prepare(Session& s) override {
    check_feasible(spec_, s.world.config());
    const auto& cfg = s.world.config();
    BitString z = spec_.fixed_z ? *spec_.fixed_z : s.world.entropy().bits(cfg.ell);
    BitString r1 = s.world.prover_answer(s.a, s.b, z);
    BitString r2 = s.world.prover_answer(s.a, s.b, negate(z));
    h_ = extract_token(z, r1, r2);
    if (cfg.record_events) {
      s.transcript.add(0, "A", protocol::Event::Kind::send, "z", z.to_string());
      s.transcript.add(0, "A", protocol::Event::Kind::receive, "z*h", r1.to_string());
      s.transcript.add(0, "A", protocol::Event::Kind::send, "~z", negate(z).to_string());
      s.transcript.add(0, "A", protocol::Event::Kind::receive, "~z*h", r2.to_string());
    }
  }

  bool reply(std::size_t i, std::optional<bool> challenge, Session&) override {
    return *challenge ? h_.h1().bit(i) : h_.h0().bit(i);
  }

 private:
  Strategy spec_;
  ResponseToken h_;
};

// Dishonest Peggy: knows h, answers kernel bits (or all bits) early.
class EarlyResponder final : public Responder {
 public:
  explicit EarlyResponder(EarlyMode mode) : mode_(mode) {}
  std::string name() const override { return mode_ == EarlyMode::full ? "early-full" : "early-kernel"; }
  std::string principal() const override { return "P"; }

  void prepare(Session& s) override {
    h_ = s.world.token(s.a, s.b);
    kernel_ = kernel(h_);
  }

  bool answers_early(std::size_t i, Session&) override {
    return mode_ == EarlyMode::full || kernel_.contains(i);
  }

  bool reply(std::size_t i, std::optional<bool> challenge, Session& s) override {
    if (challenge) return *challenge ? h_.h1().bit(i) : h_.h0().bit(i);
    if (kernel_.contains(i)) return h_.h0().bit(i);
    return s.world.entropy().bit();
  }

 private:
  EarlyMode mode_;
  ResponseToken h_;
  IndexSet kernel_;
};

// Guesses s outright and answers with the hash of its guess.
class SecretGuesser final : public Responder {
 public:
  std::string name() const override { return "secret-guesser"; }
  std::string principal() const override { return "A"; }

  void prepare(Session& s) override {
    BitString guess = s.world.entropy().bits(s.world.config().secret_bits);
    h_ = s.world.token(guess, s.a, s.b);
  }

  bool reply(std::size_t i, std::optional<bool> challenge, Session&) override {
    return *challenge ? h_.h1().bit(i) : h_.h0().bit(i);
  }

 private:
  ResponseToken h_;
};

}  // namespace

std::unique_ptr<Responder> make_responder(const Strategy& s) {
  switch (s.kind) {
    case Kind::naive_guess:
      return std::make_unique<NaiveGuess>();
    case Kind::prequery_stick:
      return std::make_unique<PreQueryStick>(s);
    case Kind::counter_reuse_extract:
      return std::make_unique<CounterReuseExtract>(s);
    case Kind::early_responder:
      return std::make_unique<EarlyResponder>(s.early_mode);
    case Kind::secret_guesser:
      return std::make_unique<SecretGuesser>();
  }
  throw std::invalid_argument("make_responder: unknown strategy");
}

protocol::SessionResult attack_session(const ProtocolConfig& cfg, const Strategy& s, EntropySource& entropy) {
  check_feasible(s, cfg);
  protocol::World world(cfg, entropy);
  auto responder = make_responder(s);
  return protocol::run_session(world, *responder);
}

protocol::SessionResult attack_session(const ProtocolConfig& cfg, const Strategy& s, std::uint64_t seed) {
  protocol::Mt19937Source entropy(seed);
  return attack_session(cfg, s, entropy);
}

namespace {

// Replays a fixed prefix of bits and reports when the run wants more.
class PrefixSource final : public EntropySource {
 public:
  struct NeedMore {};
  explicit PrefixSource(const std::vector<bool>& prefix) : prefix_(prefix) {}
  bool bit() override {
    if (pos_ == prefix_.size()) throw NeedMore{};
    return prefix_[pos_++];
  }

 private:
  const std::vector<bool>& prefix_;
  std::size_t pos_ = 0;
};

}  // namespace

ExactAcceptance exact_acceptance(const ProtocolConfig& cfg, const Strategy& s, unsigned max_bits) {
  ProtocolConfig quiet = cfg;
  quiet.record_events = false;
  if (max_bits > 62) max_bits = 62;
  // Depth-first over the tree of random choices; a leaf of depth d has weight 2^-d.
  ExactAcceptance out;
  Rational accepted = 0;
  std::vector<std::vector<bool>> stack{{}};
  while (!stack.empty()) {
    auto prefix = std::move(stack.back());
    stack.pop_back();
    PrefixSource source(prefix);
    try {
      bool ok = attack_session(quiet, s, source).verdict.accepted;
      ++out.runs;
      out.tape_bits = std::max(out.tape_bits, static_cast<unsigned>(prefix.size()));
      if (ok) accepted += Rational(1, BigInt(1) << prefix.size());
    } catch (const PrefixSource::NeedMore&) {
      if (prefix.size() >= max_bits) {
        throw std::invalid_argument("exact_acceptance: more than " + std::to_string(max_bits) + " random bits");
      }
      auto one = prefix;
      one.push_back(true);
      prefix.push_back(false);
      stack.push_back(std::move(one));
      stack.push_back(std::move(prefix));
    }
  }
  out.probability = ExactProb(accepted);
  return out;
}

ExactProb per_bit_success(const Strategy& s, unsigned ell) {
  // One-bit model: enumerate x, h0, h1 (and z or the guess where relevant).
  unsigned wins = 0;
  unsigned total = 0;
  for (unsigned x = 0; x < 2; ++x) {
    for (unsigned h0 = 0; h0 < 2; ++h0) {
      for (unsigned h1 = 0; h1 < 2; ++h1) {
        for (unsigned aux = 0; aux < 2; ++aux) {
          unsigned correct = x ? h1 : h0;
          unsigned answer = 0;
          switch (s.kind) {
            case Kind::naive_guess:
              answer = aux;
              break;
            case Kind::prequery_stick:
              answer = aux ? h1 : h0;  // aux plays z
              break;
            case Kind::early_responder:
              if (s.early_mode != EarlyMode::full) throw std::invalid_argument("per_bit_success: early-kernel always wins");
              answer = h0 == h1 ? h0 : aux;
              break;
            default:
              throw std::invalid_argument("per_bit_success: unsupported strategy " + s.name());
          }
          ++total;
          if (answer == correct) ++wins;
        }
      }
    }
  }
  return ExactProb::power(Rational(wins, total), ell);
}

std::optional<ExactProb> analytic_acceptance(const Strategy& s, const ProtocolConfig& cfg) {
  switch (s.kind) {
    case Kind::naive_guess:
    case Kind::prequery_stick:
      return per_bit_success(s, cfg.ell);
    case Kind::early_responder:
      if (s.early_mode == EarlyMode::full) return per_bit_success(s, cfg.ell);
      return ExactProb::one();
    case Kind::counter_reuse_extract:
      return ExactProb::one();
    case Kind::secret_guesser: {
      Rational hit = ExactProb::pow2_neg(cfg.secret_bits).value();
      Rational blind = ExactProb::pow2_neg(cfg.ell).value();
      return ExactProb(hit + (1 - hit) * blind);
    }
  }
  return std::nullopt;
}

PolicySearch stick_policy_search(bool z) {
  PolicySearch out;
  // A policy maps the observed bit z boxplus h to an answer: 4 functions.
  for (unsigned policy = 0; policy < 4; ++policy) {
    unsigned wins = 0;
    for (unsigned x = 0; x < 2; ++x) {
      for (unsigned h0 = 0; h0 < 2; ++h0) {
        for (unsigned h1 = 0; h1 < 2; ++h1) {
          unsigned seen = z ? h1 : h0;
          unsigned answer = (policy >> seen) & 1u;
          if (answer == (x ? h1 : h0)) ++wins;
        }
      }
    }
    ++out.policies;
    out.best_wins = std::max(out.best_wins, wins);
    if (policy == 0b10) out.stick_wins = wins;  // answer(0) = 0, answer(1) = 1
  }
  return out;
}

}  // namespace hkdb::adversary
