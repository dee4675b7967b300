#include "hkdb/protocol.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace hkdb::protocol {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

// ---------------------------------------------------------------- config

void ProtocolConfig::validate() const {
  if (ell < 1) throw std::invalid_argument("config: ell must be at least 1");
  if (secret_bits < 1) throw std::invalid_argument("config: secret_bits must be at least 1");
  if (counter_bits < 1 || counter_bits > 64) throw std::invalid_argument("config: counter_bits must be in 1..64");
  if (velocity <= 0) throw std::invalid_argument("config: velocity must be positive");
  if (distance_bound < 0) throw std::invalid_argument("config: distance_bound must be non-negative");
  if (processing_ticks < 0) throw std::invalid_argument("config: processing_ticks must be non-negative");
  for (const char* who : {"V", "P", "A"}) {
    if (!positions.count(who)) throw std::invalid_argument(std::string("config: missing position for ") + who);
  }
}

std::vector<std::string> ProtocolConfig::lint() const {
  std::vector<std::string> out;
  if (secret_bits <= ell) {
    out.push_back("secret_bits (" + std::to_string(secret_bits) + ") <= ell (" + std::to_string(ell) +
                  "): guessing s is no harder than guessing x, so the attacker/early-prover case split "
                  "no longer covers every undesired run");
  }
  if (!enforce_freshness) out.push_back("counter freshness is not enforced: responses can be replayed and h extracted");
  return out;
}

std::int64_t ProtocolConfig::position(const std::string& who) const {
  auto it = positions.find(who);
  if (it == positions.end()) throw std::invalid_argument("config: unknown principal '" + who + "'");
  return it->second;
}

std::int64_t ProtocolConfig::delay(const std::string& from, const std::string& to) const {
  std::int64_t d = position(from) - position(to);
  return ceil_div(d < 0 ? -d : d, velocity);
}

std::int64_t ProtocolConfig::window() const { return ceil_div(2 * distance_bound, velocity) + processing_ticks; }

ProtocolConfig config_from_json(const nlohmann::json& doc) {
  ProtocolConfig c;
  c.ell = doc.value("ell", c.ell);
  c.secret_bits = doc.value("secret_bits", c.secret_bits);
  c.counter_bits = doc.value("counter_bits", c.counter_bits);
  c.velocity = doc.value("velocity", c.velocity);
  c.distance_bound = doc.value("distance_bound", c.distance_bound);
  c.processing_ticks = doc.value("processing_ticks", c.processing_ticks);
  if (doc.contains("positions")) {
    for (const auto& [who, pos] : doc.at("positions").items()) c.positions[who] = pos.get<std::int64_t>();
  }
  c.enforce_freshness = doc.value("enforce_freshness", c.enforce_freshness);
  auto est = doc.value("estimator", std::string("max"));
  if (est == "max") {
    c.estimator = Estimator::max;
  } else if (est == "mean") {
    c.estimator = Estimator::mean;
  } else {
    throw std::invalid_argument("config: estimator must be max or mean");
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const ProtocolConfig& c) {
  return {{"ell", c.ell},
          {"secret_bits", c.secret_bits},
          {"counter_bits", c.counter_bits},
          {"velocity", c.velocity},
          {"distance_bound", c.distance_bound},
          {"processing_ticks", c.processing_ticks},
          {"positions", c.positions},
          {"enforce_freshness", c.enforce_freshness},
          {"estimator", c.estimator == Estimator::max ? "max" : "mean"}};
}

// ---------------------------------------------------------------- entropy

BitString EntropySource::bits(std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = bit() ? 1 : 0;
  return BitString(std::move(out));
}

bool Mt19937Source::bit() {
  if (left_ == 0) {
    buffer_ = rng_();
    left_ = 64;
  }
  bool b = buffer_ & 1u;
  buffer_ >>= 1;
  --left_;
  return b;
}

bool TapeSource::bit() {
  if (pos_ >= length_) throw TapeExhausted();
  return (tape_ >> pos_++) & 1u;
}

// ---------------------------------------------------------------- random oracle

BitString random_oracle(std::uint64_t master_seed, const BitString& input, std::size_t out_bits) {
  std::uint64_t state = splitmix64(master_seed ^ (0x5bd1e995ull * (input.size() + 1)));
  auto view = input.view();
  for (std::size_t i = 0; i < view.size(); i += 64) {
    std::uint64_t word = 0;
    for (std::size_t k = i; k < std::min(view.size(), i + 64); ++k) word = (word << 1) | view[k];
    state = splitmix64(state ^ word);
  }
  std::vector<std::uint8_t> out(out_bits);
  std::uint64_t block = 0;
  for (std::size_t i = 0; i < out_bits; ++i) {
    if (i % 64 == 0) block = splitmix64(state + i / 64 + 1);
    out[i] = static_cast<std::uint8_t>((block >> (i % 64)) & 1u);
  }
  return BitString(std::move(out));
}

RandomOracle::RandomOracle(std::uint64_t master_seed, std::size_t out_bits)
    : master_seed_(master_seed), out_bits_(out_bits) {}

RandomOracle::RandomOracle(EntropySource& source, std::size_t out_bits) : source_(&source), out_bits_(out_bits) {}

BitString RandomOracle::query(const BitString& input) {
  std::lock_guard lock(mu_);
  if (auto it = table_.find(input); it != table_.end()) return it->second;
  BitString out = source_ ? source_->bits(out_bits_) : random_oracle(master_seed_, input, out_bits_);
  table_.emplace(input, out);
  return out;
}

std::size_t RandomOracle::table_size() const {
  std::lock_guard lock(mu_);
  return table_.size();
}

// ---------------------------------------------------------------- counters

bool CounterStore::contains(const std::string& principal, const BitString& a, const BitString& b) const {
  auto it = used_.find(principal);
  return it != used_.end() && it->second.count({a, b}) > 0;
}

bool CounterStore::insert(const std::string& principal, const BitString& a, const BitString& b) {
  return used_[principal].insert({a, b}).second;
}

std::size_t CounterStore::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [p, s] : used_) n += s.size();
  return n;
}

// ---------------------------------------------------------------- transcript

void Transcript::add(std::int64_t tick, std::string principal, Event::Kind kind, std::string label,
                     std::string payload) {
  events.push_back({tick, std::move(principal), kind, std::move(label), std::move(payload)});
}

namespace {

const char* kind_name(Event::Kind k) {
  switch (k) {
    case Event::Kind::fresh:
      return "fresh";
    case Event::Kind::send:
      return "send";
    case Event::Kind::receive:
      return "receive";
    case Event::Kind::note:
      return "note";
  }
  return "note";
}

}  // namespace

void Transcript::write_jsonl(std::ostream& os) const {
  for (const auto& e : events) {
    nlohmann::json j = {{"tick", e.tick},
                        {"principal", e.principal},
                        {"action", kind_name(e.kind)},
                        {"label", e.label},
                        {"payload", e.payload}};
    os << j.dump() << '\n';
  }
}

const char* to_string(Reason r) {
  switch (r) {
    case Reason::ok:
      return "ok";
    case Reason::wrong_bits:
      return "wrong_bits";
    case Reason::too_far:
      return "too_far";
    case Reason::counter_reused:
      return "counter_reused";
  }
  return "ok";
}

Verdict verifier_decide(const Transcript& t, const ProtocolConfig& cfg) {
  Verdict v;
  if (t.counters_reused) {
    v.reason = Reason::counter_reused;
    return v;
  }
  const std::size_t ell = cfg.ell;
  if (t.x.size() != ell || t.verifier_token.ell() != ell || t.responses.size() != ell ||
      t.sent_at.size() != ell || t.received_at.size() != ell) {
    throw std::invalid_argument("verifier_decide: transcript does not cover " + std::to_string(ell) + " bits");
  }
  BitString expected = boxplus(t.x, t.verifier_token);
  const std::int64_t window = cfg.window();
  double max_est = 0.0;
  double sum_est = 0.0;
  for (std::size_t i = 0; i < ell; ++i) {
    bool arrived = t.received_at[i] >= 0;
    std::int64_t rtt = arrived ? t.received_at[i] - t.sent_at[i] : -1;
    v.per_bit_rtt.push_back(rtt);
    if (arrived && rtt <= window && t.responses.bit(i + 1) == expected.bit(i + 1)) ++v.bits_correct;
    double est = arrived ? static_cast<double>(std::max<std::int64_t>(0, rtt - cfg.processing_ticks)) *
                               static_cast<double>(cfg.velocity) / 2.0
                         : static_cast<double>(cfg.distance_bound) + 1.0;
    max_est = std::max(max_est, est);
    sum_est += est;
  }
  v.estimated_distance = cfg.estimator == Estimator::max ? max_est : sum_est / static_cast<double>(ell);
  if (v.estimated_distance > static_cast<double>(cfg.distance_bound)) {
    v.reason = Reason::too_far;
  } else if (v.bits_correct != ell) {
    v.reason = Reason::wrong_bits;
  }
  v.accepted = v.reason == Reason::ok;
  return v;
}

// ---------------------------------------------------------------- world

World::World(const ProtocolConfig& cfg, EntropySource& entropy)
    : cfg_(cfg), entropy_(entropy), oracle_(entropy, 2 * std::size_t{cfg.ell}) {
  cfg_.validate();
  secret_ = entropy_.bits(cfg_.secret_bits);
}

BitString World::next_prover_counter() {
  BitString a = BitString::from_uint(prover_counter_, cfg_.counter_bits);
  if (cfg_.enforce_freshness) ++prover_counter_;
  return a;
}

BitString World::peek_verifier_counter() const { return BitString::from_uint(verifier_counter_, cfg_.counter_bits); }

BitString World::next_verifier_counter() {
  BitString b = peek_verifier_counter();
  if (cfg_.enforce_freshness) ++verifier_counter_;
  return b;
}

ResponseToken World::token(const BitString& secret, const BitString& a, const BitString& b) {
  return ResponseToken::from_bits(oracle_.query(concat(concat(secret, a), b)));
}

BitString World::prover_answer(const BitString& a, const BitString& b, const BitString& challenge) {
  ++prover_queries_;
  return boxplus(challenge, token(a, b));
}

// ---------------------------------------------------------------- sessions

void HonestProver::prepare(Session& s) { h_ = s.world.token(s.a, s.b); }

bool HonestProver::reply(std::size_t i, std::optional<bool> challenge, Session&) {
  if (!challenge) throw std::logic_error("HonestProver never answers early");
  return *challenge ? h_.h1().bit(i) : h_.h0().bit(i);
}

SessionResult run_session(World& world, Responder& responder) {
  const ProtocolConfig& cfg = world.config();
  const bool rec = cfg.record_events;
  SessionResult out;
  Transcript& t = out.transcript;
  t.responder = responder.name();
  const std::string who = responder.principal();
  const std::int64_t d = cfg.delay("V", who);

  // Stage 1: plaintext counters.
  std::int64_t now = 0;
  BitString a = world.next_prover_counter();
  BitString b = world.next_verifier_counter();
  if (rec) {
    t.add(now, who, Event::Kind::send, "a", a.to_string());
    t.add(now + d, "V", Event::Kind::receive, "a", a.to_string());
    t.add(now + d, "V", Event::Kind::send, "b", b.to_string());
    t.add(now + 2 * d, who, Event::Kind::receive, "b", b.to_string());
  }
  t.a = a;
  t.b = b;
  now += 2 * d;
  if (cfg.enforce_freshness && !world.store().insert("V", a, b)) {
    t.counters_reused = true;
    if (rec) t.add(now, "V", Event::Kind::note, "counter_reused", a.to_string() + "." + b.to_string());
    out.verdict = verifier_decide(t, cfg);
    return out;
  }

  Session session{world, t, a, b};
  responder.prepare(session);

  t.verifier_token = world.token(a, b);
  t.x = world.entropy().bits(cfg.ell);
  if (rec) t.add(now, "V", Event::Kind::fresh, "x", t.x.to_string());

  // Stage 2: fixed slots, each long enough for an in-bound round trip.
  const std::int64_t slot = cfg.window() + 1;
  const std::int64_t start = now + 1;
  std::vector<std::uint8_t> responses(cfg.ell);
  t.sent_at.resize(cfg.ell);
  t.received_at.resize(cfg.ell);
  for (std::size_t i = 1; i <= cfg.ell; ++i) {
    const std::int64_t sent = start + static_cast<std::int64_t>(i - 1) * slot;
    const bool xi = t.x.bit(i);
    const std::string idx = std::to_string(i);
    t.sent_at[i - 1] = sent;
    if (rec) {
      t.add(sent, "V", Event::Kind::send, "x" + idx, xi ? "1" : "0");
      t.add(sent + d, who, Event::Kind::receive, "x" + idx, xi ? "1" : "0");
    }
    bool r;
    std::int64_t arrival;
    if (responder.answers_early(i, session)) {
      // Timed so the bit lands exactly when the challenge leaves.
      r = responder.reply(i, std::nullopt, session);
      arrival = sent;
    } else {
      r = responder.reply(i, xi, session);
      arrival = sent + 2 * d + cfg.processing_ticks;
    }
    responses[i - 1] = r ? 1 : 0;
    t.received_at[i - 1] = arrival;
    if (rec) {
      t.add(arrival - d, who, Event::Kind::send, "r" + idx, r ? "1" : "0");
      t.add(arrival, "V", Event::Kind::receive, "r" + idx, r ? "1" : "0");
    }
  }
  t.responses = BitString(std::move(responses));
  if (rec) {
    std::stable_sort(t.events.begin(), t.events.end(),
                     [](const Event& l, const Event& r) { return l.tick < r.tick; });
  }
  out.verdict = verifier_decide(t, cfg);
  return out;
}

SessionResult run_honest_session(const ProtocolConfig& cfg, std::uint64_t seed) {
  Mt19937Source entropy(seed);
  World world(cfg, entropy);
  HonestProver prover;
  return run_session(world, prover);
}

}  // namespace hkdb::protocol
