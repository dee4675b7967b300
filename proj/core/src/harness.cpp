#include "hkdb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hkdb::harness {

using oracle::Term;
using oracle::Universe;

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t x = master_seed + (index + 1) * 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) ci.lo = 0.0;
  if (successes == trials) ci.hi = 1.0;
  return ci;
}

bool Estimate::consistent(double sigmas) const {
  if (!analytic) return false;
  auto ci = wilson_interval(successes, trials, sigmas);
  double p0 = analytic->to_double();
  return ci.lo <= p0 && p0 <= ci.hi;
}

namespace {

template <class RunOne>
Estimate run_trials(const protocol::ProtocolConfig& cfg, std::uint64_t trials, std::uint64_t master_seed,
                    unsigned workers, RunOne run_one) {
  if (trials == 0) throw std::invalid_argument("monte_carlo: trials must be at least 1");
  unsigned w = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
  w = static_cast<unsigned>(std::min<std::uint64_t>(w, trials));
  std::vector<std::uint64_t> wins(w, 0);
  std::vector<std::int64_t> dist(w, 0);
  // The verifier's estimate times 2*ell is an integer, so sums are exact.
  const double scale = 2.0 * cfg.ell;
  auto work = [&](unsigned k) {
    std::uint64_t lo = trials * k / w;
    std::uint64_t hi = trials * (k + 1) / w;
    for (std::uint64_t i = lo; i < hi; ++i) {
      auto result = run_one(trial_seed(master_seed, i));
      if (result.verdict.accepted) ++wins[k];
      dist[k] += std::llround(result.verdict.estimated_distance * scale);
    }
  };
  if (w == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(work, k);
  }
  Estimate e;
  e.trials = trials;
  for (auto s : wins) e.successes += s;
  std::int64_t total_dist = 0;
  for (auto d : dist) total_dist += d;
  e.mean_estimated_distance = static_cast<double>(total_dist) / scale / static_cast<double>(trials);
  e.p_hat = static_cast<double>(e.successes) / static_cast<double>(trials);
  e.ci95 = wilson_interval(e.successes, trials);
  return e;
}

void fill_z(Estimate& e) {
  if (!e.analytic) return;
  double p0 = e.analytic->to_double();
  if (p0 <= 0.0 || p0 >= 1.0) return;
  e.z_score = (e.p_hat - p0) / std::sqrt(p0 * (1 - p0) / static_cast<double>(e.trials));
}

}  // namespace

Estimate monte_carlo(const protocol::ProtocolConfig& cfg, const adversary::Strategy& s, std::uint64_t trials,
                     std::uint64_t master_seed, unsigned workers) {
  adversary::check_feasible(s, cfg);
  protocol::ProtocolConfig quiet = cfg;
  quiet.record_events = false;
  Estimate e = run_trials(quiet, trials, master_seed, workers,
                          [&](std::uint64_t seed) { return adversary::attack_session(quiet, s, seed); });
  e.analytic = adversary::analytic_acceptance(s, cfg);
  fill_z(e);
  return e;
}

Estimate monte_carlo_honest(const protocol::ProtocolConfig& cfg, std::uint64_t trials, std::uint64_t master_seed,
                            unsigned workers) {
  protocol::ProtocolConfig quiet = cfg;
  quiet.record_events = false;
  return run_trials(quiet, trials, master_seed, workers,
                    [&](std::uint64_t seed) { return protocol::run_honest_session(quiet, seed); });
}

SweepResult sweep(const protocol::ProtocolConfig& base, const adversary::Strategy& s, unsigned ell_lo,
                  unsigned ell_hi, std::uint64_t trials, std::uint64_t master_seed, unsigned workers) {
  if (ell_lo < 1 || ell_hi < ell_lo) throw std::invalid_argument("sweep: empty ell range");
  if (trials == 0) throw std::invalid_argument("sweep: trials must be at least 1");
  SweepResult out;
  std::vector<double> xs, ys;
  for (unsigned ell = ell_lo; ell <= ell_hi; ++ell) {
    protocol::ProtocolConfig cfg = base;
    cfg.ell = ell;
    SweepRow row;
    row.ell = ell;
    row.strategy = s.name();
    row.estimate = monte_carlo(cfg, s, trials, trial_seed(master_seed, 0xffff0000ull + ell), workers);
    if (!out.rows.empty() && out.rows.back().estimate.p_hat > 0) {
      row.ratio_to_prev = row.estimate.p_hat / out.rows.back().estimate.p_hat;
    }
    if (row.estimate.p_hat > 0) {
      xs.push_back(ell);
      ys.push_back(std::log(row.estimate.p_hat));
    }
    out.rows.push_back(std::move(row));
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.decay_ratio = std::exp(sxy / sxx);
  }
  return out;
}

void write_csv(std::ostream& os, const SweepResult& r) {
  os << "ell,strategy,trials,successes,p_hat,ci_lo,ci_hi,analytic_num,analytic_den,z\n";
  os << std::setprecision(10);
  for (const auto& row : r.rows) {
    const auto& e = row.estimate;
    os << row.ell << ',' << row.strategy << ',' << e.trials << ',' << e.successes << ',' << e.p_hat << ','
       << e.ci95.lo << ',' << e.ci95.hi << ',';
    if (e.analytic) {
      os << e.analytic->num().str() << ',' << e.analytic->den().str();
    } else {
      os << ',';
    }
    os << ',' << e.z_score << '\n';
  }
}

nlohmann::json to_json(const Estimate& e) {
  nlohmann::json j = {{"trials", e.trials},
                      {"successes", e.successes},
                      {"p_hat", e.p_hat},
                      {"ci95", {e.ci95.lo, e.ci95.hi}},
                      {"z", e.z_score},
                      {"mean_estimated_distance", e.mean_estimated_distance}};
  if (e.analytic) {
    j["analytic"] = oracle::rational_json(e.analytic->value());
    j["within_5_sigma"] = e.consistent(5.0);
  }
  return j;
}

nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    auto j = to_json(row.estimate);
    j["ell"] = row.ell;
    j["strategy"] = row.strategy;
    if (row.ratio_to_prev) j["ratio_to_prev"] = *row.ratio_to_prev;
    rows.push_back(std::move(j));
  }
  nlohmann::json out = {{"rows", rows}};
  if (r.decay_ratio) out["decay_ratio"] = *r.decay_ratio;
  return out;
}

Rational bayes_bound(const Rational& pA, const Rational& pE, const Rational& C, const Rational& D) {
  if (D == 0) throw std::invalid_argument("bayes_bound: D must be positive");
  if (D < 0 || D > 1) throw std::invalid_argument("bayes_bound: D must lie in (0, 1]");
  if (C < 0 || C >= 1) throw std::invalid_argument("bayes_bound: C must lie in [0, 1)");
  for (const Rational* p : {&pA, &pE}) {
    if (*p < 0 || *p > 1) throw std::invalid_argument("bayes_bound: probabilities must lie in [0, 1]");
  }
  Rational v = 1 - pA * C / D - pE * C / D;
  if (v < 0) return Rational(0);
  if (v > 1) return Rational(1);
  return v;
}

// ---------------------------------------------------------------- claims

void ClaimResult::add(std::string label, const Rational& value, const Rational& expected, bool ok) {
  rows.push_back({std::move(label), value, expected, ok});
  if (!ok) pass = false;
}

namespace {

std::string bits_of(std::uint64_t v, unsigned len) { return BitString::from_uint(v, len).to_string(); }

std::vector<Term> terms(const Universe& u, std::initializer_list<std::string> texts) {
  std::vector<Term> out;
  for (const auto& t : texts) out.push_back(u.parse(t));
  return out;
}

Rational chance(const Universe& u, const std::vector<Term>& ks, const std::vector<Term>& ts) {
  return oracle::guess_chance(u, ks, ts).value();
}

ClaimResult make_result(std::string name, unsigned ell) {
  ClaimResult r;
  r.claim = std::move(name);
  r.ell = ell;
  return r;
}

unsigned popcount(std::uint64_t v) { return static_cast<unsigned>(__builtin_popcountll(v)); }

}  // namespace

ClaimResult claim_monty(unsigned ell) {
  ClaimResult r = make_result("monty", ell);
  const Rational expected = oracle::analytic(oracle::Claim::monty, std::vector<unsigned>{ell});
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << ell); ++z) {
    Universe u;
    u.declare("x", ell);
    u.declare("h", 2 * ell);
    u.define("z", "#" + bits_of(z, ell));
    auto target = terms(u, {"boxplus(x,h)"});
    r.add("z=" + bits_of(z, ell) + " {z,z*h}", chance(u, terms(u, {"z", "boxplus(z,h)"}), target), expected);
    r.add("z=" + bits_of(z, ell) + " {z*h}", chance(u, terms(u, {"boxplus(z,h)"}), target), expected);
  }
  r.detail["expected"] = oracle::rational_json(expected);
  return r;
}

ClaimResult claim_attacker_average(unsigned ell, unsigned binomial_max) {
  ClaimResult r = make_result("prop34", ell);
  const Rational expected = oracle::analytic(oracle::Claim::monty, std::vector<unsigned>{ell});
  const std::uint64_t n = std::uint64_t{1} << ell;
  for (std::uint64_t z = 0; z < n; ++z) {
    Rational sum = 0;
    for (std::uint64_t x = 0; x < n; ++x) {
      Universe u;
      u.declare("h", 2 * ell);
      u.define("x", "#" + bits_of(x, ell));
      u.define("z", "#" + bits_of(z, ell));
      Rational c = chance(u, terms(u, {"x", "z", "boxplus(z,h)"}), terms(u, {"boxplus(x,h)"}));
      // Fixed x and z: only the disagreeing positions are unknown.
      if (c != oracle::analytic(oracle::Claim::hamming_chance,
                                std::vector<unsigned>{popcount(x ^ z)})) {
        r.add("z=" + bits_of(z, ell) + " x=" + bits_of(x, ell), c,
              oracle::analytic(oracle::Claim::hamming_chance, std::vector<unsigned>{popcount(x ^ z)}));
      }
      sum += c / Rational(n);
    }
    r.add("sum_x z=" + bits_of(z, ell), sum, expected);
  }
  for (unsigned k = 0; k <= binomial_max; ++k) {
    auto b = oracle::binomial_identity_check(k);
    r.add("binomial ell=" + std::to_string(k), b.sum, b.closed_form, b.holds);
  }
  return r;
}

ClaimResult claim_early(unsigned ell) {
  ClaimResult r = make_result("early", ell);
  const std::uint64_t tokens = std::uint64_t{1} << (2 * ell);
  Rational avg = 0;
  for (std::uint64_t h = 0; h < tokens; ++h) {
    Universe u;
    u.declare("x", ell);
    u.define("h", "#" + bits_of(h, 2 * ell));
    Rational c = chance(u, terms(u, {"h"}), terms(u, {"boxplus(x,h)"}));
    auto tok = ResponseToken::from_bits(BitString::from_uint(h, 2 * ell));
    unsigned k = static_cast<unsigned>(kernel(tok).size());
    Rational want = oracle::analytic(oracle::Claim::kernel_chance, std::vector<unsigned>{k, ell});
    if (c != want) r.add("h=" + tok.to_string(), c, want);
    avg += c / Rational(tokens);
  }
  r.add("average over h", avg, oracle::analytic(oracle::Claim::monty, std::vector<unsigned>{ell}));
  adversary::Strategy early = adversary::strategy_from_name("early-full");
  r.add("per-bit model", adversary::per_bit_success(early, ell).value(),
        oracle::analytic(oracle::Claim::monty, std::vector<unsigned>{ell}));
  return r;
}

ClaimResult claim_kernel(unsigned ell, unsigned samples, std::uint64_t seed) {
  ClaimResult r = make_result("kernel", ell);
  std::mt19937_64 rng(seed);
  for (unsigned i = 0; i < samples; ++i) {
    BitString hb = BitString::random(2 * ell, rng);
    auto tok = ResponseToken::from_bits(hb);
    unsigned k = static_cast<unsigned>(kernel(tok).size());
    Universe u;
    u.declare("x", ell);
    u.define("h", "#" + hb.to_string());
    auto target = terms(u, {"boxplus(x,h)"});
    r.add("h=" + hb.to_string() + " |k|=" + std::to_string(k), chance(u, terms(u, {"h"}), target),
          oracle::analytic(oracle::Claim::kernel_chance, std::vector<unsigned>{k, ell}));
    r.add("h=" + hb.to_string() + " masked", chance(u, terms(u, {"kmask(x,h)", "h"}), target),
          chance(u, terms(u, {"x", "h"}), target));
  }
  return r;
}

namespace {

// Block with two seed bits whose value at 0 and at 1 is the same seed bit.
PartitionedFunction dependent_halves(unsigned ell) {
  std::vector<std::uint64_t> table(8);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    table[(seed << 1) | 0u] = (seed >> 1) & 1u;
    table[(seed << 1) | 1u] = (seed >> 1) & 1u;
  }
  return PartitionedFunction::repeated(Block{1, 1, 2, std::move(table)}, ell);
}

}  // namespace

ClaimResult claim_hamming(unsigned ell) {
  ClaimResult r = make_result("hamming", ell);
  const std::uint64_t n = std::uint64_t{1} << ell;
  Universe u;
  u.declare("rho", 2 * ell);
  u.functions.emplace("f", PartitionedFunction::uniform_token(ell));
  u.functions.emplace("g", dependent_halves(std::min(ell, 2u)));
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::uint64_t z = 0; z < n; ++z) {
      Universe v = u;
      v.define("x", "#" + bits_of(x, ell));
      v.define("z", "#" + bits_of(z, ell));
      r.add("x=" + bits_of(x, ell) + " z=" + bits_of(z, ell),
            chance(v, terms(v, {"x", "z", "f(rho,z)"}), terms(v, {"f(rho,x)"})),
            oracle::analytic(oracle::Claim::hamming_chance, std::vector<unsigned>{popcount(x ^ z)}));
    }
  }
  // Converse: halves that are not independent give a larger chance.
  const unsigned small = std::min(ell, 2u);
  bool broken = false;
  Universe w;
  w.declare("rho", 2 * small);
  w.functions.emplace("g", dependent_halves(small));
  for (std::uint64_t x = 0; x < (1u << small) && !broken; ++x) {
    for (std::uint64_t z = 0; z < (1u << small); ++z) {
      Universe v = w;
      v.define("x", "#" + bits_of(x, small));
      v.define("z", "#" + bits_of(z, small));
      Rational c = chance(v, terms(v, {"x", "z", "g(rho,z)"}), terms(v, {"g(rho,x)"}));
      if (c != oracle::analytic(oracle::Claim::hamming_chance, std::vector<unsigned>{popcount(x ^ z)})) {
        broken = true;
        r.detail["dependent_counterexample"] = {{"x", bits_of(x, small)},
                                                {"z", bits_of(z, small)},
                                                {"chance", oracle::rational_json(c)}};
        break;
      }
    }
  }
  r.add("dependent halves break equality", Rational(broken ? 1 : 0), Rational(1));
  return r;
}

namespace {

// Small random expressions over x, y (1 bit) and w, v (2 bits). No hashing:
// oracle access at guessed points is outside the guessing-chance model.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  std::string one(int depth) {
    int pick = static_cast<int>(rng_() % (depth > 0 ? 8 : 5));
    switch (pick) {
      case 0:
        return "x";
      case 1:
        return "y";
      case 2:
        return rng_() & 1u ? "slice(w,1,1)" : "slice(v,2,1)";
      case 3:
        return rng_() & 1u ? "#0" : "#1";
      case 4:
        return rng_() & 1u ? "x" : "y";
      case 5:
        return "neg(" + one(depth - 1) + ")";
      case 6:
        return "boxplus(" + one(depth - 1) + "," + two(depth - 1) + ")";
      default:
        return "kmask(" + one(depth - 1) + "," + two(depth - 1) + ")";
    }
  }

  std::string two(int depth) {
    int pick = static_cast<int>(rng_() % (depth > 0 ? 4 : 2));
    switch (pick) {
      case 0:
        return "w";
      case 1:
        return "v";
      case 2:
        return "(" + one(depth - 1) + "." + one(depth - 1) + ")";
      default:
        return "neg(" + two(depth - 1) + ")";
    }
  }

  std::vector<std::string> set(unsigned lo, unsigned hi) {
    unsigned n = lo + static_cast<unsigned>(rng_() % (hi - lo + 1));
    std::vector<std::string> out;
    for (unsigned i = 0; i < n; ++i) out.push_back(rng_() % 3 == 0 ? two(2) : one(2));
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

std::string join_set(const std::vector<Term>& ts) {
  std::string out = "{";
  for (std::size_t i = 0; i < ts.size(); ++i) out += (i ? ", " : "") + ts[i].to_string();
  return out + "}";
}

}  // namespace

ClaimResult claim_subbayes(unsigned scenarios, std::uint64_t seed, unsigned max_bits) {
  ClaimResult r = make_result("subbayes", 0);
  Universe u;
  u.declare("x", 1);
  u.declare("y", 1);
  u.declare("w", 2);
  u.declare("v", 2);
  u.declare("h", 2);
  u.hash_bits = 2;
  oracle::EnumOptions opts;
  opts.budget_bits = max_bits;

  struct Case {
    std::vector<Term> xi, gamma, theta;
    std::string origin;
  };
  std::vector<Case> cases = {
      {{}, terms(u, {"x"}), terms(u, {"y"}), "worked"},
      {terms(u, {"x"}), terms(u, {"x"}), terms(u, {"x"}), "worked"},
      {terms(u, {"boxplus(x,h)"}), terms(u, {"h"}), terms(u, {"boxplus(y,h)"}), "worked"},
      // Small enough to check by hand: 3/8 against 1/4.
      {{}, terms(u, {"kmask(x,h)"}), terms(u, {"x"}), "counterexample"},
  };
  ExprGen gen(seed);
  unsigned attempts = 0;
  while (cases.size() < scenarios + 4 && attempts < 100 * scenarios) {
    ++attempts;
    Case c;
    for (const auto& s : gen.set(0, 2)) c.xi.push_back(u.parse(s));
    for (const auto& s : gen.set(1, 2)) c.gamma.push_back(u.parse(s));
    for (const auto& s : gen.set(1, 2)) c.theta.push_back(u.parse(s));
    std::vector<Term> all = c.xi;
    all.insert(all.end(), c.gamma.begin(), c.gamma.end());
    all.insert(all.end(), c.theta.begin(), c.theta.end());
    try {
      oracle::guess_chance_detail(u, {}, all, opts);
    } catch (const oracle::BudgetExceeded&) {
      continue;
    }
    c.origin = "random";
    cases.push_back(std::move(c));
  }

  unsigned violations = 0, equality_misses = 0, disjoint = 0;
  nlohmann::json examples = nlohmann::json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    auto rep = oracle::check_subbayes(u, c.xi, c.gamma, c.theta, opts);
    bool eq_ok = !rep.disjoint_fv || rep.equality;
    if (rep.disjoint_fv) ++disjoint;
    if (!rep.holds) ++violations;
    if (!eq_ok) ++equality_misses;
    std::string label = c.origin + " " + join_set(c.xi) + " " + join_set(c.gamma) + " " + join_set(c.theta);
    r.add(label, rep.lhs, rep.rhs, rep.holds && eq_ok);
    if ((!rep.holds || !eq_ok) && examples.size() < 5) {
      auto j = oracle::to_json(rep);
      j["xi"] = join_set(c.xi);
      j["gamma"] = join_set(c.gamma);
      j["theta"] = join_set(c.theta);
      examples.push_back(std::move(j));
    }
  }
  r.detail = {{"scenarios", cases.size()},
              {"inequality_violations", violations},
              {"disjoint_fv", disjoint},
              {"equality_misses", equality_misses},
              {"examples", examples}};
  return r;
}

ClaimResult claim_binomial(unsigned ell_max) {
  ClaimResult r = make_result("binomial", ell_max);
  for (unsigned k = 0; k <= ell_max; ++k) {
    auto b = oracle::binomial_identity_check(k);
    r.add("ell=" + std::to_string(k), b.sum, b.closed_form, b.holds);
  }
  return r;
}

ClaimResult claim_known_secret(unsigned ell, unsigned secret_bits) {
  ClaimResult r = make_result("lemma3", ell);
  Universe u;
  u.declare("s", secret_bits);
  u.declare("a", 1);
  u.declare("b", 1);
  u.declare("x", ell);
  u.declare("z", ell);
  u.hash_bits = 2 * ell;
  u.define("h", "H(s.a.b)");
  auto t = terms(u, {"boxplus(x,h)"});
  const Rational blind = oracle::analytic(oracle::Claim::naive, std::vector<unsigned>{ell});
  r.add("{} |- x*h", chance(u, {}, t), blind);
  r.add("{x,z} |- x*h", chance(u, terms(u, {"x", "z"}), t), blind);
  r.add("{a,b,s,x masked} |- x*h", chance(u, terms(u, {"a", "b", "s", "kmask(x,h)"}), t), Rational(1));
  r.add("{a,b,s,x} |- x*h", chance(u, terms(u, {"a", "b", "s", "x"}), t), Rational(1));
  r.add("{a,b,s,x,z} |- x*h", chance(u, terms(u, {"a", "b", "s", "x", "z"}), t), Rational(1));
  r.add("{a,b,s,x,z*h} |- x*h", chance(u, terms(u, {"a", "b", "s", "x", "boxplus(z,h)"}), t), Rational(1));
  r.add("{a,b,s,x,z,z*h} |- x*h", chance(u, terms(u, {"a", "b", "s", "x", "z", "boxplus(z,h)"}), t), Rational(1));
  return r;
}

std::vector<std::string> claim_names() {
  return {"monty", "kernel", "hamming", "early", "prop34", "subbayes", "binomial", "lemma3"};
}

ClaimResult run_claim(const std::string& name, unsigned ell) {
  if (name == "monty") return claim_monty(ell);
  if (name == "kernel") return claim_kernel(ell);
  if (name == "hamming") return claim_hamming(ell);
  if (name == "early") return claim_early(ell);
  if (name == "prop34") return claim_attacker_average(ell);
  if (name == "subbayes") return claim_subbayes();
  if (name == "binomial") return claim_binomial(ell);
  if (name == "lemma3") return claim_known_secret(ell);
  throw std::invalid_argument("unknown claim '" + name + "'");
}

nlohmann::json to_json(const ClaimResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"label", row.label},
                    {"value", oracle::rational_json(row.value)},
                    {"expected", oracle::rational_json(row.expected)},
                    {"ok", row.ok}});
  }
  return {{"claim", r.claim}, {"ell", r.ell}, {"pass", r.pass}, {"rows", rows}, {"detail", r.detail}};
}

void write_csv(std::ostream& os, const ClaimResult& r) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  os << "claim,ell,label,value_num,value_den,expected_num,expected_den,ok\n";
  for (const auto& row : r.rows) {
    os << r.claim << ',' << r.ell << ',' << quote(row.label) << ','
       << boost::multiprecision::numerator(row.value).str() << ','
       << boost::multiprecision::denominator(row.value).str() << ','
       << boost::multiprecision::numerator(row.expected).str() << ','
       << boost::multiprecision::denominator(row.expected).str() << ',' << (row.ok ? 1 : 0) << '\n';
  }
}

oracle::GuardSpec attack_guard_spec(unsigned ell, unsigned secret_bits, bool with_x) {
  oracle::GuardSpec g;
  auto& u = g.universe;
  u.declare("s", secret_bits);
  u.declare("a", 1);
  u.declare("b", 1);
  u.declare("x", ell);
  u.declare("z", ell);
  u.hash_bits = 2 * ell;
  u.define("h", "H(s.a.b)");
  g.guards = {terms(u, {"s"}), terms(u, {"boxplus(z,h)"})};
  g.target = u.parse("boxplus(x,h)");
  g.context = with_x ? terms(u, {"s", "a", "b", "x", "z", "boxplus(z,h)"})
                     : terms(u, {"a", "b", "z", "boxplus(z,h)", "s"});
  return g;
}

oracle::GuardSpec early_guard_spec(unsigned ell, unsigned secret_bits) {
  oracle::GuardSpec g;
  auto& u = g.universe;
  u.declare("s", secret_bits);
  u.declare("a", 1);
  u.declare("b", 1);
  u.declare("x", ell);
  u.hash_bits = 2 * ell;
  u.define("h", "H(s.a.b)");
  g.guards = {terms(u, {"kmask(x,h)"})};
  g.target = u.parse("boxplus(x,h)");
  g.context = terms(u, {"s", "a", "b"});
  return g;
}

}  // namespace hkdb::harness
