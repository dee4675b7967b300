#include "hkdb/oracle.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <unordered_map>

namespace hkdb::oracle {

namespace {

const symbolic::Theory& hk_theory() {
  static const symbolic::Theory theory(symbolic::Theory::Kind::hancke_kuhn);
  return theory;
}

std::uint64_t low_mask(unsigned len) { return len >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1; }

}  // namespace

// ---------------------------------------------------------------- Universe

void Universe::define(std::string name, std::string_view text) {
  defs[std::move(name)] = parse_term(text);
}

Term Universe::expand(const Term& t) const {
  Term cur = t;
  for (int round = 0; round < 32; ++round) {
    Term next = symbolic::substitute(cur, defs);
    if (next == cur) return hk_theory().normalize(cur);
    cur = std::move(next);
  }
  throw std::invalid_argument("Universe: recursive definitions");
}

Term Universe::parse(std::string_view text) const { return expand(parse_term(text)); }

std::vector<Term> Universe::parse_all(std::span<const std::string> texts) const {
  std::vector<Term> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse(t));
  return out;
}

const VarDecl* Universe::find_var(std::string_view name) const {
  for (const auto& v : vars) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

BudgetExceeded::BudgetExceeded(unsigned required, unsigned budget)
    : std::runtime_error("enumeration needs " + std::to_string(required) + " random bits, budget is " +
                         std::to_string(budget)),
      required_(required) {}

// ---------------------------------------------------------------- compiled expressions

namespace {

struct Value {
  std::uint64_t bits = 0;
  std::uint64_t star = 0;
};

struct Node {
  enum class Op { var, lit, concat, neg, boxplus, kmask, hash, slice, apply };
  Op op = Op::lit;
  unsigned len = 0;
  std::uint64_t lit = 0;
  unsigned offset = 0;  // var: bit offset in the environment counter; hash: slot index
  unsigned from = 0;    // slice: shift amount
  const PartitionedFunction* fn = nullptr;
  std::vector<int> kids;
};

class Program {
 public:
  explicit Program(const Universe& u) : u_(u) {}

  // Call for every expression before finalize().
  void collect_vars(const Term& t) {
    for (const auto& name : t.free_vars()) {
      if (!u_.find_var(name)) throw std::invalid_argument("undeclared variable '" + name + "'");
      used_.insert(name);
    }
  }

  void finalize_layout() {
    unsigned off = 0;
    for (const auto& v : u_.vars) {
      if (!used_.count(v.name)) continue;
      if (v.bits > 64) throw std::invalid_argument("variable '" + v.name + "' wider than 64 bits");
      var_offset_[v.name] = off;
      off += v.bits;
      names_.push_back(v.name);
    }
    var_bits_ = off;
  }

  int compile(const Term& t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    Node n;
    switch (t.kind()) {
      case Term::Kind::variable: {
        const VarDecl* v = u_.find_var(t.symbol());
        n.op = Node::Op::var;
        n.len = v->bits;
        n.offset = var_offset_.at(t.symbol());
        break;
      }
      case Term::Kind::constant: {
        const std::string& s = t.symbol();
        if (s.empty() || s[0] != '#') throw std::invalid_argument("unsupported constant '" + s + "' in scenario");
        auto bits = BitString::parse(std::string_view(s).substr(1));
        if (bits.size() > 64) throw std::invalid_argument("literal wider than 64 bits");
        n.op = Node::Op::lit;
        n.len = static_cast<unsigned>(bits.size());
        n.lit = bits.size() ? bits.to_uint() : 0;
        break;
      }
      case Term::Kind::apply:
        compile_apply(t, n);
        break;
    }
    if (n.len > 64) throw std::invalid_argument("expression '" + t.to_string() + "' wider than 64 bits");
    nodes_.push_back(std::move(n));
    int id = static_cast<int>(nodes_.size()) - 1;
    memo_.emplace(t, id);
    return id;
  }

  unsigned var_bits() const { return var_bits_; }
  unsigned hash_slots() const { return hash_slots_; }
  unsigned total_bits() const { return var_bits_ + hash_slots_ * u_.hash_bits; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  unsigned hash_bits() const { return u_.hash_bits; }

 private:
  void compile_apply(const Term& t, Node& n) {
    const std::string& op = t.symbol();
    const auto& args = t.args();
    auto arity = [&](std::size_t k) {
      if (args.size() != k) throw std::invalid_argument(op + " expects " + std::to_string(k) + " arguments");
    };
    auto len_of = [&](int id) { return nodes_[static_cast<std::size_t>(id)].len; };

    if (op == "pair") {
      n.op = Node::Op::concat;
      for (const auto& a : args) {
        int k = compile(a);
        n.kids.push_back(k);
        n.len += len_of(k);
      }
    } else if (op == "neg") {
      arity(1);
      n.op = Node::Op::neg;
      n.kids = {compile(args[0])};
      n.len = len_of(n.kids[0]);
    } else if (op == "boxplus" || op == "kmask") {
      arity(2);
      n.op = op == "boxplus" ? Node::Op::boxplus : Node::Op::kmask;
      n.kids = {compile(args[0]), compile(args[1])};
      n.len = len_of(n.kids[0]);
      if (len_of(n.kids[1]) != 2 * n.len) {
        throw std::invalid_argument(op + ": token must be twice as long as the challenge in '" + t.to_string() + "'");
      }
    } else if (op == "H") {
      arity(1);
      n.op = Node::Op::hash;
      n.kids = {compile(args[0])};
      n.len = u_.hash_bits;
      n.offset = hash_slots_++;
    } else if (op == "slice") {
      arity(3);
      auto as_int = [&](const Term& a) {
        if (a.kind() != Term::Kind::constant || a.symbol().empty() || !std::isdigit(static_cast<unsigned char>(a.symbol()[0]))) {
          throw std::invalid_argument("slice bounds must be integers");
        }
        return static_cast<unsigned>(std::stoul(a.symbol()));
      };
      n.op = Node::Op::slice;
      n.kids = {compile(args[0])};
      unsigned from = as_int(args[1]);
      n.len = as_int(args[2]);
      unsigned inner = len_of(n.kids[0]);
      if (from < 1 || from + n.len - 1 > inner) throw std::invalid_argument("slice out of range");
      n.from = inner - (from - 1) - n.len;
    } else if (auto it = u_.functions.find(op); it != u_.functions.end()) {
      arity(2);
      n.op = Node::Op::apply;
      n.fn = &it->second;
      n.kids = {compile(args[0]), compile(args[1])};
      if (len_of(n.kids[0]) != n.fn->seed_width() || len_of(n.kids[1]) != n.fn->input_width()) {
        throw std::invalid_argument(op + ": seed or input width mismatch");
      }
      n.len = static_cast<unsigned>(n.fn->output_width());
    } else {
      throw std::invalid_argument("operation '" + op + "' has no bit-level interpretation");
    }
  }

  const Universe& u_;
  std::set<std::string> used_;
  std::map<std::string, unsigned> var_offset_;
  std::vector<std::string> names_;
  unsigned var_bits_ = 0;
  unsigned hash_slots_ = 0;
  std::vector<Node> nodes_;
  std::map<Term, int> memo_;
};

std::uint64_t eval_function(const PartitionedFunction& f, std::uint64_t seed, std::uint64_t x) {
  std::uint64_t out = 0;
  unsigned seed_left = static_cast<unsigned>(f.seed_width());
  unsigned in_left = static_cast<unsigned>(f.input_width());
  for (const auto& b : f.blocks()) {
    seed_left -= b.seed_bits;
    in_left -= b.in_bits;
    std::uint64_t s = (seed >> seed_left) & low_mask(b.seed_bits);
    std::uint64_t in = (x >> in_left) & low_mask(b.in_bits);
    out = (b.out_bits >= 64 ? 0 : out << b.out_bits) | b.table[(s << b.in_bits) | in];
  }
  return out;
}

// Evaluates every node for one environment counter value.
class Evaluator {
 public:
  explicit Evaluator(const Program& p) : p_(p), values_(p.nodes().size()) {}

  void run(std::uint64_t env) {
    table_.clear();
    const auto& nodes = p_.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      Value& v = values_[i];
      auto kid = [&](std::size_t k) -> const Value& { return values_[static_cast<std::size_t>(n.kids[k])]; };
      std::uint64_t m = low_mask(n.len);
      switch (n.op) {
        case Node::Op::var:
          v = {(env >> n.offset) & m, 0};
          break;
        case Node::Op::lit:
          v = {n.lit, 0};
          break;
        case Node::Op::concat: {
          v = {0, 0};
          for (std::size_t k = 0; k < n.kids.size(); ++k) {
            unsigned w = p_.nodes()[static_cast<std::size_t>(n.kids[k])].len;
            const Value& c = kid(k);
            v.bits = (w >= 64 ? 0 : v.bits << w) | c.bits;
            v.star = (w >= 64 ? 0 : v.star << w) | c.star;
          }
          break;
        }
        case Node::Op::neg:
          v = {~kid(0).bits & ~kid(0).star & m, kid(0).star};
          break;
        case Node::Op::boxplus: {
          const Value& x = kid(0);
          const Value& h = kid(1);
          std::uint64_t h0 = h.bits >> n.len, h1 = h.bits & m;
          std::uint64_t s0 = h.star >> n.len, s1 = h.star & m;
          std::uint64_t known_x = ~x.star & m;
          std::uint64_t bits = ((x.bits & h1) | (~x.bits & h0)) & m;
          std::uint64_t star = (known_x & ((x.bits & s1) | (~x.bits & s0))) |
                               (x.star & ((h0 ^ h1) | s0 | s1));
          v = {bits & ~star & m, star & m};
          break;
        }
        case Node::Op::kmask: {
          const Value& x = kid(0);
          const Value& h = kid(1);
          std::uint64_t ker = ~((h.bits >> n.len) ^ h.bits) & m;
          std::uint64_t star = (ker | x.star) & m;
          v = {x.bits & ~star, star};
          break;
        }
        case Node::Op::hash: {
          const Value& arg = kid(0);
          unsigned slot = 0;
          auto it = std::find_if(table_.begin(), table_.end(), [&](const auto& e) {
            return e.first.bits == arg.bits && e.first.star == arg.star;
          });
          if (it != table_.end()) {
            slot = it->second;
          } else {
            slot = static_cast<unsigned>(table_.size());
            table_.emplace_back(arg, slot);
          }
          unsigned off = p_.var_bits() + slot * p_.hash_bits();
          v = {(env >> off) & m, 0};
          break;
        }
        case Node::Op::slice:
          v = {(kid(0).bits >> n.from) & m, (kid(0).star >> n.from) & m};
          break;
        case Node::Op::apply:
          v = {eval_function(*n.fn, kid(0).bits, kid(1).bits) & m, 0};
          break;
      }
    }
  }

  const Value& value(int id) const { return values_[static_cast<std::size_t>(id)]; }

 private:
  const Program& p_;
  std::vector<Value> values_;
  std::vector<std::pair<Value, unsigned>> table_;
};

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto w : k) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

using CountMap = std::unordered_map<std::vector<std::uint64_t>, std::uint64_t, KeyHash>;

void collect_hash_sites(const Term& t, std::set<Term>& out) {
  if (t.is_apply("H")) out.insert(t);
  for (const auto& a : t.args()) collect_hash_sites(a, out);
}

// The guesser may query H wherever it can build the argument: every H(u)
// site derivable from the knowns joins the knowns. Queries at points it
// cannot build (brute force over a secret) are not granted.
void add_oracle_answers(std::vector<Term>& ks, std::span<const Term> ts) {
  std::set<Term> sites;
  for (const auto& t : ks) collect_hash_sites(t, sites);
  for (const auto& t : ts) collect_hash_sites(t, sites);
  std::vector<Term> granted;
  for (const auto& site : sites) {
    if (std::find(ks.begin(), ks.end(), site) != ks.end()) continue;
    if (symbolic::derivable(ks, site, hk_theory())) granted.push_back(site);
  }
  ks.insert(ks.end(), granted.begin(), granted.end());
}

}  // namespace

ChanceDetail guess_chance_detail(const Universe& u, std::span<const Term> knowns, std::span<const Term> targets,
                                 const EnumOptions& opts) {
  Program prog(u);
  std::vector<Term> ks, ts;
  for (const auto& t : knowns) ks.push_back(u.expand(t));
  for (const auto& t : targets) ts.push_back(u.expand(t));
  add_oracle_answers(ks, ts);
  for (const auto& t : ks) prog.collect_vars(t);
  for (const auto& t : ts) prog.collect_vars(t);
  prog.finalize_layout();
  std::vector<int> kid, tid;
  for (const auto& t : ks) kid.push_back(prog.compile(t));
  for (const auto& t : ts) tid.push_back(prog.compile(t));

  unsigned bits = prog.total_bits();
  if (bits > opts.budget_bits || bits > 62) throw BudgetExceeded(bits, opts.budget_bits);
  std::uint64_t envs = std::uint64_t{1} << bits;

  unsigned workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, envs >> 12)));

  std::vector<CountMap> partial(workers);
  auto work = [&](unsigned w) {
    std::uint64_t lo = envs * w / workers;
    std::uint64_t hi = envs * (w + 1) / workers;
    Evaluator ev(prog);
    std::vector<std::uint64_t> key(2 * (kid.size() + tid.size()));
    CountMap& counts = partial[w];
    for (std::uint64_t env = lo; env < hi; ++env) {
      ev.run(env);
      std::size_t p = 0;
      for (int id : kid) {
        key[p++] = ev.value(id).bits;
        key[p++] = ev.value(id).star;
      }
      for (int id : tid) {
        key[p++] = ev.value(id).bits;
        key[p++] = ev.value(id).star;
      }
      auto it = counts.find(key);
      if (it == counts.end()) {
        counts.emplace(key, 1);
      } else {
        ++it->second;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  CountMap& joint = partial[0];
  for (unsigned w = 1; w < workers; ++w) {
    for (auto& [k, c] : partial[w]) joint[k] += c;
  }

  std::size_t known_words = 2 * kid.size();
  std::unordered_map<std::vector<std::uint64_t>, std::uint64_t, KeyHash> best;
  for (const auto& [k, c] : joint) {
    std::vector<std::uint64_t> prefix(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(known_words));
    auto& b = best[prefix];
    b = std::max(b, c);
  }
  BigInt total = 0;
  for (const auto& [k, c] : best) total += c;

  ChanceDetail out;
  BigInt den = 1;
  den <<= bits;
  out.chance = ExactProb(total, den);
  out.enumerated_bits = bits;
  out.hash_slots = prog.hash_slots();
  out.free_vars = prog.names();
  out.known_classes = best.size();
  return out;
}

ExactProb guess_chance(const Universe& u, std::span<const Term> knowns, std::span<const Term> targets,
                       const EnumOptions& opts) {
  return guess_chance_detail(u, knowns, targets, opts).chance;
}

ExactProb guess_chance(const GuessScenario& s, const EnumOptions& opts) {
  return guess_chance(s.universe, s.knowns, s.targets, opts);
}

Rational advantage(const Universe& u, std::span<const Term> knowns, std::span<const Term> targets,
                   const EnumOptions& opts) {
  return guess_chance(u, knowns, targets, opts).value() - guess_chance(u, {}, targets, opts).value();
}

namespace {

std::vector<Term> join(std::span<const Term> a, std::span<const Term> b) {
  std::vector<Term> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::set<std::string> free_vars_of(const Universe& u, std::span<const Term> ts) {
  std::set<std::string> out;
  for (const auto& t : ts) {
    auto fv = u.expand(t).free_vars();
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

}  // namespace

SubbayesReport check_subbayes(const Universe& u, std::span<const Term> xi, std::span<const Term> gamma,
                              std::span<const Term> theta, const EnumOptions& opts) {
  SubbayesReport r;
  r.guard_chance = guess_chance(u, xi, gamma, opts);
  r.conditional_chance = guess_chance(u, join(xi, gamma), theta, opts);
  r.joint_chance = guess_chance(u, xi, join(gamma, theta), opts);
  r.lhs = r.guard_chance.value() * r.conditional_chance.value();
  r.rhs = r.joint_chance.value();
  r.holds = r.lhs <= r.rhs;
  r.equality = r.lhs == r.rhs;
  auto a = free_vars_of(u, xi);
  auto b = free_vars_of(u, theta);
  r.disjoint_fv = std::none_of(a.begin(), a.end(), [&](const std::string& v) { return b.count(v) > 0; });
  return r;
}

// ---------------------------------------------------------------- guards

GuardReport check_prob_guard(const GuardSpec& spec, GuessMode mode, const EnumOptions& opts,
                             const symbolic::DeriveOptions& derive) {
  const auto n = spec.context.size();
  if (n > 16) throw std::invalid_argument("check_prob_guard: context too large to enumerate subsets");
  const Universe& u = spec.universe;
  auto theory = symbolic::Theory::by_name(spec.theory);

  // The chance of guessing `ts` from `ks` under the selected mode.
  auto chance = [&](std::span<const Term> ks, std::span<const Term> ts) -> Rational {
    if (mode == GuessMode::map) return guess_chance(u, ks, ts, opts).value();
    std::vector<Term> known;
    for (const auto& k : ks) known.push_back(u.expand(k));
    for (const auto& t : ts) {
      if (!symbolic::derivable(known, u.expand(t), theory, derive)) return Rational(0);
    }
    return Rational(1);
  };

  GuardReport report;
  std::vector<Term> target{spec.target};
  Rational blind = chance({}, target);
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    GuardRow row;
    std::vector<Term> xi;
    for (std::size_t i = 0; i < n; ++i) {
      if ((m >> i) & 1u) {
        row.subset.push_back(i);
        xi.push_back(spec.context[i]);
      }
    }
    ++report.subsets;
    row.lhs = chance(xi, target);
    row.advantage = row.lhs - blind;
    if (row.advantage > 0) {
      row.checked = true;
      ++report.checked;
      for (std::size_t g = 0; g < spec.guards.size(); ++g) {
        Rational first = chance(xi, spec.guards[g]);
        Rational prod = first == 0 ? Rational(0) : first * chance(join(xi, spec.guards[g]), target);
        if (row.witness < 0 || prod > row.rhs) {
          row.rhs = prod;
          row.witness = static_cast<int>(g);
        }
      }
      row.ok = row.witness >= 0 && row.lhs <= row.rhs;
      if (!row.ok) report.holds = false;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------- distributions and closed forms

std::map<BitString, ExactProb> output_distribution(const PartitionedFunction& f, const BitString& a) {
  if (a.size() != f.input_width()) throw std::invalid_argument("output_distribution: input width mismatch");
  if (f.seed_width() > 24) throw std::invalid_argument("output_distribution: seed too wide to enumerate");
  std::map<BitString, std::uint64_t> counts;
  std::uint64_t seeds = std::uint64_t{1} << f.seed_width();
  for (std::uint64_t s = 0; s < seeds; ++s) {
    ++counts[eval_partitioned(f, BitString::from_uint(s, f.seed_width()), a)];
  }
  std::map<BitString, ExactProb> out;
  for (const auto& [b, c] : counts) out.emplace(b, ExactProb(BigInt(c), BigInt(seeds)));
  return out;
}

Claim claim_from_name(std::string_view name) {
  if (name == "hamming_chance" || name == "hamming") return Claim::hamming_chance;
  if (name == "kernel_chance" || name == "kernel") return Claim::kernel_chance;
  if (name == "monty") return Claim::monty;
  if (name == "naive") return Claim::naive;
  if (name == "binomial") return Claim::binomial;
  throw std::invalid_argument("unknown claim '" + std::string(name) + "'");
}

namespace {

Rational rpow(const Rational& base, long k) {
  Rational r(1);
  Rational b = k < 0 ? Rational(1) / base : base;
  for (long i = 0; i < std::labs(k); ++i) r *= b;
  return r;
}

}  // namespace

Rational analytic(Claim claim, std::span<const unsigned> params) {
  auto need = [&](std::size_t k) {
    if (params.size() != k) throw std::invalid_argument("analytic: wrong parameter count");
  };
  switch (claim) {
    case Claim::hamming_chance:
      need(1);
      return rpow(Rational(1, 2), params[0]);
    case Claim::kernel_chance:
      need(2);
      if (params[0] > params[1]) throw std::invalid_argument("analytic: kernel larger than ell");
      return rpow(Rational(1, 2), static_cast<long>(params[1]) - static_cast<long>(params[0]));
    case Claim::monty:
      need(1);
      return rpow(Rational(3, 4), params[0]);
    case Claim::naive:
      need(1);
      return rpow(Rational(1, 2), params[0]);
    case Claim::binomial:
      need(1);
      return rpow(Rational(3, 2), params[0]);
  }
  throw std::invalid_argument("analytic: unknown claim");
}

BinomialReport binomial_identity_check(unsigned ell) {
  BinomialReport r;
  r.ell = ell;
  BigInt choose = 1;
  Rational half_pow(1);
  for (unsigned i = 0; i <= ell; ++i) {
    r.sum += Rational(choose) * half_pow;
    choose = choose * (ell - i) / (i + 1);
    half_pow /= 2;
  }
  r.closed_form = rpow(Rational(3, 2), ell);
  r.holds = r.sum == r.closed_form;
  return r;
}

// ---------------------------------------------------------------- JSON

Term term_from_json(const Universe& u, const nlohmann::json& node) {
  if (node.is_string()) return u.parse(node.get<std::string>());
  if (node.contains("var")) return u.expand(Term::var(node.at("var").get<std::string>()));
  if (node.contains("bits")) return Term::constant("#" + node.at("bits").get<std::string>());
  if (node.contains("int")) return Term::constant(std::to_string(node.at("int").get<unsigned>()));
  std::vector<Term> args;
  for (const auto& a : node.at("args")) args.push_back(term_from_json(u, a));
  const auto op = node.at("op").get<std::string>();
  if (op == "pair") return u.expand(Term::pair(std::move(args)));
  return u.expand(Term::apply(op, std::move(args)));
}

Universe universe_from_json(const nlohmann::json& doc) {
  Universe u;
  if (doc.contains("vars")) {
    const auto& vars = doc.at("vars");
    if (vars.is_object()) {
      for (const auto& [name, bits] : vars.items()) u.declare(name, bits.get<unsigned>());
    } else {
      for (const auto& v : vars) u.declare(v.at("name").get<std::string>(), v.at("bits").get<unsigned>());
    }
  }
  u.hash_bits = doc.value("hash_bits", 2u);
  if (doc.contains("functions")) {
    for (const auto& [name, f] : doc.at("functions").items()) u.functions.emplace(name, partitioned_from_json(f));
  }
  if (doc.contains("fixed")) {
    for (const auto& [name, bits] : doc.at("fixed").items()) {
      BitString::parse(bits.get<std::string>());  // validates
      u.defs[name] = Term::constant("#" + bits.get<std::string>());
    }
  }
  if (doc.contains("defs")) {
    for (const auto& [name, e] : doc.at("defs").items()) {
      u.defs[name] = e.is_string() ? parse_term(e.get<std::string>()) : term_from_json(Universe{}, e);
    }
  }
  return u;
}

namespace {

std::vector<Term> terms_from_json(const Universe& u, const nlohmann::json& doc, const char* key) {
  std::vector<Term> out;
  if (!doc.contains(key)) return out;
  for (const auto& e : doc.at(key)) out.push_back(term_from_json(u, e));
  return out;
}

}  // namespace

GuessScenario scenario_from_json(const nlohmann::json& doc) {
  GuessScenario s;
  s.universe = universe_from_json(doc);
  s.knowns = terms_from_json(s.universe, doc, "knowns");
  s.targets = terms_from_json(s.universe, doc, "targets");
  return s;
}

GuardSpec guard_spec_from_json(const nlohmann::json& doc) {
  GuardSpec g;
  g.universe = universe_from_json(doc);
  for (const auto& set : doc.at("guards")) {
    std::vector<Term> guard;
    for (const auto& e : set) guard.push_back(term_from_json(g.universe, e));
    g.guards.push_back(std::move(guard));
  }
  g.target = term_from_json(g.universe, doc.at("target"));
  g.context = terms_from_json(g.universe, doc, "context");
  g.theory = doc.value("theory", std::string("hk"));
  return g;
}

nlohmann::json rational_json(const Rational& r) {
  return {{"num", boost::multiprecision::numerator(r).str()},
          {"den", boost::multiprecision::denominator(r).str()},
          {"decimal", to_decimal(r, 12)}};
}

nlohmann::json to_json(const GuardReport& report, const GuardSpec& spec) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json xi = nlohmann::json::array();
    for (auto i : row.subset) xi.push_back(spec.context[i].to_string());
    nlohmann::json j = {{"subset", xi},
                        {"advantage", rational_json(row.advantage)},
                        {"lhs", rational_json(row.lhs)},
                        {"checked", row.checked},
                        {"ok", row.ok}};
    if (row.checked) {
      j["rhs"] = rational_json(row.rhs);
      j["witness"] = row.witness;
    }
    rows.push_back(std::move(j));
  }
  return {{"holds", report.holds},
          {"subsets", report.subsets},
          {"checked", report.checked},
          {"target", spec.target.to_string()},
          {"rows", rows}};
}

nlohmann::json to_json(const SubbayesReport& r) {
  return {{"guard_chance", rational_json(r.guard_chance.value())},
          {"conditional_chance", rational_json(r.conditional_chance.value())},
          {"joint_chance", rational_json(r.joint_chance.value())},
          {"lhs", rational_json(r.lhs)},
          {"rhs", rational_json(r.rhs)},
          {"holds", r.holds},
          {"disjoint_fv", r.disjoint_fv},
          {"equality", r.equality}};
}

}  // namespace hkdb::oracle
