#include "hkdb/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace hkdb::symbolic {

// ---------------------------------------------------------------- Term

Term Term::var(std::string name) {
  Term t;
  t.kind_ = Kind::variable;
  t.symbol_ = std::move(name);
  return t;
}

Term Term::constant(std::string name) {
  Term t;
  t.kind_ = Kind::constant;
  t.symbol_ = std::move(name);
  return t;
}

Term Term::apply(std::string op, std::vector<Term> args) {
  Term t;
  t.kind_ = Kind::apply;
  t.symbol_ = std::move(op);
  t.args_ = std::move(args);
  return t;
}

Term Term::pair(std::vector<Term> items) {
  if (items.empty()) throw std::invalid_argument("Term::pair: no components");
  if (items.size() == 1) return std::move(items.front());
  return apply("pair", std::move(items));
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

std::set<std::string> Term::free_vars() const {
  std::set<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.kind_ == Kind::variable) out.insert(t.symbol_);
    for (const auto& a : t.args_) walk(a);
  };
  walk(*this);
  return out;
}

std::string Term::to_string() const {
  if (kind_ != Kind::apply) return symbol_;
  if (symbol_ == "pair") {
    std::string out;
    for (std::size_t i = 0; i < args_.size(); ++i) {
      if (i) out += ".";
      bool wrap = args_[i].is_apply("pair");
      out += wrap ? "(" + args_[i].to_string() + ")" : args_[i].to_string();
    }
    return out;
  }
  std::string out = symbol_ + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ",";
    out += args_[i].to_string();
  }
  return out + ")";
}

bool operator==(const Term& a, const Term& b) {
  return a.kind_ == b.kind_ && a.symbol_ == b.symbol_ && a.args_ == b.args_;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.symbol_.compare(b.symbol_); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  std::size_t n = std::min(a.args_.size(), b.args_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
  }
  return a.args_.size() <=> b.args_.size();
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>& constants)
      : text_(text), constants_(constants) {}

  Term parse() {
    Term t = parse_tuple();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  Term parse_tuple() {
    std::vector<Term> items;
    items.push_back(parse_atom());
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      items.push_back(parse_atom());
      skip_ws();
    }
    if (items.size() == 1) return std::move(items.front());
    return Term::apply("pair", std::move(items));
  }

  Term parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Term t = parse_tuple();
      expect(')');
      return t;
    }
    if (c == '#') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && (text_[pos_] == '0' || text_[pos_] == '1')) ++pos_;
      return Term::constant("#" + std::string(text_.substr(start, pos_ - start)));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Term::constant(std::string(text_.substr(start, pos_ - start)));
    }
    if (!is_ident_start(c)) fail(std::string("unexpected character '") + c + "'");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      std::vector<Term> args;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
        return Term::apply(std::move(name), {});
      }
      args.push_back(parse_tuple());
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        args.push_back(parse_tuple());
        skip_ws();
      }
      expect(')');
      if (name == "pair") return Term::pair(std::move(args));
      return Term::apply(std::move(name), std::move(args));
    }
    if (constants_.count(name)) return Term::constant(std::move(name));
    return Term::var(std::move(name));
  }

  static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse_term: " + what + " at offset " + std::to_string(pos_) + " in '" +
                                std::string(text_) + "'");
  }

  std::string_view text_;
  const std::set<std::string>& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const std::set<std::string>& constants) {
  return Parser(text, constants).parse();
}

Term substitute(const Term& t, const std::map<std::string, Term>& defs) {
  if (t.is_var()) {
    auto it = defs.find(t.symbol());
    return it == defs.end() ? t : it->second;
  }
  if (t.kind() == Term::Kind::constant) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, defs));
  return Term::apply(t.symbol(), std::move(args));
}

// ---------------------------------------------------------------- theories

Theory::Theory(Kind kind) : kind_(kind) {
  ops_ = {{"pair", -1, false}, {"pi1", 1, true}, {"pi2", 1, true}};
  switch (kind) {
    case Kind::pairing:
      name_ = "pairing";
      break;
    case Kind::dolev_yao:
      name_ = "dy";
      ops_.push_back({"enc", 2, false});
      ops_.push_back({"dec", 2, true});
      break;
    case Kind::diffie_hellman:
      name_ = "dh";
      ops_.push_back({"exp", 2, false});
      ops_.push_back({"mult", -1, false});
      constants_.insert("g");
      break;
    case Kind::hancke_kuhn:
      name_ = "hk";
      ops_.push_back({"H", 1, false});
      ops_.push_back({"boxplus", 2, false});
      ops_.push_back({"neg", 1, false});
      ops_.push_back({"kmask", 2, false});
      ops_.push_back({"slice", 3, false});
      break;
    case Kind::challenge_response:
      name_ = "cr";
      ops_.push_back({"c", 1, false});
      ops_.push_back({"r", 2, false});
      break;
  }
}

Theory Theory::by_name(std::string_view name) {
  if (name == "pairing") return Theory(Kind::pairing);
  if (name == "dy") return Theory(Kind::dolev_yao);
  if (name == "dh") return Theory(Kind::diffie_hellman);
  if (name == "hk") return Theory(Kind::hancke_kuhn);
  if (name == "cr") return Theory(Kind::challenge_response);
  throw std::invalid_argument("unknown theory '" + std::string(name) + "'");
}

const OpSig* Theory::find_op(std::string_view name) const {
  for (const auto& op : ops_) {
    if (op.name == name) return &op;
  }
  return nullptr;
}

Term Theory::normalize(const Term& t) const {
  if (t.kind() != Term::Kind::apply) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(normalize(a));
  return normalize_node(Term::apply(t.symbol(), std::move(args)));
}

namespace {

std::vector<Term> flatten(const std::string& op, const std::vector<Term>& args) {
  std::vector<Term> out;
  for (const auto& a : args) {
    if (a.is_apply(op)) {
      out.insert(out.end(), a.args().begin(), a.args().end());
    } else {
      out.push_back(a);
    }
  }
  return out;
}

bool is_bit_literal(const Term& t) {
  return t.kind() == Term::Kind::constant && !t.symbol().empty() && t.symbol()[0] == '#';
}

}  // namespace

// Arguments are already normal.
Term Theory::normalize_node(Term t) const {
  const std::string& op = t.symbol();
  const auto& args = t.args();
  if (op == "pair") {
    auto items = flatten("pair", args);
    return Term::pair(std::move(items));
  }
  if ((op == "pi1" || op == "pi2") && args.size() == 1 && args[0].is_apply("pair")) {
    const auto& items = args[0].args();
    if (op == "pi1") return items.front();
    return Term::pair(std::vector<Term>(items.begin() + 1, items.end()));
  }
  if (kind_ == Kind::dolev_yao && op == "dec" && args.size() == 2 && args[0].is_apply("enc") &&
      args[0].args()[1] == args[1]) {
    return args[0].args()[0];
  }
  if (kind_ == Kind::hancke_kuhn && op == "neg" && args.size() == 1) {
    if (args[0].is_apply("neg")) return args[0].args()[0];
    if (is_bit_literal(args[0])) {
      std::string flipped = args[0].symbol();
      for (std::size_t i = 1; i < flipped.size(); ++i) flipped[i] = flipped[i] == '0' ? '1' : '0';
      return Term::constant(flipped);
    }
  }
  if (kind_ == Kind::diffie_hellman) {
    if (op == "mult") {
      auto factors = flatten("mult", args);
      if (factors.size() == 1) return factors.front();
      std::sort(factors.begin(), factors.end());
      return Term::apply("mult", std::move(factors));
    }
    if (op == "exp" && args.size() == 2 && args[0].is_apply("exp")) {
      const auto& inner = args[0].args();
      Term exponent = normalize_node(Term::apply("mult", {inner[1], args[1]}));
      return Term::apply("exp", {inner[0], std::move(exponent)});
    }
  }
  return t;
}

// ---------------------------------------------------------------- derivation

namespace {

bool is_junk(const Term& t, const Theory& theory) {
  if (t.kind() != Term::Kind::apply) return false;
  const OpSig* sig = theory.find_op(t.symbol());
  return sig != nullptr && sig->destructor;
}

bool is_public_constant(const Term& t, const Theory& theory) {
  if (t.kind() != Term::Kind::constant) return false;
  if (theory.constants().count(t.symbol())) return true;
  // Bit and integer literals are public.
  return !t.symbol().empty() && (t.symbol()[0] == '#' || std::isdigit(static_cast<unsigned char>(t.symbol()[0])));
}

class Deriver {
 public:
  Deriver(const Theory& theory, const DeriveOptions& opts) : theory_(theory), opts_(opts) {}

  void add_known(std::span<const Term> known) {
    for (const auto& t : known) analyzed_.insert(theory_.normalize(t));
    analyze();
  }

  bool synth(const Term& t, unsigned depth) {
    if (analyzed_.count(t) || is_public_constant(t, theory_)) return true;
    if (depth == 0 || t.kind() != Term::Kind::apply || is_junk(t, theory_)) return false;
    auto key = std::make_pair(t, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    memo_[key] = false;  // cycle guard
    bool ok = synth_apply(t, depth);
    memo_[key] = ok;
    return ok;
  }

  const TermSet& analyzed() const { return analyzed_; }

 private:
  bool synth_apply(const Term& t, unsigned depth) {
    if (!theory_.find_op(t.symbol())) return false;
    if (theory_.kind() == Theory::Kind::diffie_hellman) {
      if (t.is_apply("exp")) return synth_exp(t, depth);
      if (t.is_apply("mult")) return synth_split(t.symbol(), t.args(), depth);
    }
    for (const auto& a : t.args()) {
      if (!synth(a, depth - 1)) return false;
    }
    return true;
  }

  // exp(b, f1*...*fn) from some exp(b, M') with M' a proper sub-multiset and
  // the product of the remaining factors.
  bool synth_exp(const Term& t, unsigned depth) {
    const Term& base = t.args()[0];
    const Term& exponent = t.args()[1];
    std::vector<Term> factors = exponent.is_apply("mult") ? exponent.args() : std::vector<Term>{exponent};
    if (factors.size() > 12) return false;
    std::size_t n = factors.size();
    for (std::uint32_t m = 0; m + 1 < (1u << n); ++m) {
      std::vector<Term> kept;
      std::vector<Term> rest;
      for (std::size_t i = 0; i < n; ++i) ((m >> i) & 1u ? kept : rest).push_back(factors[i]);
      Term lhs = kept.empty() ? base : theory_.normalize(Term::apply("exp", {base, Term::apply("mult", kept)}));
      Term rhs = theory_.normalize(Term::apply("mult", rest));
      if (synth(lhs, depth - 1) && synth(rhs, depth - 1)) return true;
    }
    return false;
  }

  bool synth_split(const std::string& op, const std::vector<Term>& factors, unsigned depth) {
    bool all = true;
    for (const auto& f : factors) {
      if (!synth(f, depth - 1)) {
        all = false;
        break;
      }
    }
    if (all) return true;
    std::size_t n = factors.size();
    if (n > 12) return false;
    for (std::uint32_t m = 1; m + 1 < (1u << n); ++m) {
      std::vector<Term> lhs;
      std::vector<Term> rhs;
      for (std::size_t i = 0; i < n; ++i) ((m >> i) & 1u ? lhs : rhs).push_back(factors[i]);
      if (synth(theory_.normalize(Term::apply(op, lhs)), depth - 1) &&
          synth(theory_.normalize(Term::apply(op, rhs)), depth - 1)) {
        return true;
      }
    }
    return false;
  }

  // Decomposition to a fixed point.
  void analyze() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Term> fresh;
      for (const auto& t : analyzed_) {
        if (t.is_apply("pair")) {
          for (const auto& c : t.args()) {
            if (!analyzed_.count(c)) fresh.push_back(c);
          }
        }
        if (theory_.kind() == Theory::Kind::dolev_yao && t.is_apply("enc")) {
          const Term& m = t.args()[0];
          if (!analyzed_.count(m) && synth(t.args()[1], opts_.depth)) fresh.push_back(m);
        }
        if (theory_.kind() == Theory::Kind::hancke_kuhn && t.is_apply("boxplus")) {
          const Term& x = t.args()[0];
          const Term& h = t.args()[1];
          if (analyzed_.count(h)) continue;
          Term mirrored = theory_.normalize(Term::apply("boxplus", {Term::apply("neg", {x}), h}));
          if (analyzed_.count(mirrored) && synth(x, opts_.depth)) fresh.push_back(h);
        }
      }
      for (auto& f : fresh) {
        if (analyzed_.insert(std::move(f)).second) changed = true;
      }
      if (changed) memo_.clear();
    }
  }

  const Theory& theory_;
  DeriveOptions opts_;
  TermSet analyzed_;
  std::map<std::pair<Term, unsigned>, bool> memo_;
};

}  // namespace

bool derivable(std::span<const Term> known, const Term& target, const Theory& theory, const DeriveOptions& opts) {
  Deriver d(theory, opts);
  d.add_known(known);
  return d.synth(theory.normalize(target), opts.depth);
}

Closure derive_closure(std::span<const Term> known, const Theory& theory, const DeriveOptions& opts) {
  Closure out;
  for (const auto& t : known) out.terms.insert(theory.normalize(t));

  auto accept = [&](Term t, TermSet& layer) {
    if (t.size() > opts.max_nodes || is_junk(t, theory)) return;
    if (!out.terms.count(t)) layer.insert(std::move(t));
  };

  for (unsigned d = 1; d <= opts.depth; ++d) {
    TermSet layer;
    std::vector<Term> current(out.terms.begin(), out.terms.end());
    bool full = false;
    auto room = [&] {
      if (out.terms.size() + layer.size() >= opts.max_terms) full = true;
      return !full;
    };

    for (const auto& c : theory.constants()) accept(Term::constant(c), layer);
    for (const auto& op : theory.ops()) {
      if (op.name == "slice") continue;  // integer arguments never occur in the closure
      if (op.arity == 1) {
        for (const auto& a : current) {
          if (!room()) break;
          accept(theory.normalize(Term::apply(op.name, {a})), layer);
        }
      } else if (op.arity == 2 || op.arity == -1) {
        for (const auto& a : current) {
          for (const auto& b : current) {
            if (!room()) break;
            accept(theory.normalize(Term::apply(op.name, {a, b})), layer);
          }
          if (full) break;
        }
      }
      if (full) break;
    }
    // Token extraction in the HK theory is a two-premise step.
    if (theory.kind() == Theory::Kind::hancke_kuhn) {
      for (const auto& t : current) {
        if (!t.is_apply("boxplus")) continue;
        const Term& x = t.args()[0];
        Term mirrored = theory.normalize(Term::apply("boxplus", {Term::apply("neg", {x}), t.args()[1]}));
        if (out.terms.count(mirrored) && out.terms.count(x)) accept(t.args()[1], layer);
      }
    }

    out.layers = d;
    if (layer.empty()) {
      out.saturated = true;
      break;
    }
    out.terms.insert(layer.begin(), layer.end());
    if (full) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

AlgGuardReport check_alg_guard(const std::vector<std::vector<Term>>& guards, const Term& target,
                               std::span<const Term> context, const Theory& theory, const DeriveOptions& opts) {
  if (context.size() > 20) throw std::invalid_argument("check_alg_guard: context too large to enumerate subsets");
  AlgGuardReport report;
  std::size_t n = context.size();
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    std::vector<Term> subset;
    for (std::size_t i = 0; i < n; ++i) {
      if ((m >> i) & 1u) subset.push_back(context[i]);
    }
    ++report.subsets;
    Deriver d(theory, opts);
    d.add_known(subset);
    if (!d.synth(theory.normalize(target), opts.depth)) continue;
    ++report.deriving_subsets;
    bool guarded = std::any_of(guards.begin(), guards.end(), [&](const std::vector<Term>& g) {
      return std::all_of(g.begin(), g.end(), [&](const Term& u) { return d.synth(theory.normalize(u), opts.depth); });
    });
    if (!guarded) {
      report.holds = false;
      report.violations.push_back(std::move(subset));
    }
  }
  return report;
}

// ---------------------------------------------------------------- runs

TermSet TermContext::all() const {
  TermSet out;
  for (const auto& [p, ts] : initial) out.insert(ts.begin(), ts.end());
  for (const auto& [p, ts] : observed) out.insert(ts.begin(), ts.end());
  return out;
}

TermContext term_context(const Run& run, std::span<const std::size_t> cut) {
  std::size_t limit = run.actions.size();
  for (auto idx : cut) {
    if (idx >= run.actions.size()) throw std::invalid_argument("term_context: unknown action index");
    limit = std::min(limit, idx);
  }
  TermContext ctx;
  for (const auto& [p, ts] : run.initial) ctx.initial[p].insert(ts.begin(), ts.end());
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& a = run.actions[i];
    ctx.observed[a.principal].insert(a.term);
  }
  return ctx;
}

ChallengeResponseCheck check_challenge_response(const Run& run, const std::string& verifier,
                                                const std::string& prover, const Term& nonce,
                                                const Term& challenge, const Term& response,
                                                const Term& secret, const Theory& theory,
                                                const DeriveOptions& opts) {
  using K = RunAction::Kind;
  ChallengeResponseCheck out;
  const auto& acts = run.actions;
  auto find = [&](const std::string& who, K kind, const Term& t, std::size_t from) -> std::optional<std::size_t> {
    for (std::size_t i = from; i < acts.size(); ++i) {
      if (acts[i].principal == who && acts[i].kind == kind && acts[i].term == t) return i;
    }
    return std::nullopt;
  };

  auto fresh = find(verifier, K::fresh, nonce, 0);
  auto sent = fresh ? find(verifier, K::send, challenge, *fresh + 1) : std::nullopt;
  auto got = sent ? find(verifier, K::receive, response, *sent + 1) : std::nullopt;
  out.pattern_matched = fresh && sent && got;
  if (!out.pattern_matched) return out;

  out.secret_private = true;
  for (const auto& [who, ts] : run.initial) {
    if (who == verifier || who == prover) continue;
    if (std::find(ts.begin(), ts.end(), secret) != ts.end()) out.secret_private = false;
  }

  // Origination: the first send of the response by anyone.
  std::optional<std::size_t> origin;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (acts[i].kind == K::send && acts[i].term == response) {
      origin = i;
      break;
    }
  }
  std::size_t cut_at = origin.value_or(*got);
  std::vector<std::size_t> cut{cut_at};
  auto ctx = term_context(run, cut).all();
  std::vector<Term> context(ctx.begin(), ctx.end());
  auto report = check_alg_guard({{challenge, secret}}, response, context, theory, opts);
  out.guard_holds = report.holds;

  auto received = find(prover, K::receive, challenge, *sent + 1);
  out.order_holds = received && origin && acts[*origin].principal == prover && *received < *origin && *origin < *got;
  return out;
}

}  // namespace hkdb::symbolic
