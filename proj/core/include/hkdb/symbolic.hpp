#pragma once

// Term algebra and Dolev-Yao style derivability over a few built-in message
// theories, algebraic guards, and term contexts of symbolic runs.
//
// Text syntax (prefix, with infix '.' for pairing):
//   x            variable (or a theory constant such as g)
//   #0101        bit literal
//   u.v.w        pairing; associative, so this is one 3-tuple
//   op(a, b)     application, e.g. exp(g,x), H(s.a.b), boxplus(x,h)

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hkdb::symbolic {

class Term {
 public:
  enum class Kind { variable, constant, apply };

  Term() = default;

  static Term var(std::string name);
  /// Nullary symbol, bit literal ("#0101") or integer literal.
  static Term constant(std::string name);
  static Term apply(std::string op, std::vector<Term> args);
  static Term pair(std::vector<Term> items);

  Kind kind() const noexcept { return kind_; }
  const std::string& symbol() const noexcept { return symbol_; }
  const std::vector<Term>& args() const noexcept { return args_; }
  bool is_var() const noexcept { return kind_ == Kind::variable; }
  bool is_apply(std::string_view op) const noexcept { return kind_ == Kind::apply && symbol_ == op; }

  /// Node count.
  std::size_t size() const;
  std::set<std::string> free_vars() const;
  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  Kind kind_ = Kind::constant;
  std::string symbol_;
  std::vector<Term> args_;
};

using TermSet = std::set<Term>;

/// Parses the text syntax. `constants` lists identifiers that denote
/// theory constants instead of variables.
Term parse_term(std::string_view text, const std::set<std::string>& constants = {});

/// Replaces variables named in `defs` by their definitions (one pass, no recursion).
Term substitute(const Term& t, const std::map<std::string, Term>& defs);

struct OpSig {
  std::string name;
  int arity = 0;  // -1: variadic (pairing)
  bool destructor = false;
};

class Theory {
 public:
  enum class Kind { pairing, dolev_yao, diffie_hellman, hancke_kuhn, challenge_response };

  explicit Theory(Kind kind);
  /// "pairing", "dy", "dh", "hk", "cr".
  static Theory by_name(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<OpSig>& ops() const noexcept { return ops_; }
  const std::set<std::string>& constants() const noexcept { return constants_; }
  const OpSig* find_op(std::string_view name) const;

  /// Confluent, idempotent rewriting to normal form.
  Term normalize(const Term& t) const;
  Term parse(std::string_view text) const { return normalize(parse_term(text, constants_)); }

 private:
  Term normalize_node(Term t) const;

  Kind kind_;
  std::string name_;
  std::vector<OpSig> ops_;
  std::set<std::string> constants_;
};

struct DeriveOptions {
  unsigned depth = 6;
  std::size_t max_nodes = 64;
  std::size_t max_terms = 20000;
};

struct Closure {
  TermSet terms;
  unsigned layers = 0;     // layers actually generated
  bool saturated = false;  // a layer added nothing new
  bool truncated = false;  // stopped at max_terms
};

/// All normal forms reachable by at most `depth` layers of operation
/// applications over `known`. Applications of a destructor that do not
/// reduce are not generated.
Closure derive_closure(std::span<const Term> known, const Theory& theory, const DeriveOptions& opts = {});

/// Goal-directed derivability. Decomposition (projections, decryption with a
/// derivable key, token extraction) saturates without a depth charge;
/// composition is limited to `depth` nested applications. A false result
/// means "not derivable within the budget".
bool derivable(std::span<const Term> known, const Term& target, const Theory& theory,
               const DeriveOptions& opts = {});

struct AlgGuardReport {
  bool holds = true;
  std::size_t subsets = 0;
  std::size_t deriving_subsets = 0;
  std::vector<std::vector<Term>> violations;
};

/// For every subset Xi of `context`: Xi derives target implies some guard
/// set is wholly derivable from Xi.
AlgGuardReport check_alg_guard(const std::vector<std::vector<Term>>& guards, const Term& target,
                               std::span<const Term> context, const Theory& theory,
                               const DeriveOptions& opts = {});

// Symbolic runs.

struct RunAction {
  enum class Kind { fresh, send, receive };
  std::string principal;
  Kind kind = Kind::send;
  Term term;
};

struct Run {
  std::map<std::string, std::vector<Term>> initial;
  std::vector<RunAction> actions;
};

struct TermContext {
  std::map<std::string, TermSet> initial;
  std::map<std::string, TermSet> observed;

  TermSet all() const;
};

/// Terms known initially plus those observed strictly before the earliest
/// action in `cut` (indices into run.actions). An empty cut means the end of
/// the run. Throws std::invalid_argument on an out-of-range index.
TermContext term_context(const Run& run, std::span<const std::size_t> cut);

struct ChallengeResponseCheck {
  bool pattern_matched = false;  // verifier: fresh, send challenge, receive response
  bool secret_private = false;   // only prover and verifier hold the secret initially
  bool guard_holds = false;      // {{challenge, secret}} guards response before it is sent
  bool order_holds = false;      // prover received the challenge, then originated the response
  /// The implication: hypotheses imply the ordered conclusion.
  bool conclusion_valid() const {
    return !(pattern_matched && secret_private && guard_holds) || order_holds;
  }
};

/// Validates the ordered-conclusion claim of challenge-response
/// authentication on one concrete run.
ChallengeResponseCheck check_challenge_response(const Run& run, const std::string& verifier,
                                                const std::string& prover, const Term& nonce,
                                                const Term& challenge, const Term& response,
                                                const Term& secret, const Theory& theory,
                                                const DeriveOptions& opts = {});

}  // namespace hkdb::symbolic
