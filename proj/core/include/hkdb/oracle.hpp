#pragma once

// Exact guessing chances by exhaustive enumeration of environments.
//
// Scenario expressions reuse the symbolic term syntax, interpreted over
// bitstrings:
//   x                 declared variable
//   #0110             literal
//   u.v               concatenation
//   neg(e)            bitwise negation
//   boxplus(x, h)     Hancke-Kuhn response, |h| = 2|x|
//   kmask(x, h)       x with the kernel positions of h replaced by '*'
//   H(e)              random oracle with `hash_bits` outputs
//   slice(e, i, n)    n bits of e starting at 1-based position i
//   f(seed, x)        a named partitioned function
//
// H is lazily tabulated: every distinct argument value inside one
// environment receives its own uniform output, so collisions between
// distinct arguments are part of the enumeration rather than assumed away.

#include "hkdb/bits.hpp"
#include "hkdb/hkfun.hpp"
#include "hkdb/rational.hpp"
#include "hkdb/symbolic.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hkdb::oracle {

using symbolic::Term;
using symbolic::parse_term;

struct VarDecl {
  std::string name;
  unsigned bits = 1;
};

/// Declarations shared by all expressions of a scenario.
struct Universe {
  std::vector<VarDecl> vars;
  unsigned hash_bits = 2;
  /// Macros expanded before evaluation, e.g. h -> H(s.a.b).
  std::map<std::string, Term> defs;
  std::map<std::string, PartitionedFunction> functions;

  void declare(std::string name, unsigned bits) { vars.push_back({std::move(name), bits}); }
  void define(std::string name, std::string_view text);
  /// Parses, expands macros and normalizes.
  Term parse(std::string_view text) const;
  std::vector<Term> parse_all(std::span<const std::string> texts) const;
  Term expand(const Term& t) const;
  const VarDecl* find_var(std::string_view name) const;
};

struct GuessScenario {
  Universe universe;
  std::vector<Term> knowns;
  std::vector<Term> targets;
};

struct EnumOptions {
  unsigned budget_bits = 24;
  unsigned workers = 0;  // 0: hardware concurrency
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(unsigned required, unsigned budget);
  unsigned required_bits() const noexcept { return required_; }

 private:
  unsigned required_;
};

struct ChanceDetail {
  ExactProb chance;
  unsigned enumerated_bits = 0;
  unsigned hash_slots = 0;
  std::vector<std::string> free_vars;
  std::size_t known_classes = 0;  // distinct values of the knowns
};

/// (1/2^B) * sum over known values v of max over target values w of
/// #{environments : knowns = v and targets = w}, where B counts the bits of
/// FV(knowns, targets) plus the random-oracle slots.
ChanceDetail guess_chance_detail(const Universe& u, std::span<const Term> knowns, std::span<const Term> targets,
                                 const EnumOptions& opts = {});
ExactProb guess_chance(const Universe& u, std::span<const Term> knowns, std::span<const Term> targets,
                       const EnumOptions& opts = {});
ExactProb guess_chance(const GuessScenario& s, const EnumOptions& opts = {});

/// guess_chance(knowns |- targets) - guess_chance({} |- targets).
Rational advantage(const Universe& u, std::span<const Term> knowns, std::span<const Term> targets,
                   const EnumOptions& opts = {});

struct SubbayesReport {
  ExactProb guard_chance;        // Xi |- Gamma
  ExactProb conditional_chance;  // Xi, Gamma |- Theta
  ExactProb joint_chance;        // Xi |- Gamma, Theta
  Rational lhs;                  // guard_chance * conditional_chance
  Rational rhs;                  // joint_chance
  bool holds = false;            // lhs <= rhs
  bool disjoint_fv = false;      // FV(Xi) and FV(Theta) share nothing
  bool equality = false;         // lhs == rhs
};

SubbayesReport check_subbayes(const Universe& u, std::span<const Term> xi, std::span<const Term> gamma,
                              std::span<const Term> theta, const EnumOptions& opts = {});

/// map: guessing chance by enumeration. algebraic: the chance is 1 when the
/// targets are derivable in the symbolic theory and 0 otherwise, i.e.
/// guessers that never read random bits.
enum class GuessMode { map, algebraic };

struct GuardSpec {
  Universe universe;
  std::vector<std::vector<Term>> guards;
  Term target;
  std::vector<Term> context;
  std::string theory = "hk";
};

struct GuardRow {
  std::vector<std::size_t> subset;  // indices into context
  Rational advantage;
  Rational lhs;      // Xi |- t
  Rational rhs;      // best guard product
  int witness = -1;  // guard attaining rhs
  bool checked = false;
  bool ok = true;
};

struct GuardReport {
  bool holds = true;
  std::size_t subsets = 0;
  std::size_t checked = 0;
  std::vector<GuardRow> rows;
};

GuardReport check_prob_guard(const GuardSpec& spec, GuessMode mode = GuessMode::map, const EnumOptions& opts = {},
                             const symbolic::DeriveOptions& derive = {});

/// Exact distribution of f(rho, a) over uniform seeds rho.
std::map<BitString, ExactProb> output_distribution(const PartitionedFunction& f, const BitString& a);

enum class Claim { hamming_chance, kernel_chance, monty, naive, binomial };

Claim claim_from_name(std::string_view name);

/// Closed forms. Parameters:
///   hamming_chance {delta}          2^-delta
///   kernel_chance  {kernel, ell}    2^(kernel - ell)
///   monty          {ell}            (3/4)^ell
///   naive          {ell}            2^-ell
///   binomial       {ell}            (3/2)^ell
Rational analytic(Claim claim, std::span<const unsigned> params);

struct BinomialReport {
  unsigned ell = 0;
  Rational sum;
  Rational closed_form;
  bool holds = false;
};

/// sum_{i=0}^{ell} C(ell, i) 2^-i against (3/2)^ell.
BinomialReport binomial_identity_check(unsigned ell);

// JSON.
//   {"vars": {"x": 1, "h": 2} | [{"name": "x", "bits": 1}],
//    "hash_bits": 2, "defs": {"h": "H(s.a.b)"}, "fixed": {"z": "01"},
//    "functions": {"f": {"blocks": [...]}},
//    "knowns": [...], "targets": [...],
//    "guards": [[...]], "target": "...", "context": [...], "theory": "hk"}
// Expressions are strings or {"op": name, "args": [...]} / {"var": name} /
// {"bits": "0101"} trees.
Universe universe_from_json(const nlohmann::json& doc);
Term term_from_json(const Universe& u, const nlohmann::json& node);
GuessScenario scenario_from_json(const nlohmann::json& doc);
GuardSpec guard_spec_from_json(const nlohmann::json& doc);

nlohmann::json rational_json(const Rational& r);
nlohmann::json to_json(const GuardReport& report, const GuardSpec& spec);
nlohmann::json to_json(const SubbayesReport& report);

}  // namespace hkdb::oracle
