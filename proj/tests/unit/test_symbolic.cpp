#include "hkdb/symbolic.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hkdb::symbolic;

namespace {

std::vector<Term> terms(const Theory& th, std::initializer_list<const char*> texts) {
  std::vector<Term> out;
  for (auto t : texts) out.push_back(th.parse(t));
  return out;
}

bool derives(const char* theory, std::initializer_list<const char*> known, const char* target) {
  auto th = Theory::by_name(theory);
  return derivable(terms(th, known), th.parse(target), th);
}

}  // namespace

TEST_SUITE("symbolic") {
  TEST_CASE("parse and print") {
    auto t = parse_term("enc(m.n, k')");
    CHECK(t.to_string() == "enc(m.n,k')");
    CHECK(t.free_vars() == std::set<std::string>{"k'", "m", "n"});
    CHECK(parse_term("#0101").free_vars().empty());
    CHECK_THROWS(parse_term("enc(m,"));
  }

  TEST_CASE("pairs flatten and project") {
    auto th = Theory::by_name("pairing");
    CHECK(th.parse("(a.b).c") == th.parse("a.b.c"));
    CHECK(th.parse("pi1(a.b)") == th.parse("a"));
    CHECK(th.parse("pi2(a.b)") == th.parse("b"));
  }

  TEST_CASE("normal forms") {
    CHECK(Theory::by_name("dy").parse("dec(enc(m,k),k)") == parse_term("m"));
    CHECK(Theory::by_name("hk").parse("neg(neg(x))") == parse_term("x"));
    CHECK(Theory::by_name("hk").parse("neg(#01)") == parse_term("#10"));
    auto dh = Theory::by_name("dh");
    CHECK(dh.parse("exp(exp(g,x),y)") == dh.parse("exp(exp(g,y),x)"));
    CHECK(dh.parse("exp(exp(g,x),y)") == dh.parse("exp(g,mult(y,x))"));
  }

  TEST_CASE("pairing projections") {
    CHECK(derives("pairing", {"a.b"}, "a"));
    CHECK(derives("pairing", {"a.b"}, "b"));
    CHECK(derives("pairing", {"a", "b"}, "b.a"));
    CHECK_FALSE(derives("pairing", {"a"}, "b"));
  }

  TEST_CASE("Dolev-Yao encryption") {
    CHECK(derives("dy", {"enc(m,k)", "k"}, "m"));
    CHECK_FALSE(derives("dy", {"enc(m,k)"}, "m"));
    CHECK(derives("dy", {"m", "k"}, "enc(m,k)"));
    CHECK(derives("dy", {"enc(k,j)", "j", "enc(m,k)"}, "m"));
  }

  TEST_CASE("Diffie-Hellman shared key") {
    CHECK(derives("dh", {"x", "exp(g,y)"}, "exp(g,mult(x,y))"));
    CHECK(derives("dh", {"y", "exp(g,x)"}, "exp(g,mult(x,y))"));
    CHECK_FALSE(derives("dh", {"exp(g,x)", "exp(g,y)"}, "exp(g,mult(x,y))"));
    CHECK(derives("dh", {"x", "y"}, "exp(g,mult(x,y))"));
  }

  TEST_CASE("Diffie-Hellman closure") {
    auto th = Theory::by_name("dh");
    auto c = derive_closure(terms(th, {"x", "exp(g,y)"}), th, {1, 64, 20000});
    CHECK(c.terms.count(th.parse("exp(g,mult(x,y))")) == 1);
    auto eavesdropper = derive_closure(terms(th, {"exp(g,x)", "exp(g,y)"}), th, {3, 64, 20000});
    CHECK(eavesdropper.terms.count(th.parse("exp(g,mult(x,y))")) == 0);
  }

  TEST_CASE("Diffie-Hellman guard") {
    auto th = Theory::by_name("dh");
    std::vector<std::vector<Term>> guards = {terms(th, {"x", "exp(g,y)"}), terms(th, {"y", "exp(g,x)"})};
    auto ctx = terms(th, {"x", "y", "exp(g,x)", "exp(g,y)"});
    auto rep = check_alg_guard(guards, th.parse("exp(g,mult(x,y))"), ctx, th);
    CHECK(rep.holds);
    CHECK(rep.subsets == 16);
    CHECK(rep.deriving_subsets > 0);
    auto bad = check_alg_guard({terms(th, {"x", "exp(g,y)"})}, th.parse("exp(g,mult(x,y))"), ctx, th);
    CHECK_FALSE(bad.holds);
  }

  TEST_CASE("Hancke-Kuhn token extraction") {
    CHECK(derives("hk", {"z", "boxplus(z,h)", "boxplus(neg(z),h)"}, "h"));
    CHECK_FALSE(derives("hk", {"z", "boxplus(z,h)"}, "h"));
    CHECK(derives("hk", {"s", "a", "b", "x"}, "boxplus(x,H(s.a.b))"));
    CHECK_FALSE(derives("hk", {"a", "b", "x"}, "boxplus(x,H(s.a.b))"));
  }

  TEST_CASE("closure is extensive, monotone and idempotent when saturated") {
    auto th = Theory::by_name("pairing");
    DeriveOptions opts{2, 8, 20000};
    auto small = terms(th, {"a.b"});
    auto big = terms(th, {"a.b", "c"});
    auto c1 = derive_closure(small, th, opts);
    auto c2 = derive_closure(big, th, opts);
    for (const auto& t : small) CHECK(c1.terms.count(t) == 1);
    CHECK(std::includes(c2.terms.begin(), c2.terms.end(), c1.terms.begin(), c1.terms.end()));

    auto dy = Theory::by_name("dy");
    auto sat = derive_closure(terms(dy, {"enc(m,k)"}), dy, {6, 3, 20000});
    REQUIRE(sat.saturated);
    std::vector<Term> again(sat.terms.begin(), sat.terms.end());
    CHECK(derive_closure(again, dy, {6, 3, 20000}).terms == sat.terms);
  }

  TEST_CASE("term context before a cut") {
    Run run;
    run.initial["A"] = {parse_term("k")};
    run.actions = {{"A", RunAction::Kind::fresh, parse_term("n")},
                   {"A", RunAction::Kind::send, parse_term("n")},
                   {"B", RunAction::Kind::receive, parse_term("n")}};
    std::vector<std::size_t> at2{2};
    auto ctx = term_context(run, at2);
    CHECK(ctx.all().count(parse_term("k")) == 1);
    CHECK(ctx.all().count(parse_term("n")) == 1);
    std::vector<std::size_t> at0{0};
    CHECK(term_context(run, at0).all().count(parse_term("n")) == 0);
    std::vector<std::size_t> out{7};
    CHECK_THROWS_AS(term_context(run, out), std::invalid_argument);
  }

  TEST_CASE("challenge-response authentication orders the run") {
    auto th = Theory::by_name("cr");
    auto n = th.parse("n"), c = th.parse("c(n)"), s = th.parse("s"), r = th.parse("r(n,s)");
    using K = RunAction::Kind;
    Run run;
    run.initial["V"] = {s};
    run.initial["P"] = {s};
    run.initial["E"] = {th.parse("e")};
    run.actions = {{"V", K::fresh, n}, {"V", K::send, c},    {"P", K::receive, c},
                   {"P", K::send, r},  {"V", K::receive, r}};
    auto ok = check_challenge_response(run, "V", "P", n, c, r, s, th);
    CHECK(ok.pattern_matched);
    CHECK(ok.secret_private);
    CHECK(ok.guard_holds);
    CHECK(ok.order_holds);
    CHECK(ok.conclusion_valid());

    // The secret leaks: the hypotheses fail, so the conclusion is not claimed.
    Run leaked = run;
    leaked.initial["E"].push_back(s);
    auto lk = check_challenge_response(leaked, "V", "P", n, c, r, s, th);
    CHECK_FALSE(lk.secret_private);
    CHECK(lk.conclusion_valid());

    // The response arrives without the prover's participation.
    Run broken = run;
    broken.actions = {{"V", K::fresh, n}, {"V", K::send, c}, {"E", K::send, r}, {"V", K::receive, r}};
    auto br = check_challenge_response(broken, "V", "P", n, c, r, s, th);
    CHECK(br.pattern_matched);
    CHECK_FALSE(br.order_holds);
  }
}
