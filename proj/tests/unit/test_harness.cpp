#include "hkdb/harness.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <set>
#include <sstream>

using namespace hkdb;
using namespace hkdb::harness;

TEST_SUITE("harness") {
  TEST_CASE("trial seeds are deterministic and distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(trial_seed(7, i));
    CHECK(seen.size() == 1000);
    CHECK(trial_seed(7, 3) == trial_seed(7, 3));
    CHECK(trial_seed(7, 3) != trial_seed(8, 3));
  }

  TEST_CASE("Wilson interval") {
    auto ci = wilson_interval(50, 100);
    CHECK(ci.lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(ci.hi == doctest::Approx(0.5962).epsilon(1e-3));
    CHECK(wilson_interval(0, 10).lo == 0.0);
    CHECK(wilson_interval(10, 10).hi == 1.0);
    CHECK_THROWS(wilson_interval(0, 0));
  }

  TEST_CASE("Monte Carlo counts do not depend on the worker count") {
    protocol::ProtocolConfig c;
    c.ell = 3;
    auto s = adversary::strategy_from_name("prequery-stick");
    auto one = monte_carlo(c, s, 3000, 99, 1);
    auto four = monte_carlo(c, s, 3000, 99, 4);
    CHECK(one.successes == four.successes);
    CHECK(one.mean_estimated_distance == four.mean_estimated_distance);
    CHECK(one.analytic->value() == Rational(27, 64));
    CHECK(one.consistent(5.0));
  }

  TEST_CASE("honest runs always pass") {
    auto e = monte_carlo_honest(protocol::ProtocolConfig{}, 500, 1, 2);
    CHECK(e.successes == 500);
    CHECK(e.mean_estimated_distance == doctest::Approx(3.0));
  }

  TEST_CASE("sweep") {
    protocol::ProtocolConfig c;
    auto r = sweep(c, adversary::strategy_from_name("naive-guess"), 1, 4, 4000, 5, 2);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows[0].ell == 1);
    CHECK_FALSE(r.rows[0].ratio_to_prev);
    CHECK(r.rows[1].ratio_to_prev);
    REQUIRE(r.decay_ratio);
    CHECK(*r.decay_ratio == doctest::Approx(0.5).epsilon(0.1));
    std::ostringstream os;
    write_csv(os, r);
    auto text = os.str();
    CHECK(text.rfind("ell,strategy,trials,successes,p_hat,ci_lo,ci_hi,analytic_num,analytic_den,z\n", 0) == 0);
    CHECK(text.find("\n1,naive-guess,4000,") != std::string::npos);
    CHECK(to_json(r)["rows"].size() == 4);
    CHECK_THROWS(sweep(c, adversary::strategy_from_name("naive-guess"), 3, 2, 10, 1));
  }

  TEST_CASE("acceptance bound") {
    Rational p = ExactProb::power(Rational(3, 4), 16).value();
    auto b = bayes_bound(p, p, Rational(1, 2), Rational(1, 2));
    CHECK(b == 1 - 2 * p);
    CHECK(to_decimal(b, 10) == "0.9799548085");
    CHECK(bayes_bound(Rational(1), Rational(1), Rational(1, 2), Rational(1, 4)) == 0);
    CHECK_THROWS_AS(bayes_bound(p, p, Rational(1, 2), Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(bayes_bound(Rational(2), p, Rational(1, 2), Rational(1)), std::invalid_argument);
  }

  TEST_CASE("exact claim runners") {
    for (unsigned ell = 1; ell <= 3; ++ell) {
      CHECK(claim_monty(ell).pass);
      CHECK(claim_attacker_average(ell, 5).pass);
      CHECK(claim_early(ell).pass);
      CHECK(claim_hamming(ell).pass);
      CHECK(claim_known_secret(ell).pass);
    }
    CHECK(claim_kernel(3, 5, 1).pass);
    CHECK(claim_binomial(20).pass);
    CHECK_THROWS(run_claim("nope", 1));
  }

  TEST_CASE("subbayes corpus reports its counterexamples") {
    auto r = claim_subbayes(20, 2024, 12);
    CHECK(r.detail["scenarios"].get<std::size_t>() >= 20);
    CHECK(r.rows.size() == r.detail["scenarios"].get<std::size_t>());
    if (!r.pass) CHECK_FALSE(r.detail["examples"].empty());
  }

  TEST_CASE("claim output") {
    auto r = claim_monty(1);
    auto j = to_json(r);
    CHECK(j["pass"] == true);
    CHECK(j["rows"].size() == r.rows.size());
    std::ostringstream os;
    write_csv(os, r);
    CHECK(os.str().find("claim,ell,label") == 0);
  }
}
