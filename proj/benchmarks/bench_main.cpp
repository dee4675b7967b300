#include "hkdb/adversary.hpp"
#include "hkdb/oracle.hpp"
#include "hkdb/protocol.hpp"
#include "hkdb/symbolic.hpp"

#include <benchmark/benchmark.h>

using namespace hkdb;

namespace {

void BM_GuessChanceMonty(benchmark::State& state) {
  const auto ell = static_cast<unsigned>(state.range(0));
  oracle::Universe u;
  u.declare("x", ell);
  u.declare("z", ell);
  u.declare("h", 2 * ell);
  std::vector<oracle::Term> ks{u.parse("z"), u.parse("boxplus(z,h)")};
  std::vector<oracle::Term> ts{u.parse("boxplus(x,h)")};
  oracle::EnumOptions opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(oracle::guess_chance(u, ks, ts, opts));
  state.counters["envs"] = static_cast<double>(std::uint64_t{1} << (4 * ell));
}
BENCHMARK(BM_GuessChanceMonty)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_HashedGuard(benchmark::State& state) {
  oracle::GuardSpec spec;
  auto& u = spec.universe;
  u.declare("s", 2);
  u.declare("a", 1);
  u.declare("b", 1);
  u.declare("x", 1);
  u.declare("z", 1);
  u.hash_bits = 2;
  u.define("h", "H(s.a.b)");
  spec.guards = {{u.parse("s")}, {u.parse("boxplus(z,h)")}};
  spec.target = u.parse("boxplus(x,h)");
  for (const char* t : {"s", "a", "b", "x", "z", "boxplus(z,h)"}) spec.context.push_back(u.parse(t));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::check_prob_guard(spec).holds);
}
BENCHMARK(BM_HashedGuard)->Unit(benchmark::kMillisecond);

void BM_Session(benchmark::State& state) {
  protocol::ProtocolConfig cfg;
  cfg.ell = static_cast<unsigned>(state.range(0));
  cfg.record_events = state.range(1) != 0;
  auto s = adversary::strategy_from_name("prequery-stick");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(adversary::attack_session(cfg, s, ++seed).verdict.accepted);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Session)->ArgsProduct({{8, 32, 64}, {0, 1}});

void BM_ExactAcceptance(benchmark::State& state) {
  protocol::ProtocolConfig cfg;
  cfg.ell = static_cast<unsigned>(state.range(0));
  cfg.secret_bits = 2;
  cfg.counter_bits = 2;
  auto s = adversary::strategy_from_name("prequery-stick");
  for (auto _ : state) benchmark::DoNotOptimize(adversary::exact_acceptance(cfg, s).probability);
}
BENCHMARK(BM_ExactAcceptance)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_DerivableDH(benchmark::State& state) {
  auto th = symbolic::Theory::by_name("dh");
  std::vector<symbolic::Term> known{th.parse("x"), th.parse("exp(g,y)")};
  auto target = th.parse("exp(g,mult(x,y))");
  for (auto _ : state) benchmark::DoNotOptimize(symbolic::derivable(known, target, th));
}
BENCHMARK(BM_DerivableDH);

void BM_DerivableHK(benchmark::State& state) {
  auto th = symbolic::Theory::by_name("hk");
  std::vector<symbolic::Term> known{th.parse("z"), th.parse("boxplus(z,H(s.a.b))"),
                                    th.parse("boxplus(neg(z),H(s.a.b))"), th.parse("x")};
  auto target = th.parse("boxplus(x,H(s.a.b))");
  for (auto _ : state) benchmark::DoNotOptimize(symbolic::derivable(known, target, th));
}
BENCHMARK(BM_DerivableHK);

void BM_ClosureDY(benchmark::State& state) {
  auto th = symbolic::Theory::by_name("dy");
  std::vector<symbolic::Term> known{th.parse("enc(m,k)"), th.parse("enc(k,j)"), th.parse("j")};
  symbolic::DeriveOptions opts;
  opts.depth = static_cast<unsigned>(state.range(0));
  opts.max_nodes = 8;
  for (auto _ : state) benchmark::DoNotOptimize(symbolic::derive_closure(known, th, opts).terms.size());
}
BENCHMARK(BM_ClosureDY)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
