#include <random>

#include <benchmark/benchmark.h>

#include "omt/encoders.hpp"
#include "omt/lra.hpp"
#include "omt/omt.hpp"
#include "omt/sat.hpp"

namespace {

using omt::Rational;

void BM_SatRandom3Cnf(benchmark::State& state)
{
    const int vars = static_cast<int>(state.range(0));
    const int clauses = vars * 4;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick(1, vars);
    std::bernoulli_distribution sign(0.5);
    std::vector<std::vector<omt::sat::Lit>> cnf;
    for (int c = 0; c < clauses; ++c) {
        std::vector<omt::sat::Lit> clause;
        for (int k = 0; k < 3; ++k)
            clause.push_back(omt::sat::Lit::from_dimacs(sign(rng) ? pick(rng) : -pick(rng)));
        cnf.push_back(clause);
    }
    for (auto _ : state) {
        omt::sat::Solver s;
        for (int v = 0; v < vars; ++v)
            s.new_var();
        for (const auto& c : cnf)
            s.add_clause(c);
        benchmark::DoNotOptimize(s.solve());
    }
}
BENCHMARK(BM_SatRandom3Cnf)->Arg(50)->Arg(100)->Arg(150);

void BM_SimplexMinimize(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (auto _ : state) {
        omt::lra::Solver s;
        std::vector<omt::lra::VarId> x;
        for (int i = 0; i < n; ++i)
            x.push_back(s.new_var());
        std::vector<omt::lra::AtomIndex> atoms;
        for (int i = 0; i < n; ++i) {
            atoms.push_back(s.register_atom({{x[i], Rational(1)}}, omt::ast::Relation::Ge, Rational(-10)));
            atoms.push_back(s.register_atom({{x[i], Rational(1)}}, omt::ast::Relation::Le, Rational(10)));
        }
        for (int r = 0; r < 2 * n; ++r) {
            std::vector<std::pair<omt::lra::VarId, Rational>> row;
            for (int i = 0; i < n; ++i)
                if (int c = coef(rng); c != 0)
                    row.emplace_back(x[i], Rational(c));
            if (row.empty())
                continue;
            atoms.push_back(s.register_atom(row, omt::ast::Relation::Le, Rational(coef(rng) + 10)));
        }
        for (auto a : atoms)
            s.assert_literal({a, true});
        if (!s.check())
            benchmark::DoNotOptimize(s.minimize(x[0]));
    }
}
BENCHMARK(BM_SimplexMinimize)->Arg(4)->Arg(8)->Arg(16);

void BM_StripPacking(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto algorithm = state.range(1) == 0 ? omt::Algorithm::Offline : omt::Algorithm::Inline;
    const auto strategy = state.range(2) == 0 ? omt::Strategy::Linear : omt::Strategy::Binary;
    omt::enc::LgdpEncoding e = omt::enc::encode_lgdp(omt::enc::gen_strip_packing(n, Rational(4), 1));
    omt::OmtOptions o;
    o.algorithm = algorithm;
    o.strategy = strategy;
    for (auto _ : state)
        benchmark::DoNotOptimize(omt::solve(e.problem, o));
}
BENCHMARK(BM_StripPacking)
    ->ArgsProduct({{3, 4}, {0, 1}, {0, 1}})
    ->ArgNames({"n", "inline", "bin"})
    ->Unit(benchmark::kMillisecond);

void BM_Jobshop(benchmark::State& state)
{
    omt::enc::LgdpEncoding e = omt::enc::encode_lgdp(omt::enc::gen_jobshop(static_cast<int>(state.range(0)), 2, 3));
    omt::OmtOptions o;
    o.strategy = omt::Strategy::Adaptive;
    for (auto _ : state)
        benchmark::DoNotOptimize(omt::solve(e.problem, o));
}
BENCHMARK(BM_Jobshop)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
