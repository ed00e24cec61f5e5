#include <catch_amalgamated.hpp>

#include "omt/smt.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace omt;
using ast::Formula;
using ast::LinearExpr;
using ast::Relation;
using sat::Result;

namespace {

Formula le(ast::Context& ctx, TermId x, int c)
{
    return ctx.mk_arith(LinearExpr::of_term(x), Relation::Le, LinearExpr::of_constant(Rational(c)));
}

Formula ge(ast::Context& ctx, TermId x, int c)
{
    return ctx.mk_arith(LinearExpr::of_term(x), Relation::Ge, LinearExpr::of_constant(Rational(c)));
}

} // namespace

TEST_CASE("boolean structure over arithmetic", "[smt]")
{
    ast::Context ctx;
    TermId x = ctx.declare_var("x", ast::kRealSort);
    TermId a = ctx.declare_var("A", ast::kBoolSort);
    Formula f = ctx.mk_and({ctx.mk_or(ctx.mk_bool(a), le(ctx, x, 0)), ctx.mk_implies(ctx.mk_bool(a), ge(ctx, x, 5)),
                            le(ctx, x, 3)});
    SmtEngine e(ctx, std::nullopt);
    e.assert_formula(f);
    REQUIRE(e.check() == Result::Sat);
    ast::Model m = e.model();
    CHECK(m.evaluate(ctx, f));
    CHECK(m.value_of(ctx, x) <= Rational(0));
    e.assert_formula(ge(ctx, x, 1));
    CHECK(e.check() == Result::Unsat);
}

TEST_CASE("assumption cores", "[smt]")
{
    ast::Context ctx;
    TermId x = ctx.declare_var("x", ast::kRealSort);
    SmtEngine e(ctx, std::nullopt);
    e.assert_formula(ge(ctx, x, 2));
    Formula small = le(ctx, x, 1);
    e.assert_formula(ctx.mk_or(small, ctx.mk_not(small)));
    AtomLiteral lit{ctx.node(small).atom, true};
    REQUIRE(e.check({lit}) == Result::Unsat);
    REQUIRE(e.core().size() == 1);
    CHECK(e.core()[0] == lit);
    CHECK(e.check() == Result::Sat);
}

TEST_CASE("congruence across theories", "[smt]")
{
    ast::Context ctx;
    TermId x = ctx.declare_var("x", ast::kRealSort);
    TermId y = ctx.declare_var("y", ast::kRealSort);
    ast::FuncId f = ctx.declare_fun("f", {ast::kRealSort}, ast::kRealSort);
    TermId fx = ctx.mk_app(f, {x}), fy = ctx.mk_app(f, {y});
    // x <= y, y <= x, f(x) != f(y) is unsat only through x = y.
    SmtEngine e(ctx, std::nullopt);
    LinearExpr diff = LinearExpr::of_term(x);
    diff.add_term(y, Rational(-1));
    e.assert_formula(ctx.mk_arith(diff, Relation::Le));
    e.assert_formula(ctx.mk_arith(diff, Relation::Ge));
    e.assert_formula(ctx.mk_not(ctx.mk_eq(fx, fy)));
    CHECK(e.check() == Result::Unsat);
}

TEST_CASE("verdicts and models on random LRA formulas", "[smt][property]")
{
    testing::Rng rng(314);
    for (int round = 0; round < 150; ++round) {
        OmtProblem p = testing::random_lra_problem(rng);
        bool expect_sat = oracle::brute_force_omt(p).kind != oracle::LpValue::Kind::Infeasible;
        SmtEngine e(p.ctx, std::nullopt);
        e.assert_formula(p.formula);
        Result r = e.check();
        REQUIRE((r == Result::Sat) == expect_sat);
        if (r == Result::Sat)
            REQUIRE(e.model().evaluate(p.ctx, p.formula));
    }
}

TEST_CASE("verdicts and models on random LRA+EUF formulas", "[smt][property]")
{
    testing::Rng rng(2718);
    for (int round = 0; round < 100; ++round) {
        OmtProblem p = testing::random_dtc_problem(rng);
        bool expect_sat = oracle::brute_force_dtc(p).kind != oracle::LpValue::Kind::Infeasible;
        ast::Context ctx = p.ctx;
        SmtEngine e(ctx, std::nullopt);
        e.assert_formula(p.formula);
        Result r = e.check();
        REQUIRE((r == Result::Sat) == expect_sat);
        if (r == Result::Sat)
            REQUIRE(e.model().evaluate(ctx, p.formula));
    }
}
