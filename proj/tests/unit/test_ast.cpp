#include <map>

#include <catch_amalgamated.hpp>

#include "omt/ast.hpp"
#include "omt/errors.hpp"
#include "omt/sat.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace omt;
using ast::Formula;
using ast::FormulaKind;
using ast::LinearExpr;
using ast::Relation;

TEST_CASE("arithmetic atoms are normalized and hash-consed", "[ast]")
{
    ast::Context ctx;
    TermId x = ctx.declare_var("x", ast::kRealSort);
    TermId y = ctx.declare_var("y", ast::kRealSort);
    LinearExpr lhs = LinearExpr::of_term(x, Rational(2));
    lhs.add_term(y, Rational(4));
    Formula a = ctx.mk_arith(lhs, Relation::Le, LinearExpr::of_constant(Rational(6)));
    LinearExpr half = LinearExpr::of_term(x);
    half.add_term(y, Rational(2));
    Formula b = ctx.mk_arith(half, Relation::Le, LinearExpr::of_constant(Rational(3)));
    CHECK(a == b);
    // -x >= -3 is x <= 3.
    Formula c = ctx.mk_arith(LinearExpr::of_term(x, Rational(-1)), Relation::Ge, LinearExpr::of_constant(Rational(-3)));
    Formula d = ctx.mk_arith(LinearExpr::of_term(x), Relation::Le, LinearExpr::of_constant(Rational(3)));
    CHECK(c == d);
    CHECK(ctx.mk_arith(LinearExpr::of_constant(Rational(1)), Relation::Lt, LinearExpr::of_constant(Rational(2))) ==
          ctx.mk_true());
    CHECK(ctx.to_string(a) == "(<= (+ x (* 2 y)) 3)");
}

TEST_CASE("equalities pick their theory", "[ast]")
{
    ast::Context ctx;
    TermId x = ctx.declare_var("x", ast::kRealSort);
    TermId y = ctx.declare_var("y", ast::kRealSort);
    ast::FuncId f = ctx.declare_fun("f", {ast::kRealSort}, ast::kRealSort);
    Formula arith = ctx.mk_eq(x, y);
    CHECK(ctx.atom(ctx.node(arith).atom).kind == ast::AtomKind::Arith);
    Formula uf = ctx.mk_eq(ctx.mk_app(f, {x}), y);
    CHECK(ctx.atom(ctx.node(uf).atom).kind == ast::AtomKind::Equality);
    CHECK(ctx.is_euf_pure(ctx.node(uf).atom));
    CHECK(ctx.mk_eq(x, x) == ctx.mk_true());
    TermId b = ctx.declare_var("B", ast::kBoolSort);
    CHECK_THROWS_AS(ctx.mk_eq(x, b), UsageError);
}

TEST_CASE("purification separates the theories", "[ast]")
{
    ast::Context ctx;
    TermId x = ctx.declare_var("x", ast::kRealSort);
    TermId y = ctx.declare_var("y", ast::kRealSort);
    ast::FuncId f = ctx.declare_fun("f", {ast::kRealSort}, ast::kRealSort);
    LinearExpr sum = LinearExpr::of_term(x);
    sum.add_term(y, Rational(1));
    // f(x + y) <= 3 mixes both theories.
    LinearExpr app = LinearExpr::of_term(ctx.mk_app(f, {ctx.mk_linear(sum)}));
    Formula mixed = ctx.mk_arith(app, Relation::Le, LinearExpr::of_constant(Rational(3)));
    CHECK_FALSE(ast::is_pure(ctx, mixed));
    ast::PurifyResult p = ast::purify(ctx, mixed);
    CHECK(ast::is_pure(ctx, p.formula));
    CHECK_FALSE(p.interface_vars.empty());
    auto ies = ast::interface_equalities(ctx, {x, y});
    REQUIRE(ies.size() == 1);
    CHECK(ctx.name_of(ies[0].first) == "x");
}

TEST_CASE("printing round-trips numbers and symbols", "[ast]")
{
    CHECK(ast::smt_number(Rational(-3)) == "(- 3)");
    CHECK(ast::smt_number(Rational(3, 4)) == "(/ 3 4)");
    CHECK(ast::smt_number(Rational(-3, 4)) == "(- (/ 3 4))");
    CHECK(ast::smt_symbol("x1") == "x1");
    CHECK(ast::smt_symbol("a b") == "|a b|");
}

TEST_CASE("model evaluation", "[ast]")
{
    ast::Context ctx;
    TermId x = ctx.declare_var("x", ast::kRealSort);
    TermId a = ctx.declare_var("A", ast::kBoolSort);
    Formula f = ctx.mk_or(ctx.mk_bool(a), ctx.mk_arith(LinearExpr::of_term(x), Relation::Gt, LinearExpr{}));
    ast::Model m;
    m.values[x] = Rational(-1);
    CHECK_FALSE(m.evaluate(ctx, f));
    m.booleans[a] = true;
    CHECK(m.evaluate(ctx, f));
}

TEST_CASE("CNF conversion preserves models on the original atoms", "[ast][property]")
{
    testing::Rng rng(5);
    for (int round = 0; round < 200; ++round) {
        ast::Context ctx;
        std::vector<Formula> atoms;
        for (int i = 0; i < 5; ++i)
            atoms.push_back(ctx.mk_bool(ctx.declare_var("P" + std::to_string(i), ast::kBoolSort)));
        Formula f = testing::random_formula(rng, ctx, atoms, 1 + round % 6);
        std::vector<AtomId> originals = ast::atoms_of(ctx, f);
        auto clauses = ast::cnfize(ctx, f);
        for (std::uint32_t mask = 0; mask < (1u << originals.size()); ++mask) {
            std::map<AtomId, bool> truth;
            for (std::size_t i = 0; i < originals.size(); ++i)
                truth[originals[i]] = mask >> i & 1;
            sat::Solver s;
            for (std::size_t v = 0; v < ctx.num_atoms(); ++v)
                s.new_var();
            for (const auto& c : clauses) {
                std::vector<sat::Lit> lits;
                for (const auto& l : c)
                    lits.push_back(sat::Lit::make(l.atom, !l.positive));
                s.add_clause(lits);
            }
            for (auto [a, v] : truth)
                s.add_clause({sat::Lit::make(a, !v)});
            REQUIRE((s.solve() == sat::Result::Sat) == oracle::evaluate(ctx, f, truth));
        }
    }
}
