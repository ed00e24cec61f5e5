#include "random_instances.hpp"

#include <algorithm>
#include <string>

namespace omt::testing {

using ast::Formula;
using ast::LinearExpr;
using ast::Relation;

namespace {

int uniform(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(Rng& rng, double p)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

Rational nonzero_rational(Rng& rng, int max_num, int max_den)
{
    for (;;) {
        Rational r = random_rational(rng, max_num, max_den);
        if (!r.is_zero())
            return r;
    }
}

Relation random_relation(Rng& rng)
{
    static constexpr Relation rels[] = {Relation::Le, Relation::Lt, Relation::Ge, Relation::Gt, Relation::Le,
                                        Relation::Ge, Relation::Eq};
    return rels[uniform(rng, 0, 6)];
}

LinearExpr random_form(Rng& rng, const std::vector<TermId>& vars, int max_terms)
{
    std::vector<TermId> pool = vars;
    std::shuffle(pool.begin(), pool.end(), rng);
    int k = uniform(rng, 1, std::min<int>(max_terms, static_cast<int>(pool.size())));
    LinearExpr e;
    for (int i = 0; i < k; ++i)
        e.add_term(pool[i], nonzero_rational(rng, 10, 10));
    return e;
}

Formula random_literal(Rng& rng, ast::Context& ctx, const std::vector<Formula>& atoms)
{
    Formula a = atoms[uniform(rng, 0, static_cast<int>(atoms.size()) - 1)];
    return chance(rng, 0.4) ? ctx.mk_not(a) : a;
}

} // namespace

Rational random_rational(Rng& rng, int max_num, int max_den)
{
    return Rational(uniform(rng, -max_num, max_num), uniform(rng, 1, max_den));
}

Formula random_formula(Rng& rng, ast::Context& ctx, const std::vector<Formula>& atoms, int num_clauses)
{
    std::vector<Formula> clauses;
    for (int c = 0; c < num_clauses; ++c) {
        int width = uniform(rng, 1, 3);
        std::vector<Formula> lits;
        for (int i = 0; i < width; ++i)
            lits.push_back(random_literal(rng, ctx, atoms));
        double shape = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        if (shape < 0.15 && lits.size() >= 2) {
            Formula head = lits.front();
            std::vector<Formula> rest(lits.begin() + 1, lits.end());
            clauses.push_back(ctx.mk_implies(ctx.mk_not(head), ctx.mk_or(rest)));
        } else if (shape < 0.25 && lits.size() >= 2) {
            clauses.push_back(ctx.mk_iff(lits[0], lits[1]));
        } else {
            clauses.push_back(ctx.mk_or(lits));
        }
    }
    return ctx.mk_and(clauses);
}

OmtProblem random_lra_problem(Rng& rng, const LraShape& shape)
{
    OmtProblem p;
    ast::Context& ctx = p.ctx;
    p.cost = ctx.declare_var("cost", ast::kRealSort);
    std::vector<TermId> vars{p.cost};
    int nvars = uniform(rng, 2, shape.max_vars);
    for (int i = 1; i < nvars; ++i)
        vars.push_back(ctx.declare_var("x" + std::to_string(i), ast::kRealSort));
    std::vector<TermId> others(vars.begin() + 1, vars.end());

    std::vector<Formula> top;
    int budget = uniform(rng, 2, shape.max_arith);
    auto take = [&]() { return budget-- > 0; };

    double link = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (link < 0.5 && take()) {
        // cost defined as a combination of the other variables, each boxed.
        LinearExpr def = random_form(rng, others, 3);
        top.push_back(ctx.mk_arith(LinearExpr::of_term(p.cost), Relation::Eq, def));
        for (const auto& [t, c] : def.terms) {
            if (chance(rng, shape.unbounded_bias))
                continue;
            if (!take())
                break;
            Relation r = c.sign() > 0 ? Relation::Ge : Relation::Le;
            if (chance(rng, 0.3))
                r = r == Relation::Ge ? Relation::Gt : Relation::Lt;
            top.push_back(ctx.mk_arith(LinearExpr::of_term(t), r, LinearExpr::of_constant(random_rational(rng, 10, 10))));
        }
    } else if (!chance(rng, shape.unbounded_bias) && take()) {
        Relation r = chance(rng, 0.3) ? Relation::Gt : Relation::Ge;
        top.push_back(ctx.mk_arith(LinearExpr::of_term(p.cost), r, LinearExpr::of_constant(random_rational(rng, 10, 10))));
    }

    std::vector<Formula> atoms;
    while (take()) {
        LinearExpr lhs = random_form(rng, vars, 3);
        Formula f = ctx.mk_arith(lhs, random_relation(rng), LinearExpr::of_constant(random_rational(rng, 10, 10)));
        if (ctx.node(f).kind == ast::FormulaKind::Atom)
            atoms.push_back(f);
    }
    int nbools = uniform(rng, 0, shape.max_bools);
    for (int i = 0; i < nbools; ++i)
        atoms.push_back(ctx.mk_bool(ctx.declare_var("A" + std::to_string(i + 1), ast::kBoolSort)));
    if (!atoms.empty())
        top.push_back(random_formula(rng, ctx, atoms, uniform(rng, 1, shape.max_clauses)));
    p.formula = ctx.mk_and(top);
    return p;
}

OmtProblem random_dtc_problem(Rng& rng, const DtcShape& shape)
{
    OmtProblem p;
    ast::Context& ctx = p.ctx;
    p.cost = ctx.declare_var("cost", ast::kRealSort);
    std::vector<TermId> xs;
    for (int i = 1; i <= shape.vars; ++i)
        xs.push_back(ctx.declare_var("x" + std::to_string(i), ast::kRealSort));
    std::vector<TermId> all = xs;
    all.push_back(p.cost);
    ast::FuncId f = ctx.declare_fun("f", {ast::kRealSort}, ast::kRealSort);
    ast::FuncId g = ctx.declare_fun("g", {ast::kRealSort, ast::kRealSort}, ast::kRealSort);
    auto pick = [&](const std::vector<TermId>& v) { return v[uniform(rng, 0, static_cast<int>(v.size()) - 1)]; };

    std::vector<Formula> top;
    if (chance(rng, 0.6))
        top.push_back(ctx.mk_arith(LinearExpr::of_term(p.cost), Relation::Eq, LinearExpr::of_term(pick(xs))));
    if (chance(rng, 0.85))
        top.push_back(ctx.mk_arith(LinearExpr::of_term(p.cost), chance(rng, 0.3) ? Relation::Gt : Relation::Ge,
                                   LinearExpr::of_constant(random_rational(rng, 10, 10))));

    std::vector<Formula> atoms;
    int narith = uniform(rng, 1, shape.max_arith);
    for (int i = 0; i < narith; ++i) {
        Formula a = ctx.mk_arith(random_form(rng, all, 2), random_relation(rng),
                                 LinearExpr::of_constant(random_rational(rng, 10, 10)));
        if (ctx.node(a).kind == ast::FormulaKind::Atom)
            atoms.push_back(a);
    }
    auto app = [&]() -> TermId {
        int kind = uniform(rng, 0, 3);
        if (kind == 0)
            return ctx.mk_app(g, {pick(xs), pick(xs)});
        if (kind == 1)
            return ctx.mk_app(f, {ctx.mk_app(f, {pick(xs)})});
        return ctx.mk_app(f, {pick(xs)});
    };
    int neq = uniform(rng, 1, shape.max_equalities);
    for (int i = 0; i < neq; ++i) {
        TermId lhs = app();
        TermId rhs = chance(rng, 0.5) ? app() : pick(xs);
        Formula e = ctx.mk_eq(lhs, rhs);
        if (ctx.node(e).kind == ast::FormulaKind::Atom)
            atoms.push_back(e);
    }
    int nbools = uniform(rng, 0, shape.max_bools);
    for (int i = 0; i < nbools; ++i)
        atoms.push_back(ctx.mk_bool(ctx.declare_var("A" + std::to_string(i + 1), ast::kBoolSort)));
    top.push_back(random_formula(rng, ctx, atoms, uniform(rng, 1, shape.max_clauses)));
    p.formula = ctx.mk_and(top);
    return p;
}

std::vector<std::vector<int>> random_cnf(Rng& rng, int num_vars, int num_clauses, int max_width)
{
    std::vector<std::vector<int>> out;
    for (int c = 0; c < num_clauses; ++c) {
        int width = uniform(rng, 1, std::min(max_width, num_vars));
        std::vector<int> vars(num_vars);
        for (int i = 0; i < num_vars; ++i)
            vars[i] = i + 1;
        std::shuffle(vars.begin(), vars.end(), rng);
        std::vector<int> clause;
        for (int i = 0; i < width; ++i)
            clause.push_back(chance(rng, 0.5) ? -vars[i] : vars[i]);
        out.push_back(std::move(clause));
    }
    return out;
}

} // namespace omt::testing
