#include "omt/omt.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "omt/errors.hpp"

namespace omt {

using ast::LinearExpr;
using ast::Relation;
using Clock = std::chrono::steady_clock;

const char* algorithm_name(Algorithm a)
{
    return a == Algorithm::Offline ? "offline" : "inline";
}

const char* strategy_name(Strategy s)
{
    switch (s) {
    case Strategy::Linear:
        return "lin";
    case Strategy::Binary:
        return "bin";
    case Strategy::Adaptive:
        return "ada";
    }
    return "?";
}

const char* status_name(OmtResult::Status s)
{
    switch (s) {
    case OmtResult::Status::Optimum:
        return "optimum";
    case OmtResult::Status::Unsat:
        return "unsat";
    case OmtResult::Status::Unbounded:
        return "unbounded";
    case OmtResult::Status::Unknown:
        return "unknown";
    }
    return "?";
}

Extended OmtResult::mincost() const
{
    switch (status) {
    case Status::Unsat:
        return Extended::plus_infinity();
    case Status::Unbounded:
        return Extended::minus_infinity();
    case Status::Optimum:
        return Extended(value);
    case Status::Unknown:
        break;
    }
    throw UsageError("mincost of an unknown result");
}

Extended AssignmentMinimum::extended() const
{
    switch (kind) {
    case Kind::Inconsistent:
        return Extended::plus_infinity();
    case Kind::Unbounded:
        return Extended::minus_infinity();
    case Kind::Bounded:
        break;
    }
    return Extended(value);
}

std::optional<Rational> pick_pivot(const BoundState& bounds, Strategy strategy, SearchHistory& history)
{
    if (strategy == Strategy::Linear)
        return std::nullopt;
    if (history.force_linear) {
        history.force_linear = false;
        return std::nullopt;
    }
    if (strategy == Strategy::Adaptive && !history.binary_mode)
        return std::nullopt;
    if (!bounds.lb || !bounds.ub)
        return std::nullopt;
    Rational pivot = (bounds.lb->real + bounds.ub->real) / Rational(2);
    if (*bounds.lb < DeltaRational(pivot) && DeltaRational(pivot) < *bounds.ub)
        return pivot;
    return std::nullopt;
}

void record_progress(const BoundState& before, const DeltaRational& ub_new, SearchHistory& history)
{
    if (!before.lb || !before.ub)
        return;
    Rational width = before.ub->real - before.lb->real;
    if (width.sign() <= 0)
        return;
    Rational rho = (before.ub->real - ub_new.real) / width;
    if (rho < Rational(1, 10)) {
        if (++history.slow_steps >= 2)
            history.binary_mode = true;
    } else {
        history.slow_steps = 0;
    }
}

namespace {

AtomLiteral literal_of(const ast::Context& ctx, ast::Formula f)
{
    const ast::FormulaNode& n = ctx.node(f);
    if (n.kind == ast::FormulaKind::Atom)
        return {n.atom, true};
    if (n.kind == ast::FormulaKind::Not && ctx.node(n.kids[0]).kind == ast::FormulaKind::Atom)
        return {ctx.node(n.kids[0]).atom, false};
    throw std::logic_error("bound constraint did not reduce to a literal");
}

AtomLiteral cost_literal(ast::Context& ctx, TermId cost, Relation rel, const Rational& value)
{
    return literal_of(ctx, ctx.mk_arith(LinearExpr::of_term(cost), rel, LinearExpr::of_constant(value)));
}

/// The unit that excludes every cost not better than `best`.
AtomLiteral improvement_literal(ast::Context& ctx, TermId cost, const DeltaRational& best)
{
    return cost_literal(ctx, cost, best.delta.sign() > 0 ? Relation::Le : Relation::Lt, best.real);
}

std::optional<Clock::time_point> deadline_of(const OmtOptions& o, Clock::time_point start)
{
    if (!o.timeout)
        return std::nullopt;
    return start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*o.timeout));
}

EdiAssignment to_edi(const SmtEngine::Assignment& a)
{
    return {a.boolean, a.lra, a.euf, a.equal, a.distinct, a.strict};
}

/// State shared by both drivers.
struct Search {
    const OmtProblem& problem;
    Strategy strategy;
    OmtOptions options;
    Clock::time_point start = Clock::now();
    std::optional<Clock::time_point> deadline;
    ast::Context ctx;
    BoundState bounds;
    SearchHistory history;
    OmtResult result;
    bool unbounded = false;

    Search(const OmtProblem& p, Strategy s, const OmtOptions& o)
        : problem(p), strategy(s), options(o), deadline(deadline_of(o, start)), ctx(p.ctx)
    {
        if (p.lower_bound && p.upper_bound && !(*p.lower_bound < *p.upper_bound))
            throw ValidationError("empty cost range: lower bound must be below the upper bound");
        if (p.lower_bound)
            bounds.lb = DeltaRational(*p.lower_bound);
    }

    SmtConfig config() const
    {
        SmtConfig c;
        c.deadline = deadline;
        c.pure_literal_filtering = options.pure_literal_filtering;
        return c;
    }

    bool expired() const { return deadline && Clock::now() >= *deadline; }

    void improve(const DeltaRational& value, ast::Model model)
    {
        if (bounds.ub && !(value < *bounds.ub))
            return;
        record_progress(bounds, value, history);
        bounds.ub = value;
        bounds.witness = std::move(model);
    }

    /// Handles an Unsat answer. Returns true when the search is over.
    bool on_unsat(SmtEngine& engine, const std::optional<Rational>& pivot, std::optional<AtomLiteral> pivot_lit)
    {
        if (!pivot)
            return true;
        std::vector<AtomLiteral> core = engine.core();
        if (std::find(core.begin(), core.end(), *pivot_lit) == core.end())
            return true;
        bounds.lb = DeltaRational(*pivot);
        engine.add_clause({cost_literal(ctx, problem.cost, Relation::Ge, *pivot)}, sat::ClauseKind::Lemma);
        engine.retire(pivot_lit->atom);
        history.force_linear = true;
        history.binary_mode = false;
        history.slow_steps = 0;
        return false;
    }

    OmtResult finish(const SmtEngine& engine, OmtResult::Status status)
    {
        result.status = status;
        if (status == OmtResult::Status::Unsat && bounds.ub)
            result.status = OmtResult::Status::Optimum;
        if (result.status == OmtResult::Status::Optimum || result.status == OmtResult::Status::Unknown) {
            if (bounds.ub)
                result.value = *bounds.ub;
            result.model = bounds.witness;
        }
        if (status == OmtResult::Status::Unbounded)
            result.model = bounds.witness;
        const auto& interface = engine.interface_vars();
        result.cost_is_interface = std::find(interface.begin(), interface.end(), problem.cost) != interface.end();
        result.stats.conflicts = engine.sat_stats().conflicts;
        result.stats.decisions = engine.sat_stats().decisions;
        result.stats.pivots = engine.theory().pivots();
        result.stats.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        return result;
    }

    std::pair<std::optional<Rational>, std::vector<AtomLiteral>> next_step()
    {
        std::optional<Rational> pivot = pick_pivot(bounds, strategy, history);
        std::vector<AtomLiteral> assumptions;
        if (pivot) {
            ++result.stats.binary_steps;
            assumptions.push_back(cost_literal(ctx, problem.cost, Relation::Lt, *pivot));
        }
        return {pivot, assumptions};
    }
};

OmtResult run_offline(const OmtProblem& p, Strategy strategy, const OmtOptions& options)
{
    if (strategy == Strategy::Adaptive)
        throw UsageError("the adaptive strategy is only available with the inline algorithm");
    Search s(p, strategy, options);
    SmtEngine engine(s.ctx, p.cost, s.config());
    engine.assert_formula(bounded_formula(s.ctx, p));
    for (;;) {
        if (s.expired())
            return s.finish(engine, OmtResult::Status::Unknown);
        auto [pivot, assumptions] = s.next_step();
        ++s.result.stats.smt_calls;
        sat::Result r = engine.check(assumptions);
        if (r == sat::Result::Sat) {
            ++s.result.stats.minimize_calls;
            AssignmentMinimum m = mincost_of_assignment(s.ctx, p.cost, to_edi(engine.assignment()));
            if (m.kind == AssignmentMinimum::Kind::Unbounded) {
                s.bounds.witness = m.model;
                return s.finish(engine, OmtResult::Status::Unbounded);
            }
            if (m.kind == AssignmentMinimum::Kind::Inconsistent)
                throw std::logic_error("solver returned a theory-inconsistent assignment");
            s.improve(m.value, std::move(*m.model));
            engine.add_clause({improvement_literal(s.ctx, p.cost, m.value)}, sat::ClauseKind::Lemma);
        } else if (r == sat::Result::Unsat) {
            std::optional<AtomLiteral> pivot_lit;
            if (pivot)
                pivot_lit = assumptions.front();
            if (s.on_unsat(engine, pivot, pivot_lit))
                return s.finish(engine, OmtResult::Status::Unsat);
        } else {
            return s.finish(engine, OmtResult::Status::Unknown);
        }
    }
}

OmtResult run_inline(const OmtProblem& p, Strategy strategy, const OmtOptions& options)
{
    Search s(p, strategy, options);
    SmtEngine engine(s.ctx, p.cost, s.config());
    engine.set_final_hook([&s, &p, strategy](SmtEngine& e) {
        ++s.result.stats.minimize_calls;
        lra::Minimum m = e.minimize();
        if (m.kind == lra::Minimum::Kind::Unbounded) {
            s.unbounded = true;
            s.bounds.witness = e.model();
            return sat::FinalVerdict::Interrupt;
        }
        s.improve(m.value, e.model());
        e.add_clause({improvement_literal(s.ctx, p.cost, m.value)}, sat::ClauseKind::Lemma);
        return strategy == Strategy::Linear ? sat::FinalVerdict::Continue : sat::FinalVerdict::Interrupt;
    });
    engine.assert_formula(bounded_formula(s.ctx, p));
    for (;;) {
        if (s.expired())
            return s.finish(engine, OmtResult::Status::Unknown);
        auto [pivot, assumptions] = s.next_step();
        ++s.result.stats.smt_calls;
        sat::Result r = engine.check(assumptions);
        if (s.unbounded)
            return s.finish(engine, OmtResult::Status::Unbounded);
        if (r == sat::Result::Interrupted)
            continue;
        if (r == sat::Result::Unsat) {
            std::optional<AtomLiteral> pivot_lit;
            if (pivot)
                pivot_lit = assumptions.front();
            if (s.on_unsat(engine, pivot, pivot_lit))
                return s.finish(engine, OmtResult::Status::Unsat);
        } else if (r == sat::Result::Sat) {
            throw std::logic_error("search accepted a model without minimizing it");
        } else {
            return s.finish(engine, OmtResult::Status::Unknown);
        }
    }
}

} // namespace

ast::Formula bounded_formula(ast::Context& ctx, const OmtProblem& p)
{
    std::vector<ast::Formula> parts{p.formula};
    if (p.lower_bound)
        parts.push_back(ctx.mk_arith(LinearExpr::of_term(p.cost), Relation::Ge, LinearExpr::of_constant(*p.lower_bound)));
    if (p.upper_bound)
        parts.push_back(ctx.mk_arith(LinearExpr::of_term(p.cost), Relation::Lt, LinearExpr::of_constant(*p.upper_bound)));
    return parts.size() == 1 ? p.formula : ctx.mk_and(std::move(parts));
}

OmtResult omt_offline(const OmtProblem& p, Strategy strategy, const OmtOptions& options)
{
    return run_offline(p, strategy, options);
}

OmtResult omt_inline(const OmtProblem& p, Strategy strategy, const OmtOptions& options)
{
    return run_inline(p, strategy, options);
}

OmtResult omt_dtc(const OmtProblem& p, Strategy strategy, const OmtOptions& options)
{
    return options.algorithm == Algorithm::Offline ? run_offline(p, strategy, options)
                                                   : run_inline(p, strategy, options);
}

OmtResult solve(const OmtProblem& p, const OmtOptions& options)
{
    if (!ast::is_pure(p.ctx, p.formula) || [&] {
            for (AtomId a : ast::atoms_of(p.ctx, p.formula))
                if (p.ctx.atom(a).kind == ast::AtomKind::Equality)
                    return true;
            return false;
        }())
        return omt_dtc(p, options.strategy, options);
    return options.algorithm == Algorithm::Offline ? omt_offline(p, options.strategy, options)
                                                   : omt_inline(p, options.strategy, options);
}

AssignmentMinimum mincost_of_assignment(const ast::Context& ctx, TermId cost, const EdiAssignment& mu)
{
    TheoryStack theory(ctx, cost);
    for (const auto* lits : {&mu.euf, &mu.lra, &mu.strict})
        for (const AtomLiteral& l : *lits)
            theory.register_atom(l.atom);
    for (const auto* ies : {&mu.equal, &mu.distinct})
        for (const ast::InterfaceEquality& ie : *ies)
            theory.register_interface_equality(ie);

    AssignmentMinimum out;
    auto assert_all = [&](const std::vector<AtomLiteral>& lits) {
        for (const AtomLiteral& l : lits)
            if (theory.assert_literal(l))
                return false;
        return true;
    };
    std::vector<AtomLiteral> equalities;
    for (const auto& ie : mu.equal)
        equalities.push_back({ie.eq, true});
    for (const auto& ie : mu.distinct)
        equalities.push_back({ie.eq, false});
    if (!assert_all(mu.euf) || !assert_all(equalities) || !assert_all(mu.strict) || !assert_all(mu.lra))
        return out;
    if (theory.check())
        return out;
    lra::Minimum m = theory.minimize();
    std::map<TermId, bool> booleans;
    for (const AtomLiteral& l : mu.boolean)
        booleans[ctx.atom(l.atom).var] = l.positive;
    out.model = theory.model(booleans);
    if (m.kind == lra::Minimum::Kind::Unbounded) {
        out.kind = AssignmentMinimum::Kind::Unbounded;
    } else {
        out.kind = AssignmentMinimum::Kind::Bounded;
        out.value = m.value;
    }
    return out;
}

namespace {

bool satisfiable(ast::Context& ctx, TermId cost, ast::Formula f)
{
    SmtEngine engine(ctx, cost);
    engine.assert_formula(f);
    sat::Result r = engine.check();
    if (r != sat::Result::Sat && r != sat::Result::Unsat)
        throw std::logic_error("certification check did not finish");
    return r == sat::Result::Sat;
}

} // namespace

CertificateReport certify(const OmtProblem& p, const OmtResult& r)
{
    if (r.status != OmtResult::Status::Optimum)
        throw UsageError(std::string("certify needs an optimum, got ") + status_name(r.status));
    ast::Context ctx = p.ctx;
    ast::Formula phi = bounded_formula(ctx, p);
    const Rational& m = r.value.real;
    LinearExpr cost = LinearExpr::of_term(p.cost);
    LinearExpr at = LinearExpr::of_constant(m);
    std::string name = ctx.name_of(p.cost);
    CertificateReport report;

    Relation below = r.strict() ? Relation::Le : Relation::Lt;
    report.below_check = "(" + std::string(ast::relation_symbol(below)) + " " + name + " " + ast::smt_number(m) + ")";
    report.below_unsat = !satisfiable(ctx, p.cost, ctx.mk_and(phi, ctx.mk_arith(cost, below, at)));

    if (!r.strict()) {
        report.at_check = "(= " + name + " " + ast::smt_number(m) + ")";
        report.at_sat = satisfiable(ctx, p.cost, ctx.mk_and(phi, ctx.mk_arith(cost, Relation::Eq, at)));
        return report;
    }

    // Half the distance from m to the nearest other constant, capped at 10^-6.
    Rational eps(1, 1000000);
    for (AtomId a : ast::atoms_of(ctx, phi)) {
        const ast::Atom& atom = ctx.atom(a);
        if (atom.kind != ast::AtomKind::Arith)
            continue;
        Rational gap = (atom.rhs - m).abs();
        if (gap.sign() > 0 && gap / Rational(2) < eps)
            eps = gap / Rational(2);
    }
    for (int attempt = 0; attempt < 40; ++attempt, eps = eps / Rational(2)) {
        LinearExpr point = LinearExpr::of_constant(m + eps);
        if (satisfiable(ctx, p.cost, ctx.mk_and(phi, ctx.mk_arith(cost, Relation::Eq, point)))) {
            report.at_sat = true;
            report.epsilon = eps;
            report.at_check = "(= " + name + " " + ast::smt_number(m + eps) + ")";
            return report;
        }
    }
    report.at_check = "(= " + name + " (+ " + ast::smt_number(m) + " eps))";
    return report;
}

} // namespace omt
