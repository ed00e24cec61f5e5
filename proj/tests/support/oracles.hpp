#pragma once

// Reference implementations used only by tests. They share nothing with the
// solver beyond the AST and exact rationals: linear programs are solved by
// Fourier-Motzkin elimination or vertex enumeration, equality reasoning by
// naive fixpoint congruence or by enumerating partitions.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "omt/arith.hpp"
#include "omt/ast.hpp"
#include "omt/omt.hpp"

namespace omt::oracle {

/// a . x <= b (or < b when strict).
struct Ineq {
    std::vector<Rational> a;
    bool strict = false;
    Rational b;
};

/// Adds `sum a_i x_i rel b` as one or two inequalities.
void add_constraint(std::vector<Ineq>& out, const std::vector<Rational>& a, ast::Relation rel, const Rational& b);

struct LpValue {
    enum class Kind { Unbounded, Bounded, Infeasible };
    Kind kind = Kind::Infeasible;
    Rational value;
    bool strict = false;

    static LpValue infeasible() { return {}; }
    static LpValue unbounded() { return {Kind::Unbounded, Rational(), false}; }
    static LpValue bounded(Rational v, bool strict) { return {Kind::Bounded, std::move(v), strict}; }
    std::string str() const;
};

/// Total order: unbounded < bounded (by value, non-strict first) < infeasible.
bool better(const LpValue& a, const LpValue& b);
LpValue min_of(const LpValue& a, const LpValue& b);
/// Same kind and value; for bounded values also the same strictness.
bool matches(const LpValue& oracle, const Extended& solver);
bool matches(const LpValue& oracle, const OmtResult& result);

bool fm_feasible(std::vector<Ineq> system, std::size_t num_vars);
/// Infimum of x_target by projecting every other variable away.
LpValue fm_minimize(std::vector<Ineq> system, std::size_t num_vars, std::size_t target);

/// min c.x over non-strict constraints whose feasible region is bounded,
/// by evaluating every basic feasible point.
LpValue vertex_minimize(const std::vector<Ineq>& system, std::size_t num_vars, const std::vector<Rational>& c);

/// Truth of a formula under a truth assignment to its atoms.
bool evaluate(const ast::Context& ctx, ast::Formula f, const std::map<AtomId, bool>& truth);

/// Equality-logic consistency of (dis)equalities over uninterpreted terms.
struct EqualityProblem {
    std::vector<std::pair<TermId, TermId>> equal;
    std::vector<std::pair<TermId, TermId>> distinct;
};
/// Naive congruence: repeat merging applications with equal arguments.
bool euf_consistent_closure(const ast::Context& ctx, const EqualityProblem& p);
/// Ackermann reduction followed by exhaustive search over set partitions
/// of the terms.
bool euf_consistent_partitions(const ast::Context& ctx, const EqualityProblem& p);

/// mincost(phi & bounds) for LRA + propositional problems: every total
/// assignment to the atoms, pruned by LP feasibility, minimized by
/// Fourier-Motzkin; negated equalities split into two strict cases.
LpValue brute_force_omt(const OmtProblem& p);

/// mincost for pure LRA + EUF problems: every total assignment to the
/// atoms and every arrangement {=, <, >} of each pair of interface
/// variables, checked by naive congruence and Fourier-Motzkin.
LpValue brute_force_dtc(const OmtProblem& p);

/// Reference dispatch for one assignment: +inf if the equality part with
/// the interface (dis)equalities is inconsistent, else the LP minimum of the
/// arithmetic part with the interface equalities and strict inequalities.
LpValue dispatch_minimum(const ast::Context& ctx, TermId cost, const EdiAssignment& mu);

/// Satisfiability of a CNF over variables 1..n by enumeration.
bool cnf_satisfiable(std::size_t num_vars, const std::vector<std::vector<int>>& clauses);

} // namespace omt::oracle

namespace omt::oracle {

/// Minimum strip length for rectangles with integer sides in a strip of
/// integer height: depth-first placement at normal-pattern coordinates
/// (sums of other rectangles' sides), which contain an optimal packing.
Rational strip_packing_optimum(const std::vector<std::pair<int, int>>& rects, int height);

/// Minimum zero-wait makespan: every orientation of every pairwise
/// stage conflict, each solved as difference constraints by longest paths.
Rational jobshop_optimum(const std::vector<std::vector<int>>& durations);

/// min sum(w_i [x_i]) over total assignments satisfying a propositional
/// constraint; nullopt when the constraint is unsatisfiable.
std::optional<Rational> pb_optimum(const ast::Context& ctx, ast::Formula constraint,
                                   const std::vector<std::pair<TermId, Rational>>& terms);

/// Minimum total weight of falsified soft formulas over assignments
/// satisfying the hard ones (all propositional); nullopt when the hard part
/// is unsatisfiable.
std::optional<Rational> maxsmt_optimum(const ast::Context& ctx, const std::vector<ast::Formula>& hard,
                                       const std::vector<std::pair<ast::Formula, Rational>>& soft);

} // namespace omt::oracle
