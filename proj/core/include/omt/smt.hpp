#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "omt/ast.hpp"
#include "omt/euf.hpp"
#include "omt/lra.hpp"
#include "omt/sat.hpp"

namespace omt {

using ast::AtomId;
using ast::AtomLiteral;
using ast::TermId;

/// LRA and EUF solvers over the atoms of one Context. Interface equalities
/// go to both theories when positive and only to EUF when negative.
class TheoryStack {
public:
    struct Mark {
        lra::Mark lra;
        euf::Mark euf;
        std::uint64_t euf_assertions = 0;
    };
    struct Deduction {
        AtomLiteral literal;
        std::vector<AtomLiteral> explanation;
    };

    TheoryStack(const ast::Context& ctx, std::optional<TermId> cost);

    /// Makes the atom known to its theory (no-op for propositions).
    void register_atom(AtomId a);
    void register_interface_equality(const ast::InterfaceEquality& ie);
    bool is_theory_atom(AtomId a) const;
    bool is_interface_equality(AtomId a) const { return interface_.count(a) != 0; }
    /// True while no equality assertion has been made since the last reset,
    /// so new uninterpreted terms may still be added.
    bool euf_pristine() const { return euf_assertions_ == 0; }

    /// Returns a conflict as a set of asserted (true) literals.
    std::optional<std::vector<AtomLiteral>> assert_literal(AtomLiteral l);
    std::optional<std::vector<AtomLiteral>> check();
    /// Registered atoms entailed by the current assertions (bound
    /// subsumption in LRA, positive merges in EUF).
    std::vector<Deduction> deduce(const std::function<bool(AtomId)>& unassigned);

    Mark mark();
    void backtrack(Mark m);
    /// Drops every assertion.
    void reset();

    /// Minimizes the cost variable under the asserted literals; requires a
    /// satisfiable check().
    lra::Minimum minimize();

    /// Concrete model of the asserted literals. Propositions take the
    /// supplied truth values (missing ones read false).
    ast::Model model(const std::map<TermId, bool>& booleans) const;

    const lra::Solver& arithmetic() const { return lra_; }
    std::optional<lra::VarId> lra_var(TermId t) const;
    std::uint64_t pivots() const { return lra_.stats().pivots; }

private:
    lra::VarId arith_var(TermId t);
    euf::NodeId node(TermId t);
    AtomLiteral to_atom_literal(const lra::Literal& l) const;
    static euf::Tag tag_of(AtomLiteral l) { return l.atom * 2 + (l.positive ? 0 : 1); }
    static AtomLiteral literal_of(euf::Tag t) { return {t / 2, (t & 1u) == 0}; }

    const ast::Context& ctx_;
    std::optional<TermId> cost_;
    lra::Solver lra_;
    euf::EGraph egraph_;
    std::map<TermId, lra::VarId> lra_vars_;
    std::map<TermId, euf::NodeId> nodes_;
    std::map<AtomId, lra::AtomIndex> lra_atoms_;
    std::vector<AtomId> lra_atom_owner_;
    std::map<AtomId, ast::InterfaceEquality> interface_;
    std::vector<AtomId> euf_atoms_;
    std::optional<Mark> base_;
    std::uint64_t euf_assertions_ = 0;
    bool lra_dirty_ = true;
};

struct SmtConfig {
    bool partial_models = true;
    bool pure_literal_filtering = true;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SmtStats {
    std::uint64_t checks = 0;
    std::uint64_t theory_checks = 0;
    std::uint64_t resyncs = 0;
};

/// Lazy SMT solver for LRA + EUF: CDCL over the Boolean abstraction with
/// theory checks at every propagation fixpoint (early pruning), bound
/// propagation, pure-literal filtering, splitting of negated equalities and
/// delayed theory combination through interface equalities.
class SmtEngine : private sat::TheoryListener {
public:
    using FinalHook = std::function<sat::FinalVerdict(SmtEngine&)>;

    SmtEngine(ast::Context& ctx, std::optional<TermId> cost, SmtConfig config = {});
    SmtEngine(const SmtEngine&) = delete;
    SmtEngine& operator=(const SmtEngine&) = delete;

    /// Conjoins a formula. Impure formulas are purified; new interface
    /// variables get their interface equalities.
    void assert_formula(ast::Formula f);
    /// Adds a clause over atoms of the context. Lemmas are permanent.
    void add_clause(const ast::Clause& clause, sat::ClauseKind kind = sat::ClauseKind::Original);

    sat::Lit literal(AtomLiteral l);
    /// Never branch on the atom again and drop learned clauses over it.
    void retire(AtomId a);

    sat::Result check(const std::vector<AtomLiteral>& assumptions = {});
    /// Assumptions in the unsatisfiable core of the last Unsat answer.
    std::vector<AtomLiteral> core() const;

    /// Installed hook runs on every theory-consistent (partial) model.
    void set_final_hook(FinalHook hook) { hook_ = std::move(hook); }

    /// Valid inside the final hook or after Sat/Interrupted.
    ast::Model model() const;
    lra::Minimum minimize();

    struct Assignment {
        std::vector<AtomLiteral> boolean;
        std::vector<AtomLiteral> lra;
        std::vector<AtomLiteral> euf;
        std::vector<ast::InterfaceEquality> equal;
        std::vector<ast::InterfaceEquality> distinct;
        std::vector<AtomLiteral> strict;
    };
    /// Theory-relevant part of the current assignment after pure-literal
    /// filtering, partitioned as for delayed theory combination.
    Assignment assignment() const;

    const std::vector<TermId>& interface_vars() const { return interface_vars_; }
    const std::vector<ast::InterfaceEquality>& interface_equalities() const { return interface_eqs_; }
    const sat::SolverStats& sat_stats() const { return sat_.stats(); }
    const SmtStats& stats() const { return stats_; }
    const TheoryStack& theory() const { return theory_; }
    ast::Context& context() { return ctx_; }

private:
    enum Role : std::uint8_t { kPlain = 0, kCostAtom = 1, kInterface = 2, kSplit = 4 };

    // TheoryListener
    Check propagate(sat::Solver& solver) override;
    sat::FinalVerdict final_check(sat::Solver& solver) override;
    void backtrack(int level) override;
    void explain(sat::Lit lit, std::uint64_t explanation, std::vector<sat::Lit>& antecedents) override;

    sat::Var var_of(AtomId a);
    void add_sat_clause(const ast::Clause& clause, sat::ClauseKind kind, std::uint32_t frame);
    void count_polarity(AtomLiteral l);
    void ensure_split(AtomId eq);
    void add_interface_vars(const std::vector<TermId>& vars);
    bool filtered(AtomLiteral l) const;
    AtomLiteral atom_literal(sat::Lit l) const;
    std::vector<sat::Lit> to_clause(const std::vector<AtomLiteral>& true_lits) const;
    void resync();

    ast::Context& ctx_;
    std::optional<TermId> cost_;
    SmtConfig config_;
    sat::Solver sat_;
    TheoryStack theory_;
    std::vector<std::optional<sat::Var>> var_of_atom_;
    std::vector<AtomId> atom_of_var_;
    std::vector<std::uint8_t> role_;
    std::vector<std::uint32_t> positive_uses_;
    std::vector<std::uint32_t> negative_uses_;
    std::vector<TermId> interface_vars_;
    std::vector<ast::InterfaceEquality> interface_eqs_;
    std::map<AtomId, std::size_t> interface_index_;
    std::map<AtomId, std::size_t> strict_index_;
    std::set<TermId> arith_vars_seen_;
    std::set<TermId> euf_vars_seen_;
    std::vector<TheoryStack::Mark> level_marks_;
    std::size_t processed_ = 0;
    bool needs_resync_ = false;
    bool in_search_ = false;
    std::vector<std::vector<sat::Lit>> explanations_;
    std::vector<int> explanation_levels_;
    std::vector<sat::Lit> assumption_lits_;
    FinalHook hook_;
    SmtStats stats_;
};

} // namespace omt
