#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "omt/arith.hpp"
#include "omt/ast.hpp"

namespace omt::lra {

using VarId = std::uint32_t;
using AtomIndex = std::uint32_t;
using ast::Relation;

/// An asserted (or assertable) atom with its polarity.
struct Literal {
    AtomIndex atom = 0;
    bool positive = true;

    Literal operator~() const { return {atom, !positive}; }
    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// One bound used in a Farkas combination: lambda * (var - bound) <= 0 for
/// an upper bound, lambda * (bound - var) <= 0 for a lower bound.
struct FarkasEntry {
    Literal literal;
    VarId var = 0;
    bool upper = false;
    DeltaRational bound;
    Rational lambda;
};

struct Conflict {
    std::vector<Literal> literals;
    std::vector<FarkasEntry> farkas;
};

struct Deduction {
    Literal literal;
    std::vector<Literal> explanation;
};

struct Minimum {
    enum class Kind : std::uint8_t { Bounded, Unbounded };
    Kind kind = Kind::Bounded;
    DeltaRational value;
    /// Bounds whose combination proves cost >= value (empty when unbounded).
    std::vector<FarkasEntry> certificate;
};

struct Mark {
    std::uint64_t id = 0;
};

struct LraStats {
    std::uint64_t pivots = 0;
    std::uint64_t checks = 0;
    std::uint64_t minimizations = 0;
};

/// Incremental, backtrackable simplex over delta-rationals. Each distinct
/// multi-variable linear form gets one slack variable; atoms become bounds
/// on a single (original or slack) variable.
class Solver {
public:
    VarId new_var();
    std::size_t num_vars() const noexcept { return values_.size(); }
    std::size_t num_original_vars() const noexcept { return original_count_; }

    /// Registers `sum(coef * var) rel rhs`. The form must be non-empty.
    AtomIndex register_atom(const std::vector<std::pair<VarId, Rational>>& lhs, Relation rel, const Rational& rhs);
    std::size_t num_atoms() const noexcept { return atoms_.size(); }
    /// Variable bounded by the atom (a slack variable for multi-variable forms).
    VarId atom_var(AtomIndex a) const { return atoms_.at(a).var; }
    /// Linear form of a variable over original variables.
    std::vector<std::pair<VarId, Rational>> definition(VarId v) const;

    /// Asserts a literal. Negated equalities are rejected with UsageError.
    std::optional<Conflict> assert_literal(Literal l);
    bool is_asserted(AtomIndex a) const { return atoms_.at(a).asserted; }

    std::optional<Conflict> check();
    /// Bound-subsumption consequences of the bounds asserted since the
    /// previous call, over registered atoms not yet asserted.
    std::vector<Deduction> deduce();

    Mark mark();
    void backtrack(Mark m);

    /// Requires the last check() to have returned sat.
    Minimum minimize(VarId cost);

    const DeltaRational& value(VarId v) const { return values_.at(v); }
    /// A rational valuation satisfying every asserted bound.
    std::vector<Rational> concrete_model() const;

    std::optional<DeltaRational> lower(VarId v) const;
    std::optional<DeltaRational> upper(VarId v) const;

    const LraStats& stats() const noexcept { return stats_; }

    /// Debug aid: every row equation holds under the current valuation.
    bool rows_consistent() const;

private:
    struct Bound {
        DeltaRational value;
        Literal reason;
    };
    struct AtomData {
        VarId var = 0;
        Relation rel = Relation::Eq;
        Rational rhs;
        bool asserted = false;
    };
    struct BoundUndo {
        VarId var;
        bool upper;
        std::optional<Bound> old;
    };
    using Row = std::map<VarId, Rational>;

    bool is_basic(VarId v) const { return rows_.count(v) != 0; }
    std::optional<Conflict> set_bound(VarId v, bool upper, const DeltaRational& value, Literal reason);
    void update_nonbasic(VarId v, const DeltaRational& value);
    void pivot(VarId basic, VarId entering);
    void pivot_and_update(VarId basic, VarId entering, const DeltaRational& value);
    void add_to_column(VarId nonbasic, VarId basic);
    void remove_from_column(VarId nonbasic, VarId basic);
    FarkasEntry entry_for(VarId v, bool upper, const Rational& lambda) const;

    std::vector<DeltaRational> values_;
    std::vector<std::optional<Bound>> lower_;
    std::vector<std::optional<Bound>> upper_;
    std::vector<bool> is_slack_;
    std::map<VarId, Row> rows_;
    std::vector<std::set<VarId>> columns_;
    std::map<std::vector<std::pair<VarId, Rational>>, VarId> slack_of_form_;
    std::map<VarId, std::vector<std::pair<VarId, Rational>>> slack_form_;
    std::size_t original_count_ = 0;

    std::vector<AtomData> atoms_;
    std::vector<std::vector<AtomIndex>> atoms_of_var_;
    std::vector<BoundUndo> bound_trail_;
    std::vector<AtomIndex> asserted_trail_;
    std::vector<std::pair<std::uint64_t, std::pair<std::size_t, std::size_t>>> marks_;
    std::uint64_t next_mark_ = 1;
    std::set<VarId> dirty_;
    bool last_check_sat_ = false;
    LraStats stats_;
};

/// Verifies a Farkas certificate: the weighted bounds sum to a constraint
/// 0 <= c over the original variables. Returns c (negative means the bounds
/// are contradictory) or nullopt when the variable parts do not cancel.
/// `extra` is an additional constraint sum(coef*var) <= rhs, weight 1.
std::optional<DeltaRational> farkas_residual(const Solver& solver, const std::vector<FarkasEntry>& entries,
                                             const std::vector<std::pair<VarId, Rational>>& extra_lhs = {},
                                             const DeltaRational& extra_rhs = DeltaRational());

} // namespace omt::lra
