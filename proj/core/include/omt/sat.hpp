#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace omt::sat {

using Var = std::uint32_t;

/// Literal: variable index times two, plus one when negated.
class Lit {
public:
    constexpr Lit() = default;
    static constexpr Lit make(Var v, bool negated = false) { return Lit(2 * v + (negated ? 1u : 0u)); }
    static constexpr Lit from_index(std::uint32_t x) { return Lit(x); }

    constexpr Var var() const noexcept { return x_ >> 1; }
    constexpr bool negated() const noexcept { return x_ & 1u; }
    constexpr std::uint32_t index() const noexcept { return x_; }
    constexpr Lit operator~() const { return Lit(x_ ^ 1u); }

    /// DIMACS spelling: v+1 or -(v+1).
    int to_dimacs() const { return negated() ? -static_cast<int>(var() + 1) : static_cast<int>(var() + 1); }
    static Lit from_dimacs(int d) { return make(static_cast<Var>((d < 0 ? -d : d) - 1), d < 0); }

    friend constexpr bool operator==(Lit, Lit) = default;
    friend constexpr auto operator<=>(Lit, Lit) = default;

private:
    constexpr explicit Lit(std::uint32_t x) : x_(x) {}
    std::uint32_t x_ = 0;
};

enum class LBool : std::uint8_t { False, True, Undef };

enum class Result : std::uint8_t { Sat, Unsat, Interrupted, Unknown };

enum class ClauseKind : std::uint8_t {
    Original,  // part of the problem, removed by pop()
    Lemma,     // permanent consequence (theory lemmas, bound units)
    Learned,   // may be deleted by the clause-database reduction
};

enum class FinalVerdict : std::uint8_t {
    Accept,     // the current assignment is a model
    Continue,   // clauses were added; resume the search
    Interrupt,  // stop solving and return Result::Interrupted
};

class Solver;

/// Theory callbacks. propagate() runs at every unit-propagation fixpoint
/// (before each decision); final_check() runs when the assignment is
/// complete or accepted as partial.
class TheoryListener {
public:
    struct Propagation {
        Lit lit;
        std::uint64_t explanation = 0;
    };
    struct Check {
        /// Clause whose literals are all false under the trail.
        std::optional<std::vector<Lit>> conflict;
        std::vector<Propagation> propagations;
    };

    virtual ~TheoryListener() = default;
    virtual Check propagate(Solver& solver) = 0;
    virtual FinalVerdict final_check(Solver& solver) = 0;
    /// The trail has been cut back to `level` (-1: cleared entirely).
    virtual void backtrack(int level) = 0;
    /// Literals (currently true) that entail `lit`.
    virtual void explain(Lit lit, std::uint64_t explanation, std::vector<Lit>& antecedents) = 0;
};

struct SolverStats {
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t restarts = 0;
    std::uint64_t learned = 0;
    std::uint64_t deleted = 0;
    std::uint64_t theory_propagations = 0;
    std::uint64_t theory_conflicts = 0;
};

/// Incremental CDCL solver: two watched literals, first-UIP learning,
/// VSIDS branching with phase saving, Luby restarts, LBD-based clause
/// deletion, push/pop frames and assumptions.
class Solver {
public:
    Solver();

    Var new_var(bool decidable = true);
    std::size_t num_vars() const noexcept { return assigns_.size(); }

    /// Adds a clause. Original clauses belong to the innermost frame.
    /// May be called during search (from a listener): the trail is cut
    /// back as needed so that watches stay valid, and a falsified clause
    /// becomes the next conflict.
    void add_clause(std::vector<Lit> lits, ClauseKind kind = ClauseKind::Original);
    /// Same, with an explicit frame (0 = valid in every frame).
    void add_clause(std::vector<Lit> lits, ClauseKind kind, std::uint32_t frame);

    void push();
    /// Removes the innermost frame's clauses and everything learned from them.
    void pop();
    std::size_t frame_depth() const noexcept { return frame_depth_; }

    Result solve(const std::vector<Lit>& assumptions = {});
    /// Subset of the assumptions that is unsatisfiable with the clauses.
    const std::vector<Lit>& core() const noexcept { return core_; }

    LBool value(Lit l) const;
    LBool value(Var v) const { return assigns_[v]; }
    /// Assignment at the last Sat/Interrupted answer (Undef for unassigned).
    const std::vector<LBool>& model() const noexcept { return model_; }

    int decision_level() const noexcept { return static_cast<int>(trail_lim_.size()); }
    int level(Var v) const { return levels_[v]; }
    const std::vector<Lit>& trail() const noexcept { return trail_; }
    std::size_t trail_size() const noexcept { return trail_.size(); }

    void set_listener(TheoryListener* listener) { listener_ = listener; }
    /// Accept a partial assignment once every original clause and lemma is
    /// satisfied and every required variable is assigned.
    void set_partial_models(bool on) { partial_models_ = on; }
    void set_required(Var v, bool required = true);
    /// The variable is never decided again; learned clauses over it are dropped.
    void retire_var(Var v);
    void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) { deadline_ = deadline; }

    // Low-level steps, exposed for tests.
    void decide(Lit l);
    /// Unit propagation (plus theory propagation) to a fixpoint. Returns
    /// the literals of a conflicting clause, if any.
    std::optional<std::vector<Lit>> propagate();
    /// First-UIP analysis of a conflict at level >= 1. Returns the learned
    /// clause (asserting literal first) and the backjump level.
    std::pair<std::vector<Lit>, int> analyze(const std::vector<Lit>& conflict);
    void backtrack(int level);

    const SolverStats& stats() const noexcept { return stats_; }
    /// Learned clauses currently stored (for tests).
    std::vector<std::vector<Lit>> learned_clauses() const;

private:
    static constexpr std::uint32_t kNoClause = UINT32_MAX;

    struct Clause {
        std::vector<Lit> lits;
        ClauseKind kind = ClauseKind::Original;
        std::uint32_t frame = 0;
        std::uint32_t lbd = 0;
        bool deleted = false;
    };
    struct Watcher {
        std::uint32_t cref;
        Lit blocker;
    };
    enum class ReasonKind : std::uint8_t { Decision, Clause, Theory };
    struct Reason {
        ReasonKind kind = ReasonKind::Decision;
        std::uint32_t cref = kNoClause;
        std::uint64_t explanation = 0;
    };
    struct Unit {
        Lit lit;
        ClauseKind kind;
        std::uint32_t frame;
    };
    struct Conflict {
        std::vector<Lit> lits;
        std::uint32_t frame = 0;
    };

    void enqueue(Lit l, Reason r);
    std::optional<std::uint32_t> bcp();
    std::optional<Conflict> propagate_all();
    std::optional<Conflict> handle_theory(TheoryListener::Check check);
    std::optional<Conflict> insert_clause(std::vector<Lit> lits, ClauseKind kind, std::uint32_t frame);
    void attach(std::uint32_t cref);
    std::vector<Lit> reason_lits(Var v);
    std::uint32_t reason_frame(Var v) const;
    std::pair<std::vector<Lit>, int> analyze_conflict(const Conflict& c, std::uint32_t& frame);
    void analyze_final(Lit p);
    void learn(std::vector<Lit> lits, int backjump, std::uint32_t frame);
    void clear_trail();
    void requeue_units();
    bool partial_model_ok() const;
    std::optional<Lit> pick_branch();
    void reduce_db();
    bool out_of_time() const;

    void bump(Var v);
    void heap_insert(Var v);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    Var heap_pop();
    bool heap_less(Var a, Var b) const;

    std::vector<Clause> clauses_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<Unit> units_;
    std::vector<std::uint32_t> empty_frames_;

    std::vector<LBool> assigns_;
    std::vector<int> levels_;
    std::vector<Reason> reasons_;
    std::vector<std::uint32_t> level0_frame_;
    std::vector<bool> phase_;
    std::vector<bool> decidable_;
    std::vector<bool> required_;
    std::vector<bool> seen_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    std::vector<Var> heap_;
    std::vector<std::int64_t> heap_pos_;

    std::optional<Conflict> pending_conflict_;
    bool trail_cleared_ = true;
    std::size_t frame_depth_ = 0;
    std::vector<Lit> core_;
    std::vector<LBool> model_;
    TheoryListener* listener_ = nullptr;
    bool partial_models_ = false;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::uint64_t conflicts_since_reduce_ = 0;
    SolverStats stats_;
};

/// Parsed DIMACS CNF: clauses over variables 1..num_vars.
struct Cnf {
    std::size_t num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

Cnf read_dimacs(std::istream& in);
/// Creates the variables and adds the clauses as original clauses.
void load(Solver& solver, const Cnf& cnf);

} // namespace omt::sat
