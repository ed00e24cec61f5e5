#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omt/arith.hpp"
#include "omt/ast.hpp"
#include "omt/smt.hpp"

namespace omt {

/// Minimize `cost` subject to `formula`. The optional bounds restrict the
/// search to [lower_bound, upper_bound[.
struct OmtProblem {
    ast::Context ctx;
    ast::Formula formula;
    TermId cost = 0;
    std::optional<Rational> lower_bound;
    std::optional<Rational> upper_bound;
};

enum class Algorithm : std::uint8_t { Offline, Inline };
enum class Strategy : std::uint8_t { Linear, Binary, Adaptive };

const char* algorithm_name(Algorithm a);
const char* strategy_name(Strategy s);

struct OmtOptions {
    Algorithm algorithm = Algorithm::Inline;
    Strategy strategy = Strategy::Linear;
    /// Wall-clock limit in seconds; the result is Unknown when it expires.
    std::optional<double> timeout;
    bool pure_literal_filtering = true;
};

struct OmtStats {
    std::uint64_t smt_calls = 0;
    std::uint64_t minimize_calls = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t pivots = 0;
    std::uint64_t binary_steps = 0;
    double elapsed_seconds = 0.0;
};

/// Current range [lb, ub[ of the search plus the best model found.
/// An absent bound is infinite.
struct BoundState {
    std::optional<DeltaRational> lb;
    std::optional<DeltaRational> ub;
    std::optional<ast::Model> witness;
};

struct SearchHistory {
    int slow_steps = 0;
    bool binary_mode = false;
    bool force_linear = false;
};

/// Rational pivot for a binary step, or nullopt for a linear step.
std::optional<Rational> pick_pivot(const BoundState& bounds, Strategy strategy, SearchHistory& history);

/// Updates the adaptive switch after a model improved ub_prev to ub_new.
void record_progress(const BoundState& before, const DeltaRational& ub_new, SearchHistory& history);

struct OmtResult {
    enum class Status : std::uint8_t { Optimum, Unsat, Unbounded, Unknown };
    Status status = Status::Unknown;
    DeltaRational value;
    std::optional<ast::Model> model;
    OmtStats stats;
    /// The cost variable is shared between arithmetic and equality atoms.
    bool cost_is_interface = false;

    bool strict() const { return status == Status::Optimum && value.delta.sign() > 0; }
    /// +inf for Unsat, -inf for Unbounded, the value otherwise.
    Extended mincost() const;
};

const char* status_name(OmtResult::Status s);

OmtResult omt_offline(const OmtProblem& p, Strategy strategy, const OmtOptions& options = {});
OmtResult omt_inline(const OmtProblem& p, Strategy strategy, const OmtOptions& options = {});
/// Optimization modulo LRA plus uninterpreted functions; the formula is
/// purified and interface equalities become decision atoms.
OmtResult omt_dtc(const OmtProblem& p, Strategy strategy, const OmtOptions& options = {});
/// Dispatches on options.algorithm; Offline with Adaptive is a UsageError.
OmtResult solve(const OmtProblem& p, const OmtOptions& options);

/// Assignment split by theory, as produced by the delayed-combination search.
struct EdiAssignment {
    std::vector<AtomLiteral> boolean;
    std::vector<AtomLiteral> lra;
    std::vector<AtomLiteral> euf;
    std::vector<ast::InterfaceEquality> equal;
    std::vector<ast::InterfaceEquality> distinct;
    std::vector<AtomLiteral> strict;
};

struct AssignmentMinimum {
    enum class Kind : std::uint8_t { Inconsistent, Unbounded, Bounded };
    Kind kind = Kind::Inconsistent;
    DeltaRational value;
    std::optional<ast::Model> model;

    Extended extended() const;
};

/// Minimum of cost over an assignment: +inf when the EUF part with the
/// interface (dis)equalities or the LRA part with the equalities and
/// strict inequalities is inconsistent, otherwise the LRA minimum.
AssignmentMinimum mincost_of_assignment(const ast::Context& ctx, TermId cost, const EdiAssignment& mu);

struct CertificateReport {
    bool below_unsat = false;
    bool at_sat = false;
    std::string below_check;  // formula description of the first check
    std::string at_check;
    std::optional<Rational> epsilon;  // strict optimum: offset that landed inside

    bool passed() const { return below_unsat && at_sat; }
};

/// Independent re-check of an Optimum with fresh solvers:
/// non-strict m: phi & cost < m unsat and phi & cost = m sat;
/// strict m:     phi & cost <= m unsat and phi & cost = m + eps sat.
CertificateReport certify(const OmtProblem& p, const OmtResult& r);

/// phi conjoined with the user bounds on cost.
ast::Formula bounded_formula(ast::Context& ctx, const OmtProblem& p);

} // namespace omt
