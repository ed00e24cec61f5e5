#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omt/omt.hpp"

namespace omt::enc {

/// sum(coef * var) <= rhs over named continuous variables.
struct LinearRow {
    std::vector<std::pair<std::string, Rational>> coeffs;
    Rational rhs;
};

struct LgdpVar {
    std::string name;
    Rational ub;  // the variable ranges over [0, ub]
};

struct Disjunct {
    std::string label;  // name of the Boolean selecting this disjunct
    std::vector<LinearRow> rows;
    Rational charge;
};

struct Disjunction {
    std::string z;  // cost variable receiving the charge of the chosen disjunct
    std::vector<Disjunct> disjuncts;
};

/// Linear generalized disjunctive program: minimize sum(z_k) + d.x subject
/// to the common rows, one disjunct per disjunction and the propositional
/// clauses. Clause literals are labels, negated with a leading '-'.
struct LgdpModel {
    std::vector<std::string> header;  // provenance lines (generator, parameters, seed)
    std::vector<LgdpVar> vars;
    std::map<std::string, Rational> d;
    std::vector<LinearRow> common;
    std::vector<Disjunction> disjunctions;
    std::vector<std::vector<std::string>> prop_cnf;
};

/// Exactly-one clauses over the labels of a disjunction: one at-least-one
/// clause and pairwise at-most-one clauses.
std::vector<std::vector<std::string>> xor_clauses(const Disjunction& k);

/// Throws ValidationError naming every offending disjunction/disjunct.
void validate(const LgdpModel& m);

struct LgdpEncoding {
    OmtProblem problem;
    std::map<std::string, TermId> vars;
    /// Per disjunction, (label, Boolean variable) in disjunct order.
    std::vector<std::vector<std::pair<std::string, TermId>>> labels;
};

struct LgdpSolution {
    std::map<std::string, Rational> x;
    std::vector<std::string> chosen;  // label of the selected disjunct per disjunction
};

LgdpEncoding encode_lgdp(const LgdpModel& m);
LgdpSolution decode_lgdp(const LgdpEncoding& e, const ast::Model& model);

LgdpModel parse_lgdp_json(std::string_view text);
std::string to_lgdp_json(const LgdpModel& m);

struct Rect {
    Rational w;
    Rational h;
};

/// Strip packing: place the rectangles without overlap in a strip of the
/// given height, minimizing the strip length.
LgdpModel strip_packing_model(const std::vector<Rect>& rects, const Rational& height);
/// Random rectangles, deterministic in (n, height, seed).
LgdpModel gen_strip_packing(int n, const Rational& height, std::uint64_t seed);

/// Zero-wait job shop: durations[i][m] is the processing time of job i on
/// stage m (0 = the job skips the stage); stages are visited in order and
/// each job runs without waiting between stages. Minimizes the makespan.
LgdpModel jobshop_model(const std::vector<std::vector<Rational>>& durations);
LgdpModel gen_jobshop(int jobs, int stages, std::uint64_t seed);
/// Durations used by gen_jobshop for the same arguments.
std::vector<std::vector<Rational>> jobshop_durations(int jobs, int stages, std::uint64_t seed);

/// Weighted sum of Boolean variables under a constraint formula.
struct PbObjective {
    ast::Context ctx;
    ast::Formula constraint;
    std::vector<std::pair<TermId, Rational>> terms;
};

struct MaxSmtInstance {
    ast::Context ctx;
    std::vector<ast::Formula> hard;
    std::vector<std::pair<ast::Formula, Rational>> soft;
};

struct PbEncoding {
    OmtProblem problem;
    std::vector<TermId> term_vars;  // rational variable carrying each term's contribution
};

PbEncoding encode_pb(const PbObjective& o);

struct MaxSmtEncoding {
    PbEncoding pb;
    std::vector<TermId> relax;  // relaxation proposition of each soft clause
};

MaxSmtEncoding encode_maxsmt(const MaxSmtInstance& m);
/// Indices of soft clauses that hold in the model.
std::vector<std::size_t> satisfied_soft(const MaxSmtInstance& m, const ast::Model& model);

/// The PB objective as MaxSMT: the constraint becomes hard and every term
/// a soft unit (not X) of the term's weight. Weights must be positive.
MaxSmtInstance pb_to_maxsmt(const PbObjective& o);

} // namespace omt::enc
