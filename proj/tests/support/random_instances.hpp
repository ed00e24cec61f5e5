#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "omt/omt.hpp"

namespace omt::testing {

using Rng = std::mt19937_64;

/// p/q with |p| <= max_num and 1 <= q <= max_den.
Rational random_rational(Rng& rng, int max_num = 10, int max_den = 10);

struct LraShape {
    int max_bools = 8;
    int max_vars = 4;       // including cost
    int max_arith = 12;
    int max_clauses = 10;
    double unbounded_bias = 0.1;  // chance of leaving cost without a lower bound atom
};

/// Random OMT problem over propositions and linear arithmetic; cost is one
/// of the rational variables.
OmtProblem random_lra_problem(Rng& rng, const LraShape& shape = {});

struct DtcShape {
    int max_bools = 2;
    int vars = 3;           // besides cost
    int max_arith = 6;
    int max_equalities = 4;
    int max_clauses = 6;
};

/// Random pure LRA + EUF problem: arithmetic atoms over variables, equality
/// atoms between applications of unary/binary functions over variables.
OmtProblem random_dtc_problem(Rng& rng, const DtcShape& shape = {});

/// Random CNF in DIMACS numbering.
std::vector<std::vector<int>> random_cnf(Rng& rng, int num_vars, int num_clauses, int max_width = 3);

/// Random formula built from the given atom formulas: a conjunction of
/// clauses, some rewritten as implications or equivalences.
ast::Formula random_formula(Rng& rng, ast::Context& ctx, const std::vector<ast::Formula>& atoms, int num_clauses);

} // namespace omt::testing
