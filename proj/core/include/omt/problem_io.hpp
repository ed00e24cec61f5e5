#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omt/encoders.hpp"
#include "omt/omt.hpp"

namespace omt::io {

struct Declaration {
    enum class Kind : std::uint8_t { Sort, Var, Fun };
    Kind kind = Kind::Var;
    std::string name;
};

/// A parsed problem file. Besides the objective directives the parser
/// accepts the extra commands of description files: (pb-term X w) and
/// (assert-soft phi :weight w).
struct ProblemFile {
    ast::Context ctx;
    std::vector<std::string> comments;  // leading "; " lines, kept verbatim
    std::vector<Declaration> declarations;
    std::vector<ast::Formula> assertions;
    std::optional<TermId> objective;
    bool maximize = false;
    std::optional<Rational> lower_bound;
    std::optional<Rational> upper_bound;
    std::vector<std::pair<TermId, Rational>> pb_terms;
    std::vector<std::pair<ast::Formula, Rational>> soft;
};

enum class Dialect : std::uint8_t {
    Problem,         // exactly one objective, no description commands
    PbDescription,   // pb-term entries, no objective
    MaxSmtDescription  // assert-soft entries, no objective
};

/// Throws ParseError with line and column.
ProblemFile parse_problem(std::string_view text, Dialect dialect = Dialect::Problem);
/// Reparses to a structurally identical problem.
std::string print_problem(const ProblemFile& p);

/// Problem file for an in-memory problem: declares every variable of the
/// formula and every function of the context, minimizes p.cost.
ProblemFile problem_file_of(const OmtProblem& p, std::vector<std::string> comments = {});

/// The minimization problem a file denotes. (maximize x) becomes
/// minimization of a fresh variable c with c + x = 0; the bounds always
/// refer to the minimized variable.
OmtProblem to_omt_problem(const ProblemFile& f);

enc::PbObjective pb_objective_of(const ProblemFile& f);
enc::MaxSmtInstance maxsmt_of(const ProblemFile& f);

struct RunReport {
    std::string status;  // optimal | unsat | unbounded | unknown
    std::string objective;  // p/q, +oo, -oo or none
    bool strict = false;
    bool maximize = false;
    std::string objective_variable;
    std::string algorithm;
    std::string search;
    std::optional<Rational> lower_bound;
    std::optional<Rational> upper_bound;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> model;
    std::optional<OmtStats> stats;
};

const char* report_status(OmtResult::Status s);

RunReport make_report(const ProblemFile& f, const OmtProblem& p, const OmtResult& r, const OmtOptions& options,
                      std::uint64_t seed, bool with_stats);
/// One "key: value" per line in a fixed key order.
std::string format_report(const RunReport& r);
/// Throws ParseError on malformed lines or missing keys.
RunReport parse_report(std::string_view text);

/// The internal result an optimal report denotes, for certification of
/// to_omt_problem(f).
OmtResult result_of_report(const RunReport& r);

/// Lowest-terms p/q spelling used for objectives and model values.
std::string exact(const Rational& r);

} // namespace omt::io
