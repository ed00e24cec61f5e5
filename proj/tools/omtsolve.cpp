// omtsolve: solve, certify, generate and benchmark OMT problem files.
//
// Exit codes: 0 answer (including unsat/unbounded) or check passed,
// 1 parse/validation error or failed certificate, 2 usage error,
// 3 unknown result (timeout).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "omt/bench.hpp"
#include "omt/encoders.hpp"
#include "omt/errors.hpp"
#include "omt/problem_io.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnknown = 3;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw omt::UsageError("cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw omt::UsageError("cannot write " + path);
    out << text;
}

std::optional<omt::Rational> rational_flag(const std::string& text, const char* flag)
{
    if (text.empty())
        return std::nullopt;
    try {
        return omt::Rational::parse(text);
    } catch (const std::exception&) {
        throw omt::UsageError(std::string(flag) + " expects a rational p/q, got '" + text + "'");
    }
}

struct SolveArgs {
    std::string file;
    std::string algorithm = "inline";
    std::string search = "lin";
    std::string lower;
    std::string upper;
    double timeout = 0;
    std::uint64_t seed = 0;
    bool stats = false;
    bool no_filter = false;
};

int cmd_solve(const SolveArgs& a)
{
    omt::io::ProblemFile f = omt::io::parse_problem(read_file(a.file));
    if (auto lb = rational_flag(a.lower, "--lower-bound"))
        f.lower_bound = lb;
    if (auto ub = rational_flag(a.upper, "--upper-bound"))
        f.upper_bound = ub;
    omt::OmtProblem p = omt::io::to_omt_problem(f);
    omt::OmtOptions o;
    o.algorithm = a.algorithm == "offline" ? omt::Algorithm::Offline : omt::Algorithm::Inline;
    o.strategy = a.search == "bin"   ? omt::Strategy::Binary
                 : a.search == "ada" ? omt::Strategy::Adaptive
                                     : omt::Strategy::Linear;
    if (a.timeout > 0)
        o.timeout = a.timeout;
    o.pure_literal_filtering = !a.no_filter;
    omt::OmtResult r = omt::solve(p, o);
    std::cout << omt::io::format_report(omt::io::make_report(f, p, r, o, a.seed, a.stats));
    return r.status == omt::OmtResult::Status::Unknown ? kExitUnknown : 0;
}

int cmd_certify(const std::string& file, const std::string& report_file)
{
    omt::io::ProblemFile f = omt::io::parse_problem(read_file(file));
    omt::io::RunReport report = omt::io::parse_report(read_file(report_file));
    if (report.maximize != f.maximize)
        throw omt::UsageError("report and problem disagree on the objective sense");
    f.lower_bound = report.lower_bound;
    f.upper_bound = report.upper_bound;
    omt::OmtProblem p = omt::io::to_omt_problem(f);
    omt::CertificateReport c = omt::certify(p, omt::io::result_of_report(report));
    std::cout << "below-check: " << c.below_check << " " << (c.below_unsat ? "unsat (pass)" : "sat (FAIL)") << "\n";
    std::cout << "at-check: " << c.at_check << " " << (c.at_sat ? "sat (pass)" : "unsat (FAIL)") << "\n";
    if (c.epsilon)
        std::cout << "epsilon: " << omt::io::exact(*c.epsilon) << "\n";
    std::cout << "certificate: " << (c.passed() ? "pass" : "fail") << "\n";
    return c.passed() ? 0 : kExitFailure;
}

std::string render(const omt::enc::LgdpModel& m, const std::string& format)
{
    if (format == "lgdp")
        return omt::enc::to_lgdp_json(m);
    omt::enc::LgdpEncoding e = omt::enc::encode_lgdp(m);
    return omt::io::print_problem(omt::io::problem_file_of(e.problem, m.header));
}

int cmd_bench(const std::string& dir, double timeout, unsigned jobs, const std::vector<std::string>& configs)
{
    omt::bench::BenchOptions o;
    o.timeout = timeout;
    o.jobs = jobs;
    if (!configs.empty()) {
        o.configs.clear();
        for (const std::string& c : configs)
            o.configs.push_back(omt::bench::parse_config(c));
    }
    omt::bench::BenchReport report = omt::bench::run_bench(omt::bench::problem_files(dir), o);
    std::cout << omt::bench::format_table(report);
    for (const auto& row : report.rows)
        if (!row.error.empty())
            std::cerr << "error: " << row.file << " (" << row.config << "): " << row.error << "\n";
    for (const std::string& d : report.disagreements)
        std::cout << "disagreement: " << d << "\n";
    std::cout << "agreement: " << (report.agreed() ? "pass" : "FAIL") << "\n";
    return report.agreed() ? 0 : kExitFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Optimization modulo linear arithmetic (and uninterpreted functions)"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Minimize or maximize the objective of a problem file");
    s->add_option("file", solve.file, "Problem file")->required();
    s->add_option("--algorithm", solve.algorithm, "offline or inline")
        ->check(CLI::IsMember({"offline", "inline"}));
    s->add_option("--search", solve.search, "lin, bin or ada")->check(CLI::IsMember({"lin", "bin", "ada"}));
    s->add_option("--lower-bound", solve.lower, "Known lower bound p/q on the minimized cost");
    s->add_option("--upper-bound", solve.upper, "Exclusive upper bound p/q on the minimized cost");
    s->add_option("--timeout", solve.timeout, "Wall-clock limit in seconds (0 = none)");
    s->add_option("--seed", solve.seed, "Seed echoed in the report; the search is deterministic");
    s->add_flag("--stats", solve.stats, "Append search statistics");
    s->add_flag("--no-filter", solve.no_filter, "Disable pure-literal filtering");

    std::string cert_file, cert_report;
    auto* c = app.add_subcommand("certify", "Re-check an optimal report with fresh solvers");
    c->add_option("file", cert_file, "Problem file")->required();
    c->add_option("report", cert_report, "Report printed by solve")->required();

    auto* g = app.add_subcommand("gen", "Generate problem files");
    g->require_subcommand(1);
    std::string out_path, format = "smt2";
    int n = 3, jobs_n = 2, stages = 2;
    std::string height = "4";
    std::uint64_t seed = 0;
    auto* sp = g->add_subcommand("strip-packing", "Random strip packing instance");
    sp->add_option("--n", n, "Number of rectangles")->check(CLI::PositiveNumber);
    sp->add_option("--height", height, "Strip height p/q");
    sp->add_option("--seed", seed, "Random seed");
    auto* js = g->add_subcommand("jobshop", "Random zero-wait job shop instance");
    js->add_option("--jobs", jobs_n, "Number of jobs")->check(CLI::PositiveNumber);
    js->add_option("--stages", stages, "Number of stages")->check(CLI::PositiveNumber);
    js->add_option("--seed", seed, "Random seed");
    for (auto* sub : {sp, js}) {
        sub->add_option("--format", format, "smt2 (encoded problem) or lgdp (model)")
            ->check(CLI::IsMember({"smt2", "lgdp"}));
        sub->add_option("-o,--output", out_path, "Output file (default stdout)");
    }
    std::string desc_file;
    auto* pb = g->add_subcommand("encode-pb", "Encode a pseudo-Boolean description as an OMT problem");
    auto* ms = g->add_subcommand("encode-maxsmt", "Encode a MaxSMT description as an OMT problem");
    auto* lg = g->add_subcommand("encode-lgdp", "Encode an LGDP model (JSON) as an OMT problem");
    for (auto* sub : {pb, ms, lg}) {
        sub->add_option("file", desc_file, "Description file")->required();
        sub->add_option("-o,--output", out_path, "Output file (default stdout)");
    }

    std::string bench_dir;
    double bench_timeout = 600;
    unsigned bench_jobs = 1;
    std::vector<std::string> bench_configs;
    auto* b = app.add_subcommand("bench", "Run every configuration on a directory and check agreement");
    b->add_option("dir", bench_dir, "Directory of .smt2 problem files")->required();
    b->add_option("--timeout", bench_timeout, "Per-run wall-clock limit in seconds");
    b->add_option("--jobs", bench_jobs, "Concurrent runs")->check(CLI::PositiveNumber);
    b->add_option("--configs", bench_configs, "Subset of offline-lin offline-bin inline-lin inline-bin inline-ada");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (s->parsed())
            return cmd_solve(solve);
        if (c->parsed())
            return cmd_certify(cert_file, cert_report);
        if (b->parsed())
            return cmd_bench(bench_dir, bench_timeout, bench_jobs, bench_configs);
        if (sp->parsed()) {
            auto h = rational_flag(height, "--height");
            write_output(out_path, render(omt::enc::gen_strip_packing(n, *h, seed), format));
            return 0;
        }
        if (js->parsed()) {
            write_output(out_path, render(omt::enc::gen_jobshop(jobs_n, stages, seed), format));
            return 0;
        }
        if (lg->parsed()) {
            write_output(out_path, render(omt::enc::parse_lgdp_json(read_file(desc_file)), "smt2"));
            return 0;
        }
        if (pb->parsed()) {
            auto f = omt::io::parse_problem(read_file(desc_file), omt::io::Dialect::PbDescription);
            auto e = omt::enc::encode_pb(omt::io::pb_objective_of(f));
            write_output(out_path, omt::io::print_problem(omt::io::problem_file_of(
                                       e.problem, {"pseudo-Boolean objective encoded from " + desc_file})));
            return 0;
        }
        if (ms->parsed()) {
            auto f = omt::io::parse_problem(read_file(desc_file), omt::io::Dialect::MaxSmtDescription);
            auto e = omt::enc::encode_maxsmt(omt::io::maxsmt_of(f));
            write_output(out_path, omt::io::print_problem(omt::io::problem_file_of(
                                       e.pb.problem, {"MaxSMT instance encoded from " + desc_file})));
            return 0;
        }
    } catch (const omt::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const omt::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const omt::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
