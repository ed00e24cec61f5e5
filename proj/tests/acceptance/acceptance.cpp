// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "omt/bench.hpp"
#include "omt/encoders.hpp"
#include "omt/euf.hpp"
#include "omt/lra.hpp"
#include "omt/omt.hpp"
#include "omt/problem_io.hpp"
#include "omt/sat.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

namespace fs = std::filesystem;
using namespace omt;
using ast::Formula;
using ast::LinearExpr;
using ast::Relation;
using Status = OmtResult::Status;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Config {
    Algorithm algorithm;
    Strategy strategy;
    std::string name() const { return std::string(algorithm_name(algorithm)) + "-" + strategy_name(strategy); }
};

const std::vector<Config> kConfigs = {{Algorithm::Offline, Strategy::Linear},
                                      {Algorithm::Offline, Strategy::Binary},
                                      {Algorithm::Inline, Strategy::Linear},
                                      {Algorithm::Inline, Strategy::Binary},
                                      {Algorithm::Inline, Strategy::Adaptive}};

OmtResult run(const OmtProblem& p, const Config& c)
{
    OmtOptions o;
    o.algorithm = c.algorithm;
    o.strategy = c.strategy;
    return solve(p, o);
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double v, int digits = 1)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

// Optima collected by criteria 1 and 2 for certification.
std::vector<std::pair<OmtProblem, OmtResult>> g_optima;

Formula cmp(ast::Context& ctx, TermId x, Relation r, const Rational& c)
{
    return ctx.mk_arith(LinearExpr::of_term(x), r, LinearExpr::of_constant(c));
}

// ------------------------------------------------------------------ 1

Outcome oracle_equivalence()
{
    Outcome out;
    int runs = 0, bad = 0;
    std::map<std::string, int> kinds;
    for (int i = 0; i < 500; ++i) {
        testing::Rng rng(1000 + i);
        OmtProblem p = testing::random_lra_problem(rng);
        oracle::LpValue expect = oracle::brute_force_omt(p);
        kinds[expect.kind == oracle::LpValue::Kind::Bounded ? (expect.strict ? "strict" : "optimum")
              : expect.kind == oracle::LpValue::Kind::Unbounded ? "unbounded"
                                                                : "unsat"]++;
        for (const Config& c : kConfigs) {
            OmtResult r = run(p, c);
            ++runs;
            if (!oracle::matches(expect, r)) {
                if (++bad <= 3)
                    out.detail += " [instance " + std::to_string(i) + " " + c.name() + ": expected " + expect.str() +
                                  " got " + r.mincost().str() + "]";
            } else if (c.algorithm == Algorithm::Inline && c.strategy == Strategy::Linear &&
                       r.status == Status::Optimum) {
                g_optima.emplace_back(p, r);
            }
        }
    }
    out.pass = bad == 0;
    std::string mix;
    for (const auto& [k, n] : kinds)
        mix += " " + k + "=" + std::to_string(n);
    out.detail = std::to_string(runs - bad) + "/" + std::to_string(runs) + " runs match brute force;" + mix +
                 out.detail;
    return out;
}

// ------------------------------------------------------------------ 2

// Random assignment over the purified atoms of a DTC instance, with a
// random arrangement of every interface pair.
EdiAssignment random_assignment(testing::Rng& rng, ast::Context& ctx, TermId cost, Formula f)
{
    std::uniform_int_distribution<int> coin(0, 1), three(0, 2);
    ast::PurifyResult pure = ast::purify(ctx, f);
    EdiAssignment mu;
    for (AtomId a : ast::atoms_of(ctx, pure.formula)) {
        const ast::Atom& atom = ctx.atom(a);
        bool positive = coin(rng);
        switch (atom.kind) {
        case ast::AtomKind::Boolean:
            mu.boolean.push_back({a, positive});
            break;
        case ast::AtomKind::Arith:
            // Negated equalities are case-split into strict atoms during search.
            mu.lra.push_back({a, positive || atom.rel == Relation::Eq});
            break;
        case ast::AtomKind::Equality:
            mu.euf.push_back({a, positive});
            break;
        }
    }
    std::vector<TermId> shared = ast::interface_variables(ctx, pure.formula);
    for (const ast::InterfaceEquality& ie : ast::interface_equalities(ctx, shared)) {
        switch (three(rng)) {
        case 0:
            mu.equal.push_back(ie);
            break;
        case 1:
            mu.distinct.push_back(ie);
            mu.strict.push_back({ie.lt, true});
            break;
        default:
            mu.distinct.push_back(ie);
            mu.strict.push_back({ie.gt, true});
            break;
        }
    }
    (void)cost;
    return mu;
}

OmtProblem dtc_instance(int seed)
{
    for (int attempt = 0;; ++attempt) {
        testing::Rng rng(static_cast<std::uint64_t>(seed) * 101 + attempt);
        OmtProblem p = testing::random_dtc_problem(rng);
        ast::Context probe = p.ctx;
        if (ast::interface_variables(probe, ast::purify(probe, p.formula).formula).size() <= 3)
            return p;
    }
}

Outcome dtc_correctness()
{
    Outcome out;
    int runs = 0, bad = 0;
    std::map<std::string, int> kinds;
    for (int i = 0; i < 200; ++i) {
        OmtProblem p = dtc_instance(i);
        oracle::LpValue expect = oracle::brute_force_dtc(p);
        kinds[expect.str().substr(0, 3)]++;
        for (const Config& c : kConfigs) {
            OmtResult r = run(p, c);
            ++runs;
            if (!oracle::matches(expect, r)) {
                if (++bad <= 3)
                    out.detail += " [instance " + std::to_string(i) + " " + c.name() + ": expected " + expect.str() +
                                  " got " + r.mincost().str() + "]";
            } else if (c.algorithm == Algorithm::Inline && c.strategy == Strategy::Linear &&
                       r.status == Status::Optimum) {
                g_optima.emplace_back(p, r);
            }
        }
    }
    int dispatch_bad = 0;
    std::map<std::string, int> outcomes;
    testing::Rng rng(77);
    for (int i = 0; i < 200; ++i) {
        OmtProblem p = dtc_instance(5000 + i);
        ast::Context ctx = p.ctx;
        EdiAssignment mu = random_assignment(rng, ctx, p.cost, p.formula);
        oracle::LpValue expect = oracle::dispatch_minimum(ctx, p.cost, mu);
        Extended got = mincost_of_assignment(ctx, p.cost, mu).extended();
        outcomes[got.is_plus_infinity() ? "inconsistent" : got.is_minus_infinity() ? "unbounded" : "bounded"]++;
        if (!oracle::matches(expect, got) && ++dispatch_bad <= 3)
            out.detail += " [assignment " + std::to_string(i) + ": expected " + expect.str() + " got " + got.str() + "]";
    }
    out.pass = bad == 0 && dispatch_bad == 0;
    std::string mix;
    for (const auto& [k, n] : outcomes)
        mix += " " + k + "=" + std::to_string(n);
    out.detail = std::to_string(runs - bad) + "/" + std::to_string(runs) + " DTC runs match edi enumeration; " +
                 std::to_string(200 - dispatch_bad) + "/200 assignment minima match the dispatch table;" + mix +
                 out.detail;
    return out;
}

// ------------------------------------------------------------------ 3

Outcome certification()
{
    Outcome out;
    int passed = 0, strict = 0, mutants = 0, caught = 0;
    for (const auto& [p, r] : g_optima) {
        CertificateReport c = certify(p, r);
        passed += c.passed();
        strict += r.strict() && c.passed();
        for (const Rational& d : {Rational(1, 7), Rational(-1, 7)}) {
            OmtResult bad = r;
            bad.value.real += d;
            ++mutants;
            caught += !certify(p, bad).passed();
        }
    }
    out.pass = !g_optima.empty() && passed == static_cast<int>(g_optima.size()) && caught == mutants;
    out.detail = std::to_string(passed) + "/" + std::to_string(g_optima.size()) + " optima certified (" +
                 std::to_string(strict) + " strict via epsilon); " + std::to_string(caught) + "/" +
                 std::to_string(mutants) + " mutants rejected";
    return out;
}

// ------------------------------------------------------------------ 4

// A satisfiable random problem plus a Boolean case split whose every
// branch contradicts a window on x1.
OmtProblem constructed_unsat(testing::Rng& rng)
{
    OmtProblem p = testing::random_lra_problem(rng);
    ast::Context& ctx = p.ctx;
    TermId x = *ctx.find_var("x1");
    Rational lo = testing::random_rational(rng, 10, 3);
    Rational hi = lo + Rational(1, 2);
    Formula a = ctx.mk_bool(ctx.fresh_var("S", ast::kBoolSort));
    Formula b = ctx.mk_bool(ctx.fresh_var("S", ast::kBoolSort));
    p.formula = ctx.mk_and({ctx.mk_or(a, b), ctx.mk_implies(a, cmp(ctx, x, Relation::Gt, hi)),
                            ctx.mk_implies(b, cmp(ctx, x, Relation::Lt, lo)), cmp(ctx, x, Relation::Ge, lo),
                            cmp(ctx, x, Relation::Le, hi), ctx.mk_or(p.formula, a)});
    return p;
}

// A fresh cost that only has an upper bound tying it to a satisfiable problem.
OmtProblem constructed_unbounded(testing::Rng& rng)
{
    for (;;) {
        OmtProblem p = testing::random_lra_problem(rng);
        if (oracle::brute_force_omt(p).kind == oracle::LpValue::Kind::Infeasible)
            continue;
        ast::Context& ctx = p.ctx;
        TermId c = ctx.fresh_var("free", ast::kRealSort);
        LinearExpr le = LinearExpr::of_term(c);
        le.add_term(p.cost, Rational(-1));
        Formula link = ctx.mk_arith(le, Relation::Le, LinearExpr::of_constant(testing::random_rational(rng)));
        p.formula = ctx.mk_and(p.formula, link);
        p.cost = c;
        return p;
    }
}

Outcome extremes()
{
    Outcome out;
    testing::Rng rng(4242);
    int runs = 0, good = 0;
    for (int i = 0; i < 50; ++i) {
        for (bool unsat : {true, false}) {
            OmtProblem p = unsat ? constructed_unsat(rng) : constructed_unbounded(rng);
            oracle::LpValue expect = oracle::brute_force_omt(p);
            Status want = unsat ? Status::Unsat : Status::Unbounded;
            bool oracle_ok = expect.kind == (unsat ? oracle::LpValue::Kind::Infeasible : oracle::LpValue::Kind::Unbounded);
            for (const Config& c : kConfigs) {
                ++runs;
                OmtResult r = run(p, c);
                bool ok = oracle_ok && r.status == want;
                good += ok;
                if (!ok && runs - good <= 3)
                    out.detail += std::string(" [") + (unsat ? "unsat" : "unbounded") + " instance " +
                                  std::to_string(i) + " " + c.name() + " got " + status_name(r.status) + "]";
            }
        }
    }
    out.pass = good == runs;
    out.detail = std::to_string(good) + "/" + std::to_string(runs) + " runs classify 50 unsat and 50 unbounded instances" +
                 out.detail;
    return out;
}

// ------------------------------------------------------------------ 5

Outcome encoder_semantics()
{
    Outcome out;
    testing::Rng rng(55);
    std::uniform_int_distribution<int> atoms_n(2, 6), soft_n(1, 5), weight(1, 9), clauses(1, 4);
    int instances = 0, good = 0, assignment_checks = 0, assignment_good = 0;
    for (int i = 0; i < 100; ++i) {
        // Pseudo-Boolean objective with possibly negative weights.
        enc::PbObjective o;
        std::vector<TermId> vars;
        std::vector<Formula> atoms;
        int n = atoms_n(rng);
        for (int k = 0; k < n; ++k) {
            vars.push_back(o.ctx.declare_var("X" + std::to_string(k), ast::kBoolSort));
            atoms.push_back(o.ctx.mk_bool(vars.back()));
            o.terms.emplace_back(vars.back(), testing::random_rational(rng, 9, 4));
        }
        o.constraint = testing::random_formula(rng, o.ctx, atoms, clauses(rng));
        auto expect = oracle::pb_optimum(o.ctx, o.constraint, o.terms);
        enc::PbEncoding e = enc::encode_pb(o);
        OmtResult r = run(e.problem, kConfigs[i % kConfigs.size()]);
        ++instances;
        bool ok = expect ? r.status == Status::Optimum && r.value == DeltaRational(*expect) : r.status == Status::Unsat;
        good += ok;
        if (!ok && instances - good <= 3)
            out.detail += " [pb " + std::to_string(i) + "]";
        if (i % 5 == 0) {
            // Per-assignment semantics: fixing every atom leaves exactly the weighted sum.
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                OmtProblem fixed = e.problem;
                std::vector<Formula> parts;
                Rational sum;
                for (int k = 0; k < n; ++k) {
                    bool on = mask >> k & 1;
                    parts.push_back(on ? atoms[k] : fixed.ctx.mk_not(atoms[k]));
                    if (on)
                        sum += o.terms[k].second;
                }
                // Drop the constraint so every assignment is admissible.
                enc::PbObjective free = o;
                free.constraint = free.ctx.mk_true();
                OmtProblem q = enc::encode_pb(free).problem;
                parts.push_back(q.formula);
                q.formula = q.ctx.mk_and(parts);
                OmtResult rq = run(q, kConfigs[2]);
                ++assignment_checks;
                assignment_good += rq.status == Status::Optimum && rq.value == DeltaRational(sum);
            }
        }
    }
    for (int i = 0; i < 100; ++i) {
        // MaxSMT over propositional hard and soft formulas.
        enc::MaxSmtInstance m;
        std::vector<Formula> atoms;
        int n = atoms_n(rng);
        for (int k = 0; k < n; ++k)
            atoms.push_back(m.ctx.mk_bool(m.ctx.declare_var("P" + std::to_string(k), ast::kBoolSort)));
        m.hard.push_back(testing::random_formula(rng, m.ctx, atoms, clauses(rng)));
        int s = soft_n(rng);
        for (int k = 0; k < s; ++k)
            m.soft.emplace_back(testing::random_formula(rng, m.ctx, atoms, 1), Rational(weight(rng), 1 + k % 2));
        auto expect = oracle::maxsmt_optimum(m.ctx, m.hard, m.soft);
        OmtResult r = run(enc::encode_maxsmt(m).pb.problem, kConfigs[i % kConfigs.size()]);
        ++instances;
        bool ok = expect ? r.status == Status::Optimum && r.value == DeltaRational(*expect) : r.status == Status::Unsat;

        // Round trip: positive-weight PB through MaxSMT and back.
        enc::PbObjective o;
        o.ctx = m.ctx;
        o.constraint = m.ctx.mk_and(m.hard);
        for (Formula a : atoms)
            o.terms.emplace_back(m.ctx.atom(m.ctx.node(a).atom).var, Rational(weight(rng)));
        auto pb = oracle::pb_optimum(o.ctx, o.constraint, o.terms);
        OmtResult via = run(enc::encode_maxsmt(enc::pb_to_maxsmt(o)).pb.problem, kConfigs[(i + 2) % kConfigs.size()]);
        ok = ok && (pb ? via.status == Status::Optimum && via.value == DeltaRational(*pb) : via.status == Status::Unsat);
        good += ok;
        if (!ok && instances - good <= 3)
            out.detail += " [maxsmt " + std::to_string(i) + "]";
    }
    out.pass = good == instances && assignment_good == assignment_checks;
    out.detail = std::to_string(good) + "/" + std::to_string(instances) +
                 " PB and MaxSMT instances (incl. round trip) match brute force; " + std::to_string(assignment_good) +
                 "/" + std::to_string(assignment_checks) + " fixed assignments give the weighted sum" + out.detail;
    return out;
}

// ------------------------------------------------------------------ 6

Outcome lgdp_desk_scale()
{
    Outcome out;
    int instances = 0, good = 0;
    double slowest = 0;
    const std::vector<Config> configs = {kConfigs[1], kConfigs[4]};
    for (int n = 1; n <= 4; ++n) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const int height = 4;
            enc::LgdpModel m = enc::gen_strip_packing(n, Rational(height), seed);
            std::vector<std::pair<int, int>> rects;
            Rational total = m.vars[0].ub;
            for (std::size_t i = 1; i < m.vars.size(); i += 2)
                rects.emplace_back(std::stoi((total - m.vars[i].ub).str()),
                                   std::stoi((Rational(height) - m.vars[i + 1].ub).str()));
            Rational expect = oracle::strip_packing_optimum(rects, height);
            enc::LgdpEncoding e = enc::encode_lgdp(m);
            for (const Config& c : configs) {
                auto start = std::chrono::steady_clock::now();
                OmtResult r = run(e.problem, c);
                double t = seconds_since(start);
                slowest = std::max(slowest, t);
                ++instances;
                bool ok = r.status == Status::Optimum && r.value == DeltaRational(expect) && t < 10.0;
                good += ok;
                if (!ok && instances - good <= 3)
                    out.detail += " [strip n=" + std::to_string(n) + " seed=" + std::to_string(seed) + " " + c.name() +
                                  ": expected " + expect.str() + " got " + r.mincost().str() + " in " + fixed(t) + "s]";
            }
        }
    }
    for (int jobs = 1; jobs <= 3; ++jobs) {
        for (int stages = 1; stages <= 2; ++stages) {
            for (std::uint64_t seed = 0; seed < 4; ++seed) {
                auto durations = enc::jobshop_durations(jobs, stages, seed);
                std::vector<std::vector<int>> ints;
                for (const auto& job : durations) {
                    ints.emplace_back();
                    for (const Rational& d : job)
                        ints.back().push_back(std::stoi(d.str()));
                }
                Rational expect = oracle::jobshop_optimum(ints);
                enc::LgdpEncoding e = enc::encode_lgdp(enc::gen_jobshop(jobs, stages, seed));
                for (const Config& c : configs) {
                    auto start = std::chrono::steady_clock::now();
                    OmtResult r = run(e.problem, c);
                    double t = seconds_since(start);
                    slowest = std::max(slowest, t);
                    ++instances;
                    bool ok = r.status == Status::Optimum && r.value == DeltaRational(expect) && t < 10.0;
                    good += ok;
                    if (!ok && instances - good <= 3)
                        out.detail += " [jobshop " + std::to_string(jobs) + "x" + std::to_string(stages) + " seed=" +
                                      std::to_string(seed) + " " + c.name() + ": expected " + expect.str() + " got " +
                                      r.mincost().str() + "]";
                }
            }
        }
    }
    out.pass = good == instances;
    out.detail = std::to_string(good) + "/" + std::to_string(instances) +
                 " strip-packing and job-shop runs match the reference searches; slowest " + fixed(slowest, 3) + "s" +
                 out.detail;
    return out;
}

// ------------------------------------------------------------------ 7

int sat_suite()
{
    testing::Rng rng(7001);
    std::uniform_int_distribution<int> vars_n(1, 15);
    int good = 0;
    for (int i = 0; i < 1000; ++i) {
        int vars = vars_n(rng);
        auto cnf = testing::random_cnf(rng, vars, std::max(1, static_cast<int>(vars * 4.26)), 3);
        sat::Solver s;
        sat::load(s, {static_cast<std::size_t>(vars), cnf});
        good += (s.solve() == sat::Result::Sat) == oracle::cnf_satisfiable(vars, cnf);
    }
    return good;
}

int lp_suite()
{
    testing::Rng rng(7002);
    std::uniform_int_distribution<int> vars_n(1, 3), rows_n(0, 4);
    int good = 0;
    for (int i = 0; i < 500; ++i) {
        const int n = vars_n(rng);  // plus the cost variable
        lra::Solver s;
        std::vector<lra::VarId> x;
        for (int k = 0; k <= n; ++k)
            x.push_back(s.new_var());
        std::vector<oracle::Ineq> system;
        bool consistent = true;
        auto add = [&](const std::vector<Rational>& a, Relation rel, const Rational& b) {
            std::vector<std::pair<lra::VarId, Rational>> row;
            for (int k = 0; k <= n; ++k)
                if (!a[k].is_zero())
                    row.emplace_back(x[k], a[k]);
            if (row.empty())
                return;
            oracle::add_constraint(system, a, rel, b);
            consistent = consistent && !s.assert_literal({s.register_atom(row, rel, b), true});
        };
        std::vector<Rational> def(n + 1);
        for (int k = 0; k < n; ++k) {
            std::vector<Rational> unit(n + 1);
            unit[k] = Rational(1);
            add(unit, Relation::Ge, testing::random_rational(rng, 10, 2) - Rational(10));
            add(unit, Relation::Le, testing::random_rational(rng, 10, 2) + Rational(10));
            def[k] = -testing::random_rational(rng, 6, 3);
        }
        def[n] = Rational(1);
        add(def, Relation::Eq, Rational(0));
        int rows = rows_n(rng);
        for (int r = 0; r < rows; ++r) {
            std::vector<Rational> a(n + 1);
            for (int k = 0; k < n; ++k)
                a[k] = testing::random_rational(rng, 6, 4);
            add(a, r % 2 ? Relation::Le : Relation::Ge, testing::random_rational(rng, 10, 3));
        }
        std::vector<Rational> c(n + 1);
        c[n] = Rational(1);
        oracle::LpValue expect = oracle::vertex_minimize(system, n + 1, c);
        if (consistent)
            consistent = !s.check();
        if (!consistent) {
            good += expect.kind == oracle::LpValue::Kind::Infeasible;
            continue;
        }
        lra::Minimum m = s.minimize(x[n]);
        good += m.kind == lra::Minimum::Kind::Bounded && oracle::matches(expect, Extended(m.value));
    }
    return good;
}

// Same shape as the unit property test: applications of depth one keep
// the partition search small.
int euf_suite()
{
    testing::Rng rng(7003);
    std::uniform_int_distribution<int> pick(0, 3), shape(0, 2);
    int good = 0;
    for (int i = 0; i < 200; ++i) {
        ast::Context ctx;
        ast::SortId u = ctx.declare_sort("U");
        std::vector<TermId> vars;
        for (int k = 0; k < 4; ++k)
            vars.push_back(ctx.declare_var("v" + std::to_string(k), u));
        ast::FuncId f = ctx.declare_fun("f", {u}, u);
        ast::FuncId g = ctx.declare_fun("g", {u, u}, u);
        auto term = [&]() -> TermId {
            switch (shape(rng)) {
            case 0:
                return vars[pick(rng)];
            case 1:
                return ctx.mk_app(f, {vars[pick(rng)]});
            default:
                return ctx.mk_app(g, {vars[pick(rng)], vars[pick(rng)]});
            }
        };
        oracle::EqualityProblem p;
        for (int k = 0; k < 5; ++k)
            p.equal.emplace_back(term(), term());
        for (int k = 0; k < 2; ++k)
            p.distinct.emplace_back(term(), term());
        euf::EGraph eg;
        std::map<TermId, euf::NodeId> node;
        std::function<euf::NodeId(TermId)> add = [&](TermId t) -> euf::NodeId {
            if (auto it = node.find(t); it != node.end())
                return it->second;
            const ast::TermNode& n = ctx.term(t);
            euf::NodeId id;
            if (n.kind == ast::TermKind::Application) {
                std::vector<euf::NodeId> args;
                for (TermId a : n.args)
                    args.push_back(add(a));
                id = eg.add_app(n.func, args);
            } else {
                id = eg.add_leaf();
            }
            return node[t] = id;
        };
        for (const auto& [a, b] : p.equal)
            add(a), add(b);
        for (const auto& [a, b] : p.distinct)
            add(a), add(b);
        bool ok = true;
        euf::Tag tag = 0;
        for (const auto& [a, b] : p.equal)
            ok = ok && !eg.assert_eq(node[a], node[b], tag++);
        for (const auto& [a, b] : p.distinct)
            ok = ok && !eg.assert_diseq(node[a], node[b], tag++);
        good += ok == oracle::euf_consistent_partitions(ctx, p) && ok == oracle::euf_consistent_closure(ctx, p);
    }
    return good;
}

int concretization_suite()
{
    testing::Rng rng(7004);
    std::uniform_int_distribution<int> num(-30, 30), den(1, 12), size(1, 8);
    int good = 0;
    for (int i = 0; i < 10000; ++i) {
        std::vector<std::pair<DeltaRational, DeltaRational>> pairs;
        int k = size(rng);
        for (int j = 0; j < k; ++j) {
            DeltaRational a(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
            DeltaRational b(rng() % 4 == 0 ? a.real : Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
            if (b < a)
                std::swap(a, b);
            pairs.emplace_back(a, b);
        }
        Rational eps = concretization_epsilon(pairs);
        bool ok = eps.sign() > 0;
        for (const Rational& e : {eps, eps / Rational(3)})
            for (const auto& [a, b] : pairs)
                ok = ok && a.concretize(e) <= b.concretize(e);
        good += ok;
    }
    return good;
}

Outcome component_suites()
{
    Outcome out;
    int s = sat_suite(), l = lp_suite(), e = euf_suite(), c = concretization_suite();
    out.pass = s == 1000 && l == 500 && e == 200 && c == 10000;
    out.detail = "SAT " + std::to_string(s) + "/1000, LP " + std::to_string(l) + "/500, EUF " + std::to_string(e) +
                 "/200, concretization " + std::to_string(c) + "/10000";
    return out;
}

// ------------------------------------------------------------------ 8

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream(path) << text;
}

fs::path generate_corpus()
{
    fs::path dir = fs::temp_directory_path() / "omt_acceptance_corpus";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto encoded = [](const enc::LgdpModel& m) {
        return io::print_problem(io::problem_file_of(enc::encode_lgdp(m).problem, m.header));
    };
    for (int n = 1; n <= 4; ++n)
        for (std::uint64_t seed = 0; seed < 3; ++seed)
            write_file(dir / ("strip_n" + std::to_string(n) + "_s" + std::to_string(seed) + ".smt2"),
                       encoded(enc::gen_strip_packing(n, Rational(4), seed)));
    for (int jobs = 2; jobs <= 3; ++jobs)
        for (int stages = 1; stages <= 2; ++stages)
            for (std::uint64_t seed = 0; seed < 2; ++seed)
                write_file(dir / ("jobshop_" + std::to_string(jobs) + "x" + std::to_string(stages) + "_s" +
                                  std::to_string(seed) + ".smt2"),
                           encoded(enc::gen_jobshop(jobs, stages, seed)));
    testing::Rng rng(8008);
    for (int i = 0; i < 30; ++i) {
        OmtProblem p = testing::random_lra_problem(rng);
        write_file(dir / ("lra_" + std::to_string(i) + ".smt2"),
                   io::print_problem(io::problem_file_of(p, {"random OMT(LRA) instance " + std::to_string(i)})));
    }
    for (int i = 0; i < 20; ++i) {
        OmtProblem p = dtc_instance(9000 + i);
        write_file(dir / ("dtc_" + std::to_string(i) + ".smt2"),
                   io::print_problem(io::problem_file_of(p, {"random OMT(LRA+EUF) instance " + std::to_string(i)})));
    }
    for (int i = 0; i < 10; ++i) {
        enc::MaxSmtInstance m;
        std::vector<Formula> atoms;
        for (int k = 0; k < 5; ++k)
            atoms.push_back(m.ctx.mk_bool(m.ctx.declare_var("P" + std::to_string(k), ast::kBoolSort)));
        m.hard.push_back(testing::random_formula(rng, m.ctx, atoms, 3));
        for (int k = 0; k < 5; ++k)
            m.soft.emplace_back(testing::random_formula(rng, m.ctx, atoms, 1), Rational(k + 1));
        write_file(dir / ("maxsmt_" + std::to_string(i) + ".smt2"),
                   io::print_problem(io::problem_file_of(enc::encode_maxsmt(m).pb.problem, {"random MaxSMT"})));
    }
    return dir;
}

Outcome bench_agreement()
{
    Outcome out;
    fs::path dir = generate_corpus();
    bench::BenchOptions o;
    o.jobs = std::max(1u, std::thread::hardware_concurrency());
    auto files = bench::problem_files(dir);
    bench::BenchReport r = bench::run_bench(files, o);
    int errors = 0, unknown = 0;
    for (const bench::Row& row : r.rows) {
        errors += row.status == "error";
        unknown += row.status == "unknown";
    }
    out.pass = r.agreed() && errors == 0 && unknown == 0 && r.rows.size() == files.size() * 5;
    out.detail = std::to_string(files.size()) + " files x 5 configurations, " + std::to_string(r.disagreements.size()) +
                 " disagreements, " + std::to_string(errors) + " errors, " + std::to_string(unknown) + " timeouts";
    for (const std::string& d : r.disagreements)
        out.detail += " [" + d + "]";
    fs::remove_all(dir);
    return out;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        std::string name;
        double budget;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence on 500 random OMT(LRA) instances", 300, oracle_equivalence},
        {2, "delayed theory combination vs edi enumeration", 300, dtc_correctness},
        {3, "certification and mutation", 120, certification},
        {4, "unsat and unbounded extremes", 60, extremes},
        {5, "PB and MaxSMT encoder semantics", 120, encoder_semantics},
        {6, "LGDP strip packing and job shop", 600, lgdp_desk_scale},
        {7, "component suites", 600, component_suites},
        {8, "strategy and driver agreement harness", 600, bench_agreement},
    };
    bool all = true;
    for (const Criterion& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double t = seconds_since(start);
        if (t > c.budget) {
            o.pass = false;
            o.detail += " [over the " + fixed(c.budget, 0) + "s budget]";
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << ". " << c.name << ": " << o.detail << " ("
                  << fixed(t) << "s)" << std::endl;
    }
    return all ? 0 : 1;
}
