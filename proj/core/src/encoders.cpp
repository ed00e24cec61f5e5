#include "omt/encoders.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "omt/errors.hpp"

namespace omt::enc {

using ast::Formula;
using ast::LinearExpr;
using ast::Relation;
using json = nlohmann::json;

std::vector<std::vector<std::string>> xor_clauses(const Disjunction& k)
{
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> alo;
    for (const Disjunct& j : k.disjuncts)
        alo.push_back(j.label);
    out.push_back(alo);
    for (std::size_t a = 0; a < k.disjuncts.size(); ++a)
        for (std::size_t b = a + 1; b < k.disjuncts.size(); ++b)
            out.push_back({"-" + k.disjuncts[a].label, "-" + k.disjuncts[b].label});
    return out;
}

void validate(const LgdpModel& m)
{
    std::vector<std::string> problems;
    std::set<std::string> names;
    for (const LgdpVar& v : m.vars) {
        if (!names.insert(v.name).second)
            problems.push_back("variable " + v.name + " declared twice");
        if (v.ub.sign() < 0)
            problems.push_back("variable " + v.name + " has a negative upper bound");
    }
    auto check_row = [&](const LinearRow& row, const std::string& where) {
        for (const auto& [name, c] : row.coeffs)
            if (!names.count(name))
                problems.push_back(where + " uses undeclared variable " + name);
    };
    for (const auto& [name, w] : m.d)
        if (!names.count(name))
            problems.push_back("cost vector uses undeclared variable " + name);
    for (std::size_t i = 0; i < m.common.size(); ++i)
        check_row(m.common[i], "common row " + std::to_string(i));

    std::set<std::string> labels;
    std::set<std::vector<std::string>> clauses;
    for (auto c : m.prop_cnf) {
        std::sort(c.begin(), c.end());
        clauses.insert(c);
    }
    for (std::size_t k = 0; k < m.disjunctions.size(); ++k) {
        const Disjunction& dk = m.disjunctions[k];
        std::string where = "disjunction " + std::to_string(k) + " (" + dk.z + ")";
        if (names.count(dk.z))
            problems.push_back(where + ": cost variable clashes with a continuous variable");
        if (dk.disjuncts.size() < 2)
            problems.push_back(where + ": needs at least two disjuncts");
        for (std::size_t j = 0; j < dk.disjuncts.size(); ++j) {
            const Disjunct& dj = dk.disjuncts[j];
            std::string at = where + " disjunct " + std::to_string(j) + " (" + dj.label + ")";
            if (dj.label.empty() || dj.label.front() == '-')
                problems.push_back(at + ": label must be non-empty and not start with '-'");
            if (!labels.insert(dj.label).second)
                problems.push_back(at + ": duplicate label");
            if (dj.charge.sign() < 0)
                problems.push_back(at + ": negative charge");
            for (const LinearRow& row : dj.rows)
                check_row(row, at);
        }
        for (auto c : xor_clauses(dk)) {
            std::sort(c.begin(), c.end());
            if (!clauses.count(c)) {
                problems.push_back(where + ": propositional clauses lack the exactly-one row");
                break;
            }
        }
    }
    for (const auto& c : m.prop_cnf)
        for (const std::string& lit : c) {
            std::string label = !lit.empty() && lit.front() == '-' ? lit.substr(1) : lit;
            if (!labels.count(label))
                problems.push_back("clause literal " + lit + " names no disjunct");
        }
    if (!problems.empty()) {
        std::string msg = "invalid LGDP model:";
        for (const auto& p : problems)
            msg += "\n  " + p;
        throw ValidationError(msg);
    }
}

namespace {

Formula row_formula(ast::Context& ctx, const std::map<std::string, TermId>& vars, const LinearRow& row)
{
    LinearExpr lhs;
    for (const auto& [name, c] : row.coeffs)
        lhs.add_term(vars.at(name), c);
    return ctx.mk_arith(lhs, Relation::Le, LinearExpr::of_constant(row.rhs));
}

Formula cnf_formula(ast::Context& ctx, Formula f)
{
    std::vector<Formula> clauses;
    for (const ast::Clause& c : ast::cnfize(ctx, f)) {
        std::vector<Formula> lits;
        for (const AtomLiteral& l : c)
            lits.push_back(ctx.mk_atom(l));
        clauses.push_back(ctx.mk_or(lits));
    }
    return ctx.mk_and(clauses);
}

} // namespace

LgdpEncoding encode_lgdp(const LgdpModel& m)
{
    validate(m);
    LgdpEncoding e;
    ast::Context& ctx = e.problem.ctx;
    std::vector<Formula> parts;
    for (const LgdpVar& v : m.vars) {
        TermId x = ctx.declare_var(v.name, ast::kRealSort);
        e.vars.emplace(v.name, x);
        parts.push_back(ctx.mk_arith(LinearExpr::of_term(x), Relation::Ge, LinearExpr{}));
        parts.push_back(ctx.mk_arith(LinearExpr::of_term(x), Relation::Le, LinearExpr::of_constant(v.ub)));
    }
    for (const LinearRow& row : m.common)
        parts.push_back(row_formula(ctx, e.vars, row));

    std::map<std::string, TermId> label_vars;
    LinearExpr total;
    for (const Disjunction& dk : m.disjunctions) {
        TermId z = ctx.declare_var(dk.z, ast::kRealSort);
        total.add_term(z, Rational(1));
        std::vector<Formula> options;
        std::vector<std::pair<std::string, TermId>> labels;
        Rational lo = dk.disjuncts.front().charge;
        Rational hi = lo;
        for (const Disjunct& dj : dk.disjuncts) {
            TermId y = ctx.declare_var(dj.label, ast::kBoolSort);
            label_vars.emplace(dj.label, y);
            labels.emplace_back(dj.label, y);
            std::vector<Formula> body{ctx.mk_bool(y)};
            for (const LinearRow& row : dj.rows)
                body.push_back(row_formula(ctx, e.vars, row));
            body.push_back(ctx.mk_arith(LinearExpr::of_term(z), Relation::Eq, LinearExpr::of_constant(dj.charge)));
            options.push_back(ctx.mk_and(body));
            lo = min(lo, dj.charge);
            hi = max(hi, dj.charge);
        }
        parts.push_back(ctx.mk_or(options));
        parts.push_back(ctx.mk_arith(LinearExpr::of_term(z), Relation::Ge, LinearExpr::of_constant(lo)));
        parts.push_back(ctx.mk_arith(LinearExpr::of_term(z), Relation::Le, LinearExpr::of_constant(hi)));
        e.labels.push_back(std::move(labels));
    }
    for (const auto& c : m.prop_cnf) {
        std::vector<Formula> lits;
        for (const std::string& lit : c) {
            bool neg = lit.front() == '-';
            Formula y = ctx.mk_bool(label_vars.at(neg ? lit.substr(1) : lit));
            lits.push_back(neg ? ctx.mk_not(y) : y);
        }
        parts.push_back(ctx.mk_or(lits));
    }
    for (const auto& [name, w] : m.d)
        total.add_term(e.vars.at(name), w);
    TermId cost = ctx.fresh_var("cost", ast::kRealSort);
    parts.push_back(ctx.mk_arith(LinearExpr::of_term(cost), Relation::Eq, total));
    e.problem.cost = cost;
    e.problem.formula = cnf_formula(ctx, ctx.mk_and(parts));
    return e;
}

LgdpSolution decode_lgdp(const LgdpEncoding& e, const ast::Model& model)
{
    LgdpSolution s;
    for (const auto& [name, t] : e.vars)
        s.x[name] = model.value_of(e.problem.ctx, t);
    for (const auto& labels : e.labels) {
        std::string chosen;
        for (const auto& [label, y] : labels) {
            auto it = model.booleans.find(y);
            if (it != model.booleans.end() && it->second) {
                chosen = label;
                break;
            }
        }
        s.chosen.push_back(chosen);
    }
    return s;
}

// ------------------------------------------------------------------- JSON

namespace {

json row_json(const LinearRow& row)
{
    json coeffs = json::object();
    for (const auto& [name, c] : row.coeffs)
        coeffs[name] = c.str();
    return {{"coeffs", coeffs}, {"rhs", row.rhs.str()}};
}

Rational rational_of(const json& j, const std::string& where)
{
    try {
        if (j.is_number_integer())
            return Rational(j.get<long long>());
        if (j.is_string())
            return Rational::parse(j.get<std::string>());
    } catch (const std::exception&) {
    }
    throw ValidationError(where + ": expected a rational number (integer or \"p/q\" string)");
}

LinearRow row_of(const json& j, const std::string& where)
{
    if (!j.is_object() || !j.contains("coeffs") || !j.contains("rhs"))
        throw ValidationError(where + ": a row needs \"coeffs\" and \"rhs\"");
    LinearRow row;
    for (const auto& [name, c] : j.at("coeffs").items())
        row.coeffs.emplace_back(name, rational_of(c, where + "." + name));
    row.rhs = rational_of(j.at("rhs"), where + ".rhs");
    return row;
}

} // namespace

std::string to_lgdp_json(const LgdpModel& m)
{
    json j;
    j["vars"] = json::array();
    for (const LgdpVar& v : m.vars)
        j["vars"].push_back({{"name", v.name}, {"ub", v.ub.str()}});
    j["d"] = json::object();
    for (const auto& [name, w] : m.d)
        j["d"][name] = w.str();
    j["common"] = json::array();
    for (const LinearRow& row : m.common)
        j["common"].push_back(row_json(row));
    j["disjunctions"] = json::array();
    for (const Disjunction& dk : m.disjunctions) {
        json ds = json::array();
        for (const Disjunct& dj : dk.disjuncts) {
            json rows = json::array();
            for (const LinearRow& row : dj.rows)
                rows.push_back(row_json(row));
            ds.push_back({{"label", dj.label}, {"rows", rows}, {"charge", dj.charge.str()}});
        }
        j["disjunctions"].push_back({{"z", dk.z}, {"disjuncts", ds}});
    }
    j["prop_cnf"] = m.prop_cnf;
    std::ostringstream out;
    for (const std::string& line : m.header)
        out << "// " << line << "\n";
    out << j.dump(1) << "\n";
    return out.str();
}

LgdpModel parse_lgdp_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed LGDP model: ") + e.what(), 0, 0);
    }
    LgdpModel m;
    std::istringstream lines{std::string(text)};
    for (std::string line; std::getline(lines, line);) {
        if (line.rfind("// ", 0) != 0)
            break;
        m.header.push_back(line.substr(3));
    }
    try {
        for (const json& v : j.value("vars", json::array()))
            m.vars.push_back({v.at("name").get<std::string>(), rational_of(v.at("ub"), "vars." + v.at("name").get<std::string>())});
        const json d = j.value("d", json::object());
        for (const auto& [name, w] : d.items())
            m.d[name] = rational_of(w, "d." + name);
        std::size_t i = 0;
        for (const json& row : j.value("common", json::array()))
            m.common.push_back(row_of(row, "common[" + std::to_string(i++) + "]"));
        for (const json& dk : j.value("disjunctions", json::array())) {
            Disjunction d{dk.at("z").get<std::string>(), {}};
            for (const json& dj : dk.at("disjuncts")) {
                Disjunct x{dj.at("label").get<std::string>(), {}, Rational(0)};
                std::size_t r = 0;
                for (const json& row : dj.value("rows", json::array()))
                    x.rows.push_back(row_of(row, x.label + ".rows[" + std::to_string(r++) + "]"));
                x.charge = rational_of(dj.value("charge", json(0)), x.label + ".charge");
                d.disjuncts.push_back(std::move(x));
            }
            m.disjunctions.push_back(std::move(d));
        }
        m.prop_cnf = j.value("prop_cnf", std::vector<std::vector<std::string>>{});
    } catch (const json::exception& e) {
        throw ValidationError(std::string("LGDP model does not match the schema: ") + e.what());
    }
    return m;
}

// ------------------------------------------------------------ generators

namespace {

LinearRow row(std::vector<std::pair<std::string, Rational>> coeffs, Rational rhs)
{
    return {std::move(coeffs), std::move(rhs)};
}

std::string idx(std::size_t i)
{
    return std::to_string(i + 1);
}

// Uniform integer in [lo, hi]; modulo keeps streams identical across standard libraries.
long draw(std::mt19937_64& rng, long lo, long hi)
{
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace

LgdpModel strip_packing_model(const std::vector<Rect>& rects, const Rational& height)
{
    if (rects.empty())
        throw ValidationError("strip packing needs at least one rectangle");
    if (height.sign() <= 0)
        throw ValidationError("strip height must be positive");
    LgdpModel m;
    Rational total;
    for (std::size_t i = 0; i < rects.size(); ++i) {
        if (rects[i].w.sign() <= 0 || rects[i].h.sign() <= 0)
            throw ValidationError("rectangle " + idx(i) + " must have positive dimensions");
        if (rects[i].h > height)
            throw ValidationError("rectangle " + idx(i) + " is taller than the strip");
        total += rects[i].w;
    }
    m.vars.push_back({"L", total});
    m.d["L"] = Rational(1);
    for (std::size_t i = 0; i < rects.size(); ++i) {
        m.vars.push_back({"x" + idx(i), total - rects[i].w});
        m.vars.push_back({"y" + idx(i), height - rects[i].h});
        m.common.push_back(row({{"x" + idx(i), Rational(1)}, {"L", Rational(-1)}}, -rects[i].w));
    }
    for (std::size_t i = 0; i < rects.size(); ++i) {
        for (std::size_t j = i + 1; j < rects.size(); ++j) {
            std::string p = idx(i) + "_" + idx(j);
            std::string xi = "x" + idx(i), xj = "x" + idx(j), yi = "y" + idx(i), yj = "y" + idx(j);
            Disjunction d{"z" + p, {}};
            d.disjuncts.push_back({"left" + p, {row({{xi, Rational(1)}, {xj, Rational(-1)}}, -rects[i].w)}, Rational(0)});
            d.disjuncts.push_back({"right" + p, {row({{xj, Rational(1)}, {xi, Rational(-1)}}, -rects[j].w)}, Rational(0)});
            d.disjuncts.push_back({"below" + p, {row({{yi, Rational(1)}, {yj, Rational(-1)}}, -rects[i].h)}, Rational(0)});
            d.disjuncts.push_back({"above" + p, {row({{yj, Rational(1)}, {yi, Rational(-1)}}, -rects[j].h)}, Rational(0)});
            for (auto& c : xor_clauses(d))
                m.prop_cnf.push_back(std::move(c));
            m.disjunctions.push_back(std::move(d));
        }
    }
    return m;
}

LgdpModel gen_strip_packing(int n, const Rational& height, std::uint64_t seed)
{
    if (n < 1)
        throw ValidationError("strip packing needs n >= 1");
    if (height.sign() <= 0)
        throw ValidationError("strip height must be positive");
    std::mt19937_64 rng(seed);
    std::vector<Rect> rects;
    for (int i = 0; i < n; ++i) {
        Rect r;
        r.w = Rational(draw(rng, 1, 4));
        if (height >= Rational(1)) {
            long top = mpz_class(height.get().get_num() / height.get().get_den()).get_si();
            r.h = Rational(draw(rng, 1, top));
        } else {
            r.h = height * Rational(draw(rng, 1, 4), 4);
        }
        rects.push_back(r);
    }
    LgdpModel m = strip_packing_model(rects, height);
    std::string dims;
    for (const Rect& r : rects)
        dims += " " + r.w.str() + "x" + r.h.str();
    m.header = {"generator: strip-packing n=" + std::to_string(n) + " height=" + height.str() +
                    " seed=" + std::to_string(seed),
                "rectangles (w x h):" + dims,
                "model: canonical pairwise left/right/below/above disjunctions, cost = strip length L"};
    return m;
}

LgdpModel jobshop_model(const std::vector<std::vector<Rational>>& durations)
{
    if (durations.empty())
        throw ValidationError("job shop needs at least one job");
    std::size_t stages = durations.front().size();
    Rational horizon;
    std::vector<Rational> total(durations.size());
    for (std::size_t i = 0; i < durations.size(); ++i) {
        if (durations[i].size() != stages || stages == 0)
            throw ValidationError("job " + idx(i) + " must list one duration per stage");
        for (const Rational& t : durations[i]) {
            if (t.sign() < 0)
                throw ValidationError("job " + idx(i) + " has a negative duration");
            total[i] += t;
        }
        if (total[i].sign() <= 0)
            throw ValidationError("job " + idx(i) + " uses no stage");
        horizon += total[i];
    }
    LgdpModel m;
    m.vars.push_back({"Ms", horizon});
    m.d["Ms"] = Rational(1);
    for (std::size_t i = 0; i < durations.size(); ++i) {
        m.vars.push_back({"t" + idx(i), horizon - total[i]});
        m.common.push_back(row({{"t" + idx(i), Rational(1)}, {"Ms", Rational(-1)}}, -total[i]));
    }
    auto offset = [&](std::size_t i, std::size_t s) {
        Rational o;
        for (std::size_t k = 0; k < s; ++k)
            o += durations[i][k];
        return o;
    };
    for (std::size_t i = 0; i < durations.size(); ++i) {
        for (std::size_t k = i + 1; k < durations.size(); ++k) {
            for (std::size_t s = 0; s < stages; ++s) {
                if (durations[i][s].is_zero() || durations[k][s].is_zero())
                    continue;
                std::string p = idx(i) + "_" + idx(k) + "_" + idx(s);
                std::string ti = "t" + idx(i), tk = "t" + idx(k);
                Disjunction d{"z" + p, {}};
                // i leaves stage s before k enters it, or the reverse.
                d.disjuncts.push_back({"first" + p,
                                       {row({{ti, Rational(1)}, {tk, Rational(-1)}},
                                            offset(k, s) - offset(i, s) - durations[i][s])},
                                       Rational(0)});
                d.disjuncts.push_back({"second" + p,
                                       {row({{tk, Rational(1)}, {ti, Rational(-1)}},
                                            offset(i, s) - offset(k, s) - durations[k][s])},
                                       Rational(0)});
                for (auto& c : xor_clauses(d))
                    m.prop_cnf.push_back(std::move(c));
                m.disjunctions.push_back(std::move(d));
            }
        }
    }
    return m;
}

std::vector<std::vector<Rational>> jobshop_durations(int jobs, int stages, std::uint64_t seed)
{
    if (jobs < 1 || stages < 1)
        throw ValidationError("job shop needs jobs >= 1 and stages >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Rational>> d(jobs, std::vector<Rational>(stages));
    for (auto& job : d) {
        bool any = false;
        for (auto& t : job) {
            t = draw(rng, 0, 3) == 0 ? Rational(0) : Rational(draw(rng, 1, 4));
            any = any || !t.is_zero();
        }
        if (!any)
            job[draw(rng, 0, stages - 1)] = Rational(draw(rng, 1, 4));
    }
    return d;
}

LgdpModel gen_jobshop(int jobs, int stages, std::uint64_t seed)
{
    auto durations = jobshop_durations(jobs, stages, seed);
    LgdpModel m = jobshop_model(durations);
    std::string table;
    for (const auto& job : durations) {
        table += " [";
        for (std::size_t s = 0; s < job.size(); ++s)
            table += (s ? " " : "") + job[s].str();
        table += "]";
    }
    m.header = {"generator: jobshop jobs=" + std::to_string(jobs) + " stages=" + std::to_string(stages) +
                    " seed=" + std::to_string(seed),
                "durations per job and stage:" + table,
                "model: canonical zero-wait pairwise sequencing disjunctions, cost = makespan Ms"};
    return m;
}

// ------------------------------------------------------------ PB / MaxSMT

PbEncoding encode_pb(const PbObjective& o)
{
    PbEncoding e;
    e.problem.ctx = o.ctx;
    ast::Context& ctx = e.problem.ctx;
    std::vector<Formula> parts{o.constraint};
    LinearExpr total;
    std::set<TermId> seen;
    for (const auto& [x, a] : o.terms) {
        if (ctx.sort_of(x) != ast::kBoolSort)
            throw ValidationError("pseudo-Boolean term over a non-Boolean variable " + ctx.name_of(x));
        if (!seen.insert(x).second)
            throw ValidationError("pseudo-Boolean atom " + ctx.name_of(x) + " appears twice");
        TermId v = ctx.fresh_var("pb!", ast::kRealSort);
        e.term_vars.push_back(v);
        LinearExpr lv = LinearExpr::of_term(v);
        Formula X = ctx.mk_bool(x);
        parts.push_back(ctx.mk_or(ctx.mk_not(X), ctx.mk_arith(lv, Relation::Eq, LinearExpr::of_constant(a))));
        parts.push_back(ctx.mk_or(X, ctx.mk_arith(lv, Relation::Eq, LinearExpr{})));
        Rational lo = min(a, Rational(0));
        Rational hi = max(a, Rational(0));
        parts.push_back(ctx.mk_arith(lv, Relation::Ge, LinearExpr::of_constant(lo)));
        parts.push_back(ctx.mk_arith(lv, Relation::Le, LinearExpr::of_constant(hi)));
        total.add_term(v, Rational(1));
    }
    TermId cost = ctx.fresh_var("cost", ast::kRealSort);
    parts.push_back(ctx.mk_arith(LinearExpr::of_term(cost), Relation::Eq, total));
    e.problem.cost = cost;
    e.problem.formula = ctx.mk_and(parts);
    return e;
}

MaxSmtEncoding encode_maxsmt(const MaxSmtInstance& m)
{
    PbObjective o;
    o.ctx = m.ctx;
    std::vector<Formula> parts = m.hard;
    MaxSmtEncoding out;
    for (std::size_t j = 0; j < m.soft.size(); ++j) {
        const auto& [clause, w] = m.soft[j];
        if (w.sign() <= 0)
            throw ValidationError("soft clause " + std::to_string(j) + " needs a positive weight");
        TermId x = o.ctx.fresh_var("relax!", ast::kBoolSort);
        out.relax.push_back(x);
        parts.push_back(o.ctx.mk_or(o.ctx.mk_bool(x), clause));
        o.terms.emplace_back(x, w);
    }
    o.constraint = o.ctx.mk_and(parts);
    out.pb = encode_pb(o);
    return out;
}

std::vector<std::size_t> satisfied_soft(const MaxSmtInstance& m, const ast::Model& model)
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < m.soft.size(); ++j)
        if (model.evaluate(m.ctx, m.soft[j].first))
            out.push_back(j);
    return out;
}

MaxSmtInstance pb_to_maxsmt(const PbObjective& o)
{
    MaxSmtInstance m;
    m.ctx = o.ctx;
    m.hard.push_back(o.constraint);
    for (const auto& [x, a] : o.terms) {
        if (a.sign() <= 0)
            throw ValidationError("weight of " + o.ctx.name_of(x) + " must be positive, got " + a.str());
        m.soft.emplace_back(m.ctx.mk_not(m.ctx.mk_bool(x)), a);
    }
    return m;
}

} // namespace omt::enc
