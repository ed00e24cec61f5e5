#include "omt/problem_io.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "omt/errors.hpp"

namespace omt::io {

using ast::Formula;
using ast::SortId;
using ast::LinearExpr;
using ast::Relation;

std::string exact(const Rational& r)
{
    return r.fraction_str();
}

// ---------------------------------------------------------------- lexing

namespace {

struct SExpr {
    bool is_list = false;
    bool quoted = false;
    std::string text;
    std::vector<SExpr> kids;
    std::size_t line = 0;
    std::size_t col = 0;

    bool is_symbol(std::string_view s) const { return !is_list && !quoted && text == s; }
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg)
{
    throw ParseError(msg, at.line, at.col);
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<std::string> leading_comments()
    {
        std::vector<std::string> out;
        std::size_t pos = 0;
        while (pos < text_.size()) {
            std::size_t end = text_.find('\n', pos);
            std::string_view line = text_.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
            if (line.substr(0, 2) == "; ")
                out.emplace_back(line.substr(2));
            else if (line == ";")
                out.emplace_back();
            else
                break;
            if (end == std::string_view::npos)
                break;
            pos = end + 1;
        }
        return out;
    }

    std::vector<SExpr> read_all()
    {
        std::vector<SExpr> out;
        for (;;) {
            skip_blank();
            if (pos_ >= text_.size())
                return out;
            out.push_back(read());
        }
    }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank()
    {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    SExpr read()
    {
        SExpr e;
        e.line = line_;
        e.col = col_;
        char c = text_[pos_];
        if (c == ')')
            throw ParseError("unexpected ')'", line_, col_);
        if (c == '(') {
            e.is_list = true;
            advance();
            for (;;) {
                skip_blank();
                if (pos_ >= text_.size())
                    throw ParseError("unbalanced '(': missing ')'", e.line, e.col);
                if (text_[pos_] == ')') {
                    advance();
                    return e;
                }
                e.kids.push_back(read());
            }
        }
        if (c == '|') {
            advance();
            e.quoted = true;
            while (pos_ < text_.size() && text_[pos_] != '|') {
                e.text += text_[pos_];
                advance();
            }
            if (pos_ >= text_.size())
                throw ParseError("unterminated quoted symbol", e.line, e.col);
            advance();
            return e;
        }
        if (c == '"')
            throw ParseError("string literals are not supported", line_, col_);
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' || d == '|' ||
                d == '"')
                break;
            e.text += d;
            advance();
        }
        return e;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool is_numeral(const SExpr& e)
{
    if (e.is_list || e.quoted || e.text.empty())
        return false;
    bool digit = false;
    for (std::size_t i = 0; i < e.text.size(); ++i) {
        char c = e.text[i];
        if (std::isdigit(static_cast<unsigned char>(c)))
            digit = true;
        else if (!(c == '.' || c == '/' || (i == 0 && c == '-')))
            return false;
    }
    return digit;
}

// ---------------------------------------------------------------- parsing

const std::set<std::string, std::less<>> kFormulaHeads = {"not", "and", "or", "=>", "=", "distinct", "xor",
                                                         "<=",  "<",   ">=", ">"};

class Parser {
public:
    Parser(ProblemFile& out, Dialect dialect) : f_(out), ctx_(out.ctx), dialect_(dialect) {}

    void command(const SExpr& e)
    {
        if (!e.is_list || e.kids.empty() || e.kids[0].is_list)
            fail(e, "expected a command");
        const std::string& head = e.kids[0].text;
        if (head == "declare-fun")
            declare_fun(e);
        else if (head == "declare-const")
            declare_const(e);
        else if (head == "declare-sort")
            declare_sort(e);
        else if (head == "assert" || head == "assert-hard")
            f_.assertions.push_back(formula(arg(e, 1, 2)));
        else if (head == "minimize" || head == "maximize")
            objective(e, head == "maximize");
        else if (head == "set-lower-bound" || head == "set-upper-bound")
            bound(e, head == "set-lower-bound");
        else if (head == "pb-term")
            pb_term(e);
        else if (head == "assert-soft")
            assert_soft(e);
        else if (head == "set-logic" || head == "set-info" || head == "set-option" || head == "check-sat" ||
                 head == "get-model" || head == "get-objectives" || head == "exit")
            return;
        else
            fail(e.kids[0], "unknown command '" + head + "'");
    }

    void finish()
    {
        if (dialect_ == Dialect::Problem && !f_.objective)
            throw ParseError("missing objective: add (minimize x) or (maximize x)", 0, 0);
    }

private:
    static const SExpr& arg(const SExpr& e, std::size_t i, std::size_t arity)
    {
        if (e.kids.size() != arity)
            fail(e, "'" + e.kids[0].text + "' expects " + std::to_string(arity - 1) + " argument(s)");
        return e.kids[i];
    }

    static std::string symbol(const SExpr& e)
    {
        if (e.is_list || e.text.empty())
            fail(e, "expected a symbol");
        return e.text;
    }

    SortId sort(const SExpr& e)
    {
        std::string name = symbol(e);
        if (name == "Real")
            return ast::kRealSort;
        if (name == "Bool")
            return ast::kBoolSort;
        if (name == "Int")
            fail(e, "sort Int is not supported; use Real");
        if (auto s = ctx_.find_sort(name))
            return *s;
        fail(e, "undeclared sort '" + name + "'");
    }

    void check_fresh(const SExpr& at, const std::string& name)
    {
        if (ctx_.find_var(name) || ctx_.find_fun(name) || kFormulaHeads.count(name) || name == "true" ||
            name == "false" || name == "+" || name == "-" || name == "*" || name == "/")
            fail(at, "symbol '" + name + "' is already declared or reserved");
    }

    void declare_var(const SExpr& at, const std::string& name, SortId s)
    {
        check_fresh(at, name);
        ctx_.declare_var(name, s);
        f_.declarations.push_back({Declaration::Kind::Var, name});
    }

    void declare_fun(const SExpr& e)
    {
        if (e.kids.size() != 4 || !e.kids[2].is_list)
            fail(e, "expected (declare-fun name (domain sorts) sort)");
        std::string name = symbol(e.kids[1]);
        std::vector<SortId> domain;
        for (const SExpr& s : e.kids[2].kids)
            domain.push_back(sort(s));
        SortId range = sort(e.kids[3]);
        if (domain.empty()) {
            declare_var(e.kids[1], name, range);
            return;
        }
        if (range == ast::kBoolSort)
            fail(e.kids[3], "Bool-valued functions are not supported");
        for (std::size_t i = 0; i < domain.size(); ++i)
            if (domain[i] == ast::kBoolSort)
                fail(e.kids[2].kids[i], "Bool arguments are not supported");
        check_fresh(e.kids[1], name);
        ctx_.declare_fun(name, domain, range);
        f_.declarations.push_back({Declaration::Kind::Fun, name});
    }

    void declare_const(const SExpr& e)
    {
        declare_var(e.kids.size() > 1 ? e.kids[1] : e, symbol(arg(e, 1, 3)), sort(e.kids[2]));
    }

    void declare_sort(const SExpr& e)
    {
        if (e.kids.size() != 2 && e.kids.size() != 3)
            fail(e, "expected (declare-sort name 0)");
        if (e.kids.size() == 3 && !e.kids[2].is_symbol("0"))
            fail(e.kids[2], "only sorts of arity 0 are supported");
        std::string name = symbol(e.kids[1]);
        if (name == "Real" || name == "Bool" || ctx_.find_sort(name))
            fail(e.kids[1], "sort '" + name + "' is already declared");
        ctx_.declare_sort(name);
        f_.declarations.push_back({Declaration::Kind::Sort, name});
    }

    TermId real_variable(const SExpr& e)
    {
        std::string name = symbol(e);
        auto v = ctx_.find_var(name);
        if (!v)
            fail(e, "undeclared symbol '" + name + "'");
        if (ctx_.sort_of(*v) != ast::kRealSort)
            fail(e, "'" + name + "' is not a Real variable");
        return *v;
    }

    void objective(const SExpr& e, bool maximize)
    {
        if (dialect_ != Dialect::Problem)
            fail(e, "objectives are not allowed in description files");
        const SExpr& x = arg(e, 1, 2);
        if (f_.objective)
            fail(e, "duplicate objective");
        f_.objective = real_variable(x);
        f_.maximize = maximize;
    }

    Rational constant(const SExpr& e)
    {
        if (is_numeral(e)) {
            try {
                return Rational::parse(e.text);
            } catch (const std::exception& ex) {
                fail(e, ex.what());
            }
        }
        Term t = term(e);
        if (t.sort != ast::kRealSort || !t.lin.is_constant())
            fail(e, "expected a rational constant");
        return t.lin.constant;
    }

    void bound(const SExpr& e, bool lower)
    {
        if (dialect_ != Dialect::Problem)
            fail(e, "bounds are not allowed in description files");
        Rational v = constant(arg(e, 1, 2));
        auto& slot = lower ? f_.lower_bound : f_.upper_bound;
        if (slot)
            fail(e, std::string("duplicate ") + (lower ? "lower" : "upper") + " bound");
        slot = v;
    }

    void pb_term(const SExpr& e)
    {
        if (dialect_ != Dialect::PbDescription)
            fail(e, "pb-term is only allowed in pseudo-Boolean descriptions");
        std::string name = symbol(arg(e, 1, 3));
        auto v = ctx_.find_var(name);
        if (!v || ctx_.sort_of(*v) != ast::kBoolSort)
            fail(e.kids[1], "'" + name + "' is not a declared Bool variable");
        f_.pb_terms.emplace_back(*v, constant(e.kids[2]));
    }

    void assert_soft(const SExpr& e)
    {
        if (dialect_ != Dialect::MaxSmtDescription)
            fail(e, "assert-soft is only allowed in MaxSMT descriptions");
        if (e.kids.size() != 2 && e.kids.size() != 4)
            fail(e, "expected (assert-soft formula :weight w)");
        Rational w(1);
        if (e.kids.size() == 4) {
            if (!e.kids[2].is_symbol(":weight"))
                fail(e.kids[2], "expected :weight");
            w = constant(e.kids[3]);
        }
        f_.soft.emplace_back(formula(e.kids[1]), w);
    }

    struct Term {
        SortId sort = ast::kRealSort;
        LinearExpr lin;   // Real terms
        TermId id = 0;    // uninterpreted sorts
    };

    TermId as_term_id(const Term& t)
    {
        return t.sort == ast::kRealSort ? ctx_.mk_linear(t.lin) : t.id;
    }

    bool is_formula(const SExpr& e)
    {
        if (e.is_list)
            return !e.kids.empty() && !e.kids[0].is_list && !e.kids[0].quoted && kFormulaHeads.count(e.kids[0].text);
        if (!e.quoted && (e.text == "true" || e.text == "false"))
            return true;
        auto v = ctx_.find_var(e.text);
        return v && ctx_.sort_of(*v) == ast::kBoolSort;
    }

    Term term(const SExpr& e)
    {
        if (is_numeral(e)) {
            Term t;
            t.lin = LinearExpr::of_constant(constant(e));
            return t;
        }
        if (!e.is_list) {
            auto v = ctx_.find_var(e.text);
            if (!v)
                fail(e, "undeclared symbol '" + e.text + "'");
            Term t;
            t.sort = ctx_.sort_of(*v);
            if (t.sort == ast::kBoolSort)
                fail(e, "'" + e.text + "' is Bool where a term is expected");
            if (t.sort == ast::kRealSort)
                t.lin = LinearExpr::of_term(*v);
            else
                t.id = *v;
            return t;
        }
        if (e.kids.empty() || e.kids[0].is_list)
            fail(e, "expected a term");
        const std::string& head = e.kids[0].text;
        std::size_t n = e.kids.size() - 1;
        auto real_arg = [&](std::size_t i) {
            Term t = term(e.kids[i]);
            if (t.sort != ast::kRealSort)
                fail(e.kids[i], "expected a Real term");
            return t.lin;
        };
        Term out;
        if (head == "+" && !e.kids[0].quoted) {
            if (n == 0)
                fail(e, "'+' needs arguments");
            for (std::size_t i = 1; i <= n; ++i)
                out.lin.add(real_arg(i));
            return out;
        }
        if (head == "-" && !e.kids[0].quoted) {
            if (n == 0)
                fail(e, "'-' needs arguments");
            out.lin = real_arg(1);
            if (n == 1)
                out.lin.scale(Rational(-1));
            for (std::size_t i = 2; i <= n; ++i)
                out.lin.add(real_arg(i), Rational(-1));
            return out;
        }
        if (head == "*" && !e.kids[0].quoted) {
            if (n == 0)
                fail(e, "'*' needs arguments");
            out.lin = LinearExpr::of_constant(Rational(1));
            for (std::size_t i = 1; i <= n; ++i) {
                LinearExpr a = real_arg(i);
                if (a.is_constant())
                    out.lin.scale(a.constant);
                else if (out.lin.is_constant())
                    a.scale(out.lin.constant), out.lin = a;
                else
                    fail(e, "nonlinear multiplication");
            }
            return out;
        }
        if (head == "/" && !e.kids[0].quoted) {
            if (n != 2)
                fail(e, "'/' expects 2 arguments");
            out.lin = real_arg(1);
            LinearExpr d = real_arg(2);
            if (!d.is_constant())
                fail(e.kids[2], "division by a non-constant");
            if (d.constant.is_zero())
                fail(e.kids[2], "division by zero");
            out.lin.scale(d.constant.inverse());
            return out;
        }
        auto fn = ctx_.find_fun(head);
        if (!fn)
            fail(e.kids[0], "undeclared function '" + head + "'");
        const ast::FuncDecl& decl = ctx_.func(*fn);
        if (decl.domain.size() != n)
            fail(e, "arity mismatch: '" + head + "' takes " + std::to_string(decl.domain.size()) + " argument(s), got " +
                        std::to_string(n));
        std::vector<TermId> args;
        for (std::size_t i = 1; i <= n; ++i) {
            Term a = term(e.kids[i]);
            if (a.sort != decl.domain[i - 1])
                fail(e.kids[i], "argument " + std::to_string(i) + " of '" + head + "' has the wrong sort");
            args.push_back(as_term_id(a));
        }
        TermId app = ctx_.mk_app(*fn, std::move(args));
        out.sort = decl.range;
        if (out.sort == ast::kRealSort)
            out.lin = LinearExpr::of_term(app);
        else
            out.id = app;
        return out;
    }

    Formula equal(const SExpr& at, const Term& a, const Term& b)
    {
        if (a.sort != b.sort)
            fail(at, "equality between different sorts");
        return ctx_.mk_eq(as_term_id(a), as_term_id(b));
    }

    Formula formula(const SExpr& e)
    {
        if (!e.is_list) {
            if (!e.quoted && e.text == "true")
                return ctx_.mk_true();
            if (!e.quoted && e.text == "false")
                return ctx_.mk_false();
            auto v = ctx_.find_var(e.text);
            if (!v)
                fail(e, "undeclared symbol '" + e.text + "'");
            if (ctx_.sort_of(*v) != ast::kBoolSort)
                fail(e, "'" + e.text + "' is not Bool");
            return ctx_.mk_bool(*v);
        }
        if (e.kids.empty() || e.kids[0].is_list || e.kids[0].quoted)
            fail(e, "expected a formula");
        const std::string& head = e.kids[0].text;
        std::size_t n = e.kids.size() - 1;
        auto kids = [&](std::size_t from) {
            std::vector<Formula> out;
            for (std::size_t i = from; i <= n; ++i)
                out.push_back(formula(e.kids[i]));
            return out;
        };
        if (head == "not") {
            return ctx_.mk_not(formula(arg(e, 1, 2)));
        }
        if (head == "and")
            return ctx_.mk_and(kids(1));
        if (head == "or")
            return ctx_.mk_or(kids(1));
        if (head == "=>") {
            if (n < 2)
                fail(e, "'=>' needs at least 2 arguments");
            auto fs = kids(1);
            Formula out = fs.back();
            for (std::size_t i = fs.size() - 1; i-- > 0;)
                out = ctx_.mk_implies(fs[i], out);
            return out;
        }
        if (head == "xor") {
            if (n < 2)
                fail(e, "'xor' needs at least 2 arguments");
            auto fs = kids(1);
            Formula out = fs.front();
            for (std::size_t i = 1; i < fs.size(); ++i)
                out = ctx_.mk_not(ctx_.mk_iff(out, fs[i]));
            return out;
        }
        if (head == "=" || head == "distinct") {
            if (n < 2)
                fail(e, "'" + head + "' needs at least 2 arguments");
            bool boolean = is_formula(e.kids[1]);
            std::vector<Formula> parts;
            if (boolean) {
                auto fs = kids(1);
                if (head == "=")
                    for (std::size_t i = 0; i + 1 < fs.size(); ++i)
                        parts.push_back(ctx_.mk_iff(fs[i], fs[i + 1]));
                else
                    for (std::size_t i = 0; i < fs.size(); ++i)
                        for (std::size_t j = i + 1; j < fs.size(); ++j)
                            parts.push_back(ctx_.mk_not(ctx_.mk_iff(fs[i], fs[j])));
                return ctx_.mk_and(parts);
            }
            std::vector<Term> ts;
            for (std::size_t i = 1; i <= n; ++i)
                ts.push_back(term(e.kids[i]));
            if (head == "=")
                for (std::size_t i = 0; i + 1 < ts.size(); ++i)
                    parts.push_back(equal(e, ts[i], ts[i + 1]));
            else
                for (std::size_t i = 0; i < ts.size(); ++i)
                    for (std::size_t j = i + 1; j < ts.size(); ++j)
                        parts.push_back(ctx_.mk_not(equal(e, ts[i], ts[j])));
            return ctx_.mk_and(parts);
        }
        std::optional<Relation> rel;
        if (head == "<=")
            rel = Relation::Le;
        else if (head == "<")
            rel = Relation::Lt;
        else if (head == ">=")
            rel = Relation::Ge;
        else if (head == ">")
            rel = Relation::Gt;
        if (rel) {
            if (n < 2)
                fail(e, "'" + head + "' needs at least 2 arguments");
            std::vector<LinearExpr> ts;
            for (std::size_t i = 1; i <= n; ++i) {
                Term t = term(e.kids[i]);
                if (t.sort != ast::kRealSort)
                    fail(e.kids[i], "expected a Real term");
                ts.push_back(t.lin);
            }
            std::vector<Formula> parts;
            for (std::size_t i = 0; i + 1 < ts.size(); ++i)
                parts.push_back(ctx_.mk_arith(ts[i], *rel, ts[i + 1]));
            return ctx_.mk_and(parts);
        }
        if (ctx_.find_fun(head))
            fail(e, "'" + head + "' is not Bool-valued");
        fail(e.kids[0], "unknown operator '" + head + "'");
    }

    ProblemFile& f_;
    ast::Context& ctx_;
    Dialect dialect_;
};

} // namespace

ProblemFile parse_problem(std::string_view text, Dialect dialect)
{
    ProblemFile f;
    Reader reader(text);
    f.comments = reader.leading_comments();
    Parser parser(f, dialect);
    for (const SExpr& e : reader.read_all())
        parser.command(e);
    parser.finish();
    return f;
}

// -------------------------------------------------------------- printing

namespace {

std::string sort_text(const ast::Context& ctx, SortId s)
{
    if (s == ast::kRealSort)
        return "Real";
    if (s == ast::kBoolSort)
        return "Bool";
    return ast::smt_symbol(ctx.sort_name(s));
}

} // namespace

std::string print_problem(const ProblemFile& p)
{
    const ast::Context& ctx = p.ctx;
    std::ostringstream out;
    for (const std::string& c : p.comments)
        out << (c.empty() ? ";" : "; " + c) << "\n";
    for (const Declaration& d : p.declarations) {
        switch (d.kind) {
        case Declaration::Kind::Sort:
            out << "(declare-sort " << ast::smt_symbol(d.name) << " 0)\n";
            break;
        case Declaration::Kind::Var: {
            TermId v = *ctx.find_var(d.name);
            out << "(declare-fun " << ast::smt_symbol(d.name) << " () " << sort_text(ctx, ctx.sort_of(v)) << ")\n";
            break;
        }
        case Declaration::Kind::Fun: {
            const ast::FuncDecl& f = ctx.func(*ctx.find_fun(d.name));
            out << "(declare-fun " << ast::smt_symbol(d.name) << " (";
            for (std::size_t i = 0; i < f.domain.size(); ++i)
                out << (i ? " " : "") << sort_text(ctx, f.domain[i]);
            out << ") " << sort_text(ctx, f.range) << ")\n";
            break;
        }
        }
    }
    for (Formula a : p.assertions)
        out << "(assert " << ctx.to_string(a) << ")\n";
    for (const auto& [x, w] : p.pb_terms)
        out << "(pb-term " << ast::smt_symbol(ctx.name_of(x)) << " " << ast::smt_number(w) << ")\n";
    for (const auto& [phi, w] : p.soft)
        out << "(assert-soft " << ctx.to_string(phi) << " :weight " << ast::smt_number(w) << ")\n";
    if (p.lower_bound)
        out << "(set-lower-bound " << exact(*p.lower_bound) << ")\n";
    if (p.upper_bound)
        out << "(set-upper-bound " << exact(*p.upper_bound) << ")\n";
    if (p.objective)
        out << (p.maximize ? "(maximize " : "(minimize ") << ast::smt_symbol(ctx.name_of(*p.objective)) << ")\n";
    return out.str();
}

ProblemFile problem_file_of(const OmtProblem& p, std::vector<std::string> comments)
{
    ProblemFile f;
    f.ctx = p.ctx;
    f.comments = std::move(comments);
    std::set<SortId> sorts;
    auto vars = ast::variables_of(f.ctx, p.formula);
    if (std::find(vars.begin(), vars.end(), p.cost) == vars.end())
        vars.push_back(p.cost);
    std::sort(vars.begin(), vars.end());
    for (TermId v : vars) {
        SortId s = f.ctx.sort_of(v);
        if (s != ast::kRealSort && s != ast::kBoolSort && sorts.insert(s).second)
            f.declarations.push_back({Declaration::Kind::Sort, f.ctx.sort_name(s)});
    }
    for (ast::FuncId fn = 0; fn < f.ctx.num_funcs(); ++fn) {
        const ast::FuncDecl& d = f.ctx.func(fn);
        for (SortId s : d.domain)
            if (s != ast::kRealSort && s != ast::kBoolSort && sorts.insert(s).second)
                f.declarations.push_back({Declaration::Kind::Sort, f.ctx.sort_name(s)});
    }
    for (TermId v : vars)
        f.declarations.push_back({Declaration::Kind::Var, f.ctx.name_of(v)});
    for (ast::FuncId fn = 0; fn < f.ctx.num_funcs(); ++fn)
        f.declarations.push_back({Declaration::Kind::Fun, f.ctx.func(fn).name});
    for (Formula c : ast::conjuncts(f.ctx, p.formula))
        f.assertions.push_back(c);
    f.objective = p.cost;
    f.lower_bound = p.lower_bound;
    f.upper_bound = p.upper_bound;
    return f;
}

OmtProblem to_omt_problem(const ProblemFile& f)
{
    if (!f.objective)
        throw UsageError("problem has no objective");
    OmtProblem p;
    p.ctx = f.ctx;
    std::vector<Formula> parts = f.assertions;
    p.cost = *f.objective;
    if (f.maximize) {
        p.cost = p.ctx.fresh_var("max!", ast::kRealSort);
        LinearExpr sum = LinearExpr::of_term(p.cost);
        sum.add_term(*f.objective, Rational(1));
        parts.push_back(p.ctx.mk_arith(sum, Relation::Eq));
    }
    p.formula = p.ctx.mk_and(parts);
    p.lower_bound = f.lower_bound;
    p.upper_bound = f.upper_bound;
    return p;
}

enc::PbObjective pb_objective_of(const ProblemFile& f)
{
    enc::PbObjective o;
    o.ctx = f.ctx;
    o.constraint = o.ctx.mk_and(f.assertions);
    o.terms = f.pb_terms;
    return o;
}

enc::MaxSmtInstance maxsmt_of(const ProblemFile& f)
{
    enc::MaxSmtInstance m;
    m.ctx = f.ctx;
    m.hard = f.assertions;
    m.soft = f.soft;
    return m;
}

// --------------------------------------------------------------- reports

const char* report_status(OmtResult::Status s)
{
    switch (s) {
    case OmtResult::Status::Optimum:
        return "optimal";
    case OmtResult::Status::Unsat:
        return "unsat";
    case OmtResult::Status::Unbounded:
        return "unbounded";
    case OmtResult::Status::Unknown:
        break;
    }
    return "unknown";
}

RunReport make_report(const ProblemFile& f, const OmtProblem& p, const OmtResult& r, const OmtOptions& options,
                      std::uint64_t seed, bool with_stats)
{
    RunReport out;
    out.status = report_status(r.status);
    out.maximize = f.maximize;
    out.objective_variable = f.objective ? f.ctx.name_of(*f.objective) : "";
    switch (r.status) {
    case OmtResult::Status::Optimum:
        out.objective = exact(f.maximize ? -r.value.real : r.value.real);
        out.strict = r.strict();
        break;
    case OmtResult::Status::Unsat:
        out.objective = f.maximize ? "-oo" : "+oo";
        break;
    case OmtResult::Status::Unbounded:
        out.objective = f.maximize ? "+oo" : "-oo";
        break;
    case OmtResult::Status::Unknown:
        out.objective = "none";
        break;
    }
    out.algorithm = algorithm_name(options.algorithm);
    out.search = strategy_name(options.strategy);
    out.lower_bound = p.lower_bound;
    out.upper_bound = p.upper_bound;
    out.seed = seed;
    if (r.model) {
        for (const Declaration& d : f.declarations) {
            if (d.kind != Declaration::Kind::Var)
                continue;
            TermId v = *f.ctx.find_var(d.name);
            SortId s = f.ctx.sort_of(v);
            std::string value;
            if (s == ast::kBoolSort) {
                auto it = r.model->booleans.find(v);
                value = it != r.model->booleans.end() && it->second ? "true" : "false";
            } else if (s == ast::kRealSort) {
                value = exact(r.model->value_of(p.ctx, v));
            } else {
                value = "@" + r.model->value_of(p.ctx, v).str();
            }
            out.model.emplace_back(d.name, value);
        }
    }
    if (with_stats)
        out.stats = r.stats;
    return out;
}

std::string format_report(const RunReport& r)
{
    std::ostringstream out;
    auto bound = [](const std::optional<Rational>& b) { return b ? exact(*b) : std::string("none"); };
    out << "status: " << r.status << "\n";
    out << "objective: " << r.objective << (r.strict ? " (strict)" : "") << "\n";
    out << "objective-sense: " << (r.maximize ? "maximize" : "minimize") << "\n";
    out << "objective-variable: " << r.objective_variable << "\n";
    out << "algorithm: " << r.algorithm << "\n";
    out << "search: " << r.search << "\n";
    out << "lower-bound: " << bound(r.lower_bound) << "\n";
    out << "upper-bound: " << bound(r.upper_bound) << "\n";
    out << "seed: " << r.seed << "\n";
    for (const auto& [name, value] : r.model)
        out << "model." << name << ": " << value << "\n";
    if (r.stats) {
        out << "smt-calls: " << r.stats->smt_calls << "\n";
        out << "minimize-calls: " << r.stats->minimize_calls << "\n";
        out << "conflicts: " << r.stats->conflicts << "\n";
        out << "decisions: " << r.stats->decisions << "\n";
        out << "pivots: " << r.stats->pivots << "\n";
        out << "binary-steps: " << r.stats->binary_steps << "\n";
        out << "time: " << std::fixed << std::setprecision(6) << r.stats->elapsed_seconds << "\n";
    }
    return out.str();
}

RunReport parse_report(std::string_view text)
{
    RunReport r;
    std::map<std::string, std::string> keys;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.empty())
            continue;
        auto colon = line.find(": ");
        if (colon == std::string::npos)
            throw ParseError("expected 'key: value'", line_no, 1);
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 2);
        if (key.rfind("model.", 0) == 0)
            r.model.emplace_back(key.substr(6), value);
        else
            keys[key] = value;
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = keys.find(key);
        if (it == keys.end())
            throw ParseError("report lacks '" + key + "'", 0, 0);
        return it->second;
    };
    auto bound = [&](const std::string& key) -> std::optional<Rational> {
        auto it = keys.find(key);
        if (it == keys.end() || it->second == "none")
            return std::nullopt;
        return Rational::parse(it->second);
    };
    r.status = need("status");
    std::string objective = need("objective");
    const std::string suffix = " (strict)";
    if (objective.size() > suffix.size() && objective.compare(objective.size() - suffix.size(), suffix.size(), suffix) == 0) {
        r.strict = true;
        objective.resize(objective.size() - suffix.size());
    }
    r.objective = objective;
    r.maximize = keys.count("objective-sense") && keys["objective-sense"] == "maximize";
    r.objective_variable = keys["objective-variable"];
    r.algorithm = keys["algorithm"];
    r.search = keys["search"];
    r.lower_bound = bound("lower-bound");
    r.upper_bound = bound("upper-bound");
    if (keys.count("seed"))
        r.seed = std::stoull(keys["seed"]);
    return r;
}

OmtResult result_of_report(const RunReport& r)
{
    if (r.status != "optimal")
        throw UsageError("certify needs an optimal report, got status '" + r.status + "'");
    OmtResult out;
    out.status = OmtResult::Status::Optimum;
    Rational v = Rational::parse(r.objective);
    out.value = DeltaRational(r.maximize ? -v : v, r.strict ? Rational(1) : Rational(0));
    return out;
}

} // namespace omt::io
