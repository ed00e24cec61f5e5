#include "omt/ast.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "omt/errors.hpp"

namespace omt::ast {

// ---------------------------------------------------------------------------
// LinearExpr

LinearExpr LinearExpr::of_constant(Rational c)
{
    LinearExpr e;
    e.constant = std::move(c);
    return e;
}

LinearExpr LinearExpr::of_term(TermId t, Rational coef)
{
    LinearExpr e;
    e.add_term(t, coef);
    return e;
}

void LinearExpr::add_term(TermId t, const Rational& coef)
{
    if (coef.is_zero())
        return;
    auto it = std::lower_bound(terms.begin(), terms.end(), t,
                               [](const auto& p, TermId id) { return p.first < id; });
    if (it != terms.end() && it->first == t) {
        it->second += coef;
        if (it->second.is_zero())
            terms.erase(it);
    } else {
        terms.insert(it, {t, coef});
    }
}

void LinearExpr::add(const LinearExpr& other, const Rational& scale)
{
    for (const auto& [t, c] : other.terms)
        add_term(t, c * scale);
    constant += other.constant * scale;
}

void LinearExpr::scale(const Rational& c)
{
    if (c.is_zero()) {
        terms.clear();
        constant = Rational(0);
        return;
    }
    for (auto& term : terms)
        term.second *= c;
    constant *= c;
}

std::optional<TermId> LinearExpr::as_term() const
{
    if (terms.size() == 1 && constant.is_zero() && terms[0].second == Rational(1))
        return terms[0].first;
    return std::nullopt;
}

Rational LinearExpr::coefficient(TermId t) const
{
    for (const auto& [id, c] : terms)
        if (id == t)
            return c;
    return Rational(0);
}

bool LinearExpr::contains(TermId t) const
{
    return std::any_of(terms.begin(), terms.end(), [t](const auto& p) { return p.first == t; });
}

std::strong_ordering operator<=>(const LinearExpr& a, const LinearExpr& b)
{
    std::size_t n = std::min(a.terms.size(), b.terms.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = a.terms[i].first <=> b.terms[i].first; c != 0)
            return c;
        if (auto c = a.terms[i].second <=> b.terms[i].second; c != 0)
            return c;
    }
    if (auto c = a.terms.size() <=> b.terms.size(); c != 0)
        return c;
    return a.constant <=> b.constant;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b)
{
    if (auto c = a.kind <=> b.kind; c != 0)
        return c;
    if (auto c = a.var <=> b.var; c != 0)
        return c;
    if (auto c = a.lhs <=> b.lhs; c != 0)
        return c;
    if (auto c = a.rel <=> b.rel; c != 0)
        return c;
    if (auto c = a.rhs <=> b.rhs; c != 0)
        return c;
    if (auto c = a.left <=> b.left; c != 0)
        return c;
    return a.right <=> b.right;
}

const char* relation_symbol(Relation r)
{
    switch (r) {
    case Relation::Eq:
        return "=";
    case Relation::Le:
        return "<=";
    case Relation::Lt:
        return "<";
    case Relation::Ge:
        return ">=";
    case Relation::Gt:
        return ">";
    }
    return "?";
}

namespace {

Relation flip(Relation r)
{
    switch (r) {
    case Relation::Le:
        return Relation::Ge;
    case Relation::Lt:
        return Relation::Gt;
    case Relation::Ge:
        return Relation::Le;
    case Relation::Gt:
        return Relation::Lt;
    case Relation::Eq:
        break;
    }
    return Relation::Eq;
}

bool compare_holds(const Rational& lhs, Relation r, const Rational& rhs)
{
    switch (r) {
    case Relation::Eq:
        return lhs == rhs;
    case Relation::Le:
        return lhs <= rhs;
    case Relation::Lt:
        return lhs < rhs;
    case Relation::Ge:
        return lhs >= rhs;
    case Relation::Gt:
        return lhs > rhs;
    }
    return false;
}

bool is_simple_symbol(std::string_view s)
{
    if (s.empty())
        return false;
    if (s[0] >= '0' && s[0] <= '9')
        return false;
    static const std::string_view extra = "~!@$%^&*_-+=<>.?/";
    for (char ch : s) {
        bool alnum = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9');
        if (!alnum && extra.find(ch) == std::string_view::npos)
            return false;
    }
    return true;
}

} // namespace

std::string smt_number(const Rational& r)
{
    Rational a = r.abs();
    std::string body = a.is_integer() ? a.str()
                                      : "(/ " + a.numerator().str() + " " + a.denominator().str() + ")";
    return r.sign() < 0 ? "(- " + body + ")" : body;
}

std::string smt_symbol(std::string_view name)
{
    if (is_simple_symbol(name))
        return std::string(name);
    return "|" + std::string(name) + "|";
}

// ---------------------------------------------------------------------------
// Context

Context::Context()
{
    sorts_ = {"Bool", "Real"};
    true_ = intern(FormulaNode{FormulaKind::True, 0, {}});
    false_ = intern(FormulaNode{FormulaKind::False, 0, {}});
}

SortId Context::declare_sort(const std::string& name)
{
    if (find_sort(name))
        throw UsageError("sort '" + name + "' already declared");
    sorts_.push_back(name);
    return static_cast<SortId>(sorts_.size() - 1);
}

std::optional<SortId> Context::find_sort(std::string_view name) const
{
    for (std::size_t i = 0; i < sorts_.size(); ++i)
        if (sorts_[i] == name)
            return static_cast<SortId>(i);
    return std::nullopt;
}

const std::string& Context::sort_name(SortId s) const { return sorts_.at(s); }

TermId Context::add_term(TermNode n)
{
    terms_.push_back(std::move(n));
    return static_cast<TermId>(terms_.size() - 1);
}

TermId Context::declare_var(const std::string& name, SortId sort)
{
    if (sort >= sorts_.size())
        throw UsageError("unknown sort for variable '" + name + "'");
    if (var_names_.count(name) || func_names_.count(name))
        throw UsageError("symbol '" + name + "' already declared");
    TermNode n;
    n.kind = TermKind::Variable;
    n.sort = sort;
    n.name = name;
    TermId id = add_term(std::move(n));
    var_names_.emplace(name, id);
    return id;
}

TermId Context::fresh_var(std::string_view prefix, SortId sort)
{
    for (;;) {
        std::string name = std::string(prefix) + std::to_string(++fresh_counter_);
        if (!var_names_.count(name) && !func_names_.count(name))
            return declare_var(name, sort);
    }
}

std::optional<TermId> Context::find_var(std::string_view name) const
{
    if (auto it = var_names_.find(name); it != var_names_.end())
        return it->second;
    return std::nullopt;
}

FuncId Context::declare_fun(const std::string& name, std::vector<SortId> domain, SortId range)
{
    if (var_names_.count(name) || func_names_.count(name))
        throw UsageError("symbol '" + name + "' already declared");
    if (domain.empty())
        throw UsageError("function '" + name + "' needs at least one argument");
    for (SortId s : domain)
        if (s == kBoolSort || s >= sorts_.size())
            throw UsageError("unsupported argument sort for '" + name + "'");
    if (range == kBoolSort || range >= sorts_.size())
        throw UsageError("unsupported range sort for '" + name + "'");
    funcs_.push_back(FuncDecl{name, std::move(domain), range});
    FuncId id = static_cast<FuncId>(funcs_.size() - 1);
    func_names_.emplace(name, id);
    return id;
}

std::optional<FuncId> Context::find_fun(std::string_view name) const
{
    if (auto it = func_names_.find(name); it != func_names_.end())
        return it->second;
    return std::nullopt;
}

TermId Context::mk_app(FuncId f, std::vector<TermId> args)
{
    const FuncDecl& decl = funcs_.at(f);
    if (args.size() != decl.domain.size())
        throw UsageError("arity mismatch for '" + decl.name + "'");
    for (std::size_t i = 0; i < args.size(); ++i)
        if (sort_of(args[i]) != decl.domain[i])
            throw UsageError("sort mismatch in argument " + std::to_string(i + 1) + " of '" + decl.name + "'");
    auto key = std::make_pair(f, args);
    if (auto it = app_index_.find(key); it != app_index_.end())
        return it->second;
    TermNode n;
    n.kind = TermKind::Application;
    n.sort = decl.range;
    n.func = f;
    n.args = std::move(args);
    TermId id = add_term(std::move(n));
    app_index_.emplace(std::move(key), id);
    return id;
}

LinearExpr Context::as_linear(TermId t) const
{
    const TermNode& n = term(t);
    if (n.sort != kRealSort)
        throw UsageError("arithmetic over a non-Real term");
    if (n.kind == TermKind::Linear)
        return n.linear;
    return LinearExpr::of_term(t);
}

TermId Context::mk_linear(const LinearExpr& input)
{
    LinearExpr e;
    e.constant = input.constant;
    for (const auto& [t, c] : input.terms)
        e.add(as_linear(t), c);
    if (auto single = e.as_term())
        return *single;
    if (auto it = linear_index_.find(e); it != linear_index_.end())
        return it->second;
    TermNode n;
    n.kind = TermKind::Linear;
    n.sort = kRealSort;
    n.linear = e;
    TermId id = add_term(std::move(n));
    linear_index_.emplace(std::move(e), id);
    return id;
}

Formula Context::intern(FormulaNode n)
{
    std::vector<std::uint32_t> ids;
    ids.reserve(n.kids.size());
    for (Formula k : n.kids)
        ids.push_back(k.id());
    auto key = std::make_tuple(n.kind, n.atom, std::move(ids));
    if (auto it = node_index_.find(key); it != node_index_.end())
        return Formula(it->second);
    nodes_.push_back(std::move(n));
    auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
    node_index_.emplace(std::move(key), id);
    return Formula(id);
}

AtomId Context::intern_atom(Atom a)
{
    if (auto it = atom_index_.find(a); it != atom_index_.end())
        return it->second;
    atoms_.push_back(a);
    auto id = static_cast<AtomId>(atoms_.size() - 1);
    atom_index_.emplace(std::move(a), id);
    return id;
}

Formula Context::mk_atom(const AtomLiteral& lit)
{
    if (lit.atom >= atoms_.size())
        throw UsageError("unknown atom");
    Formula f;
    if (auto it = atom_formula_.find(lit.atom); it != atom_formula_.end()) {
        f = it->second;
    } else {
        f = intern(FormulaNode{FormulaKind::Atom, lit.atom, {}});
        atom_formula_.emplace(lit.atom, f);
    }
    return lit.positive ? f : mk_not(f);
}

Formula Context::mk_bool(TermId var)
{
    if (sort_of(var) != kBoolSort || !is_variable(var))
        throw UsageError("propositional atom over a non-Bool term");
    Atom a;
    a.kind = AtomKind::Boolean;
    a.var = var;
    return mk_atom({intern_atom(std::move(a)), true});
}

Formula Context::mk_not(Formula f)
{
    const FormulaNode& n = node(f);
    if (n.kind == FormulaKind::True)
        return false_;
    if (n.kind == FormulaKind::False)
        return true_;
    if (n.kind == FormulaKind::Not)
        return n.kids[0];
    return intern(FormulaNode{FormulaKind::Not, 0, {f}});
}

Formula Context::mk_and(std::vector<Formula> kids)
{
    std::vector<Formula> kept;
    for (Formula k : kids) {
        auto kind = node(k).kind;
        if (kind == FormulaKind::False)
            return false_;
        if (kind != FormulaKind::True)
            kept.push_back(k);
    }
    if (kept.empty())
        return true_;
    if (kept.size() == 1)
        return kept[0];
    return intern(FormulaNode{FormulaKind::And, 0, std::move(kept)});
}

Formula Context::mk_or(std::vector<Formula> kids)
{
    std::vector<Formula> kept;
    for (Formula k : kids) {
        auto kind = node(k).kind;
        if (kind == FormulaKind::True)
            return true_;
        if (kind != FormulaKind::False)
            kept.push_back(k);
    }
    if (kept.empty())
        return false_;
    if (kept.size() == 1)
        return kept[0];
    return intern(FormulaNode{FormulaKind::Or, 0, std::move(kept)});
}

Formula Context::mk_implies(Formula a, Formula b)
{
    auto ka = node(a).kind;
    auto kb = node(b).kind;
    if (ka == FormulaKind::True)
        return b;
    if (ka == FormulaKind::False || kb == FormulaKind::True)
        return true_;
    if (kb == FormulaKind::False)
        return mk_not(a);
    return intern(FormulaNode{FormulaKind::Implies, 0, {a, b}});
}

Formula Context::mk_iff(Formula a, Formula b)
{
    if (a == b)
        return true_;
    auto ka = node(a).kind;
    auto kb = node(b).kind;
    if (ka == FormulaKind::True)
        return b;
    if (ka == FormulaKind::False)
        return mk_not(b);
    if (kb == FormulaKind::True)
        return a;
    if (kb == FormulaKind::False)
        return mk_not(a);
    return intern(FormulaNode{FormulaKind::Iff, 0, {a, b}});
}

Formula Context::mk_arith(const LinearExpr& lhs, Relation rel, const LinearExpr& rhs)
{
    LinearExpr e;
    e.add(lhs);
    e.add(rhs, Rational(-1));
    LinearExpr flat;
    flat.constant = e.constant;
    for (const auto& [t, c] : e.terms)
        flat.add(as_linear(t), c);

    Rational bound = -flat.constant;
    flat.constant = Rational(0);
    if (flat.terms.empty())
        return compare_holds(Rational(0), rel, bound) ? true_ : false_;

    Rational lead = flat.terms.front().second;
    Rational scale = lead.abs().inverse();
    if (lead.sign() < 0) {
        scale = -scale;
        rel = flip(rel);
    }
    flat.scale(scale);
    bound *= scale;

    Atom a;
    a.kind = AtomKind::Arith;
    a.lhs = std::move(flat);
    a.rel = rel;
    a.rhs = std::move(bound);
    return mk_atom({intern_atom(std::move(a)), true});
}

Formula Context::mk_eq(TermId a, TermId b)
{
    SortId sa = sort_of(a);
    if (sa != sort_of(b))
        throw UsageError("equality between different sorts");
    if (sa == kBoolSort)
        return mk_iff(mk_bool(a), mk_bool(b));
    if (a == b)
        return true_;
    const TermNode& na = term(a);
    const TermNode& nb = term(b);
    bool uninterpreted = sa != kRealSort;
    bool linear = na.kind == TermKind::Linear || nb.kind == TermKind::Linear;
    bool both_vars = na.kind == TermKind::Variable && nb.kind == TermKind::Variable;
    if (!uninterpreted && (linear || both_vars))
        return mk_arith(as_linear(a), Relation::Eq, as_linear(b));
    Atom atom;
    atom.kind = AtomKind::Equality;
    atom.left = std::min(a, b);
    atom.right = std::max(a, b);
    return mk_atom({intern_atom(std::move(atom)), true});
}

bool Context::is_arith_pure(AtomId id) const
{
    const Atom& a = atom(id);
    if (a.kind != AtomKind::Arith)
        return false;
    return std::all_of(a.lhs.terms.begin(), a.lhs.terms.end(),
                       [this](const auto& p) { return is_variable(p.first); });
}

bool Context::is_euf_pure(AtomId id) const
{
    const Atom& a = atom(id);
    if (a.kind != AtomKind::Equality)
        return false;
    std::function<bool(TermId)> ok = [&](TermId t) {
        const TermNode& n = term(t);
        if (n.kind == TermKind::Linear)
            return false;
        return std::all_of(n.args.begin(), n.args.end(), ok);
    };
    return ok(a.left) && ok(a.right);
}

bool Context::atom_mentions(AtomId id, TermId var) const
{
    const Atom& a = atom(id);
    switch (a.kind) {
    case AtomKind::Boolean:
        return a.var == var;
    case AtomKind::Arith:
        return a.lhs.contains(var);
    case AtomKind::Equality: {
        std::function<bool(TermId)> has = [&](TermId t) {
            if (t == var)
                return true;
            const TermNode& n = term(t);
            if (n.kind == TermKind::Linear)
                return std::any_of(n.linear.terms.begin(), n.linear.terms.end(),
                                   [&](const auto& p) { return has(p.first); });
            return std::any_of(n.args.begin(), n.args.end(), has);
        };
        return has(a.left) || has(a.right);
    }
    }
    return false;
}

std::string Context::name_of(TermId var) const { return term(var).name; }

std::string Context::to_string(TermId t) const
{
    const TermNode& n = term(t);
    switch (n.kind) {
    case TermKind::Variable:
        return smt_symbol(n.name);
    case TermKind::Application: {
        std::string s = "(" + smt_symbol(func(n.func).name);
        for (TermId a : n.args)
            s += " " + to_string(a);
        return s + ")";
    }
    case TermKind::Linear:
        return to_string(n.linear);
    }
    return "?";
}

std::string Context::to_string(const LinearExpr& e) const
{
    std::vector<std::string> parts;
    for (const auto& [t, c] : e.terms) {
        if (c == Rational(1))
            parts.push_back(to_string(t));
        else if (c == Rational(-1))
            parts.push_back("(- " + to_string(t) + ")");
        else
            parts.push_back("(* " + smt_number(c) + " " + to_string(t) + ")");
    }
    if (!e.constant.is_zero() || parts.empty())
        parts.push_back(smt_number(e.constant));
    if (parts.size() == 1)
        return parts[0];
    std::string s = "(+";
    for (const auto& p : parts)
        s += " " + p;
    return s + ")";
}

std::string Context::atom_to_string(AtomId id) const
{
    const Atom& a = atom(id);
    switch (a.kind) {
    case AtomKind::Boolean:
        return smt_symbol(term(a.var).name);
    case AtomKind::Equality:
        return "(= " + to_string(a.left) + " " + to_string(a.right) + ")";
    case AtomKind::Arith:
        return std::string("(") + relation_symbol(a.rel) + " " + to_string(a.lhs) + " " + smt_number(a.rhs) + ")";
    }
    return "?";
}

std::string Context::literal_to_string(const AtomLiteral& l) const
{
    return l.positive ? atom_to_string(l.atom) : "(not " + atom_to_string(l.atom) + ")";
}

std::string Context::to_string(Formula f) const
{
    const FormulaNode& n = node(f);
    auto nary = [&](const char* op) {
        std::string s = std::string("(") + op;
        for (Formula k : n.kids)
            s += " " + to_string(k);
        return s + ")";
    };
    switch (n.kind) {
    case FormulaKind::True:
        return "true";
    case FormulaKind::False:
        return "false";
    case FormulaKind::Atom:
        return atom_to_string(n.atom);
    case FormulaKind::Not:
        return nary("not");
    case FormulaKind::And:
        return nary("and");
    case FormulaKind::Or:
        return nary("or");
    case FormulaKind::Implies:
        return nary("=>");
    case FormulaKind::Iff:
        return nary("=");
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Traversals

namespace {

template <typename Visit>
void visit_dag(const Context& ctx, Formula root, Visit&& visit)
{
    std::set<std::uint32_t> seen;
    std::vector<Formula> stack{root};
    // Explicit pre-order: push children in reverse so the leftmost is visited first.
    while (!stack.empty()) {
        Formula f = stack.back();
        stack.pop_back();
        if (!seen.insert(f.id()).second)
            continue;
        visit(f);
        const auto& kids = ctx.node(f).kids;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
            stack.push_back(*it);
    }
}

void collect_term_vars(const Context& ctx, TermId t, std::set<TermId>& out)
{
    const TermNode& n = ctx.term(t);
    switch (n.kind) {
    case TermKind::Variable:
        out.insert(t);
        break;
    case TermKind::Application:
        for (TermId a : n.args)
            collect_term_vars(ctx, a, out);
        break;
    case TermKind::Linear:
        for (const auto& [id, c] : n.linear.terms)
            collect_term_vars(ctx, id, out);
        break;
    }
}

/// Rebuilds f bottom-up, replacing each atom node through `leaf`.
Formula substitute(Context& ctx, Formula f, const std::function<Formula(AtomId)>& leaf,
                   std::map<std::uint32_t, Formula>& memo)
{
    if (auto it = memo.find(f.id()); it != memo.end())
        return it->second;
    FormulaNode n = ctx.node(f);
    Formula out;
    switch (n.kind) {
    case FormulaKind::True:
    case FormulaKind::False:
        out = f;
        break;
    case FormulaKind::Atom:
        out = leaf(n.atom);
        break;
    default: {
        std::vector<Formula> kids;
        for (Formula k : n.kids)
            kids.push_back(substitute(ctx, k, leaf, memo));
        switch (n.kind) {
        case FormulaKind::Not:
            out = ctx.mk_not(kids[0]);
            break;
        case FormulaKind::And:
            out = ctx.mk_and(std::move(kids));
            break;
        case FormulaKind::Or:
            out = ctx.mk_or(std::move(kids));
            break;
        case FormulaKind::Implies:
            out = ctx.mk_implies(kids[0], kids[1]);
            break;
        case FormulaKind::Iff:
            out = ctx.mk_iff(kids[0], kids[1]);
            break;
        default:
            break;
        }
    }
    }
    memo.emplace(f.id(), out);
    return out;
}

} // namespace

std::vector<AtomId> atoms_of(const Context& ctx, Formula f)
{
    std::vector<AtomId> out;
    std::set<AtomId> seen;
    visit_dag(ctx, f, [&](Formula g) {
        const FormulaNode& n = ctx.node(g);
        if (n.kind == FormulaKind::Atom && seen.insert(n.atom).second)
            out.push_back(n.atom);
    });
    return out;
}

std::vector<TermId> variables_of(const Context& ctx, Formula f)
{
    std::set<TermId> vars;
    for (AtomId id : atoms_of(ctx, f)) {
        const Atom& a = ctx.atom(id);
        switch (a.kind) {
        case AtomKind::Boolean:
            vars.insert(a.var);
            break;
        case AtomKind::Arith:
            for (const auto& [t, c] : a.lhs.terms)
                collect_term_vars(ctx, t, vars);
            break;
        case AtomKind::Equality:
            collect_term_vars(ctx, a.left, vars);
            collect_term_vars(ctx, a.right, vars);
            break;
        }
    }
    return {vars.begin(), vars.end()};
}

bool is_pure(const Context& ctx, Formula f)
{
    for (AtomId id : atoms_of(ctx, f)) {
        const Atom& a = ctx.atom(id);
        if (a.kind == AtomKind::Arith && !ctx.is_arith_pure(id))
            return false;
        if (a.kind == AtomKind::Equality && !ctx.is_euf_pure(id))
            return false;
    }
    return true;
}

std::vector<Formula> conjuncts(const Context& ctx, Formula f)
{
    std::vector<Formula> out;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        const FormulaNode& n = ctx.node(g);
        if (n.kind == FormulaKind::And) {
            for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it)
                stack.push_back(*it);
        } else if (n.kind != FormulaKind::True) {
            out.push_back(g);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Boolean abstraction

BooleanAbstraction boolean_abstraction(Context& ctx, Formula f)
{
    BooleanAbstraction result;
    std::map<AtomId, Formula> props;
    std::map<std::uint32_t, Formula> memo;
    result.skeleton = substitute(
        ctx, f,
        [&](AtomId a) {
            if (ctx.atom(a).kind == AtomKind::Boolean)
                return ctx.mk_atom({a, true});
            if (auto it = props.find(a); it != props.end())
                return it->second;
            Formula p = ctx.mk_bool(ctx.fresh_var("abs!", kBoolSort));
            props.emplace(a, p);
            result.map.emplace_back(ctx.node(p).atom, a);
            return p;
        },
        memo);
    return result;
}

Formula refine(Context& ctx, Formula skeleton, const std::vector<std::pair<AtomId, AtomId>>& map)
{
    std::map<AtomId, AtomId> back(map.begin(), map.end());
    std::map<std::uint32_t, Formula> memo;
    return substitute(
        ctx, skeleton,
        [&](AtomId a) {
            auto it = back.find(a);
            return ctx.mk_atom({it == back.end() ? a : it->second, true});
        },
        memo);
}

Formula refine(Context& ctx, const BooleanAbstraction& abstraction)
{
    return refine(ctx, abstraction.skeleton, abstraction.map);
}

// ---------------------------------------------------------------------------
// CNF conversion

namespace {

class Cnfizer {
public:
    explicit Cnfizer(Context& ctx) : ctx_(ctx) {}

    void top(Formula f)
    {
        const FormulaNode& n = ctx_.node(f);
        switch (n.kind) {
        case FormulaKind::True:
            return;
        case FormulaKind::False:
            emit({});
            return;
        case FormulaKind::And:
            for (Formula k : n.kids)
                top(k);
            return;
        case FormulaKind::Or: {
            Clause c;
            gather_or(f, c);
            emit(std::move(c));
            return;
        }
        case FormulaKind::Implies:
            emit({~lit(n.kids[0], false), lit(n.kids[1], true)});
            return;
        case FormulaKind::Not:
            top_negated(n.kids[0]);
            return;
        default:
            emit({lit(f, true)});
            return;
        }
    }

    std::vector<Clause> take() { return std::move(clauses_); }

private:
    struct Label {
        AtomId atom;
        bool positive_done = false;
        bool negative_done = false;
    };

    void top_negated(Formula g)
    {
        const FormulaNode& n = ctx_.node(g);
        switch (n.kind) {
        case FormulaKind::Or:
            for (Formula k : n.kids)
                top(ctx_.mk_not(k));
            return;
        case FormulaKind::Implies:
            top(n.kids[0]);
            top(ctx_.mk_not(n.kids[1]));
            return;
        case FormulaKind::And: {
            Clause c;
            for (Formula k : n.kids)
                c.push_back(~lit(k, false));
            emit(std::move(c));
            return;
        }
        default:
            emit({~lit(g, false)});
            return;
        }
    }

    void gather_or(Formula f, Clause& out)
    {
        const FormulaNode& n = ctx_.node(f);
        if (n.kind == FormulaKind::Or) {
            for (Formula k : n.kids)
                gather_or(k, out);
        } else {
            out.push_back(lit(f, true));
        }
    }

    // Literal standing for f, with f's definition emitted for the given polarity.
    AtomLiteral lit(Formula f, bool positive)
    {
        const FormulaNode& n = ctx_.node(f);
        if (n.kind == FormulaKind::Atom)
            return {n.atom, true};
        if (n.kind == FormulaKind::Not)
            return ~lit(n.kids[0], !positive);
        if (n.kind == FormulaKind::True || n.kind == FormulaKind::False)
            throw UsageError("constant below the top level of a formula");

        auto it = labels_.find(f.id());
        if (it == labels_.end()) {
            AtomId a = ctx_.node(ctx_.mk_bool(ctx_.fresh_var("lbl!", kBoolSort))).atom;
            it = labels_.emplace(f.id(), Label{a}).first;
        }
        AtomLiteral label{it->second.atom, true};
        if (positive && !it->second.positive_done) {
            it->second.positive_done = true;
            define_positive(n, label);
        } else if (!positive && !labels_.at(f.id()).negative_done) {
            labels_.at(f.id()).negative_done = true;
            define_negative(n, label);
        }
        return label;
    }

    // label -> f
    void define_positive(FormulaNode n, AtomLiteral label)
    {
        switch (n.kind) {
        case FormulaKind::And:
            for (Formula k : n.kids)
                emit({~label, lit(k, true)});
            break;
        case FormulaKind::Or: {
            Clause c{~label};
            for (Formula k : n.kids)
                c.push_back(lit(k, true));
            emit(std::move(c));
            break;
        }
        case FormulaKind::Implies:
            emit({~label, ~lit(n.kids[0], false), lit(n.kids[1], true)});
            break;
        case FormulaKind::Iff: {
            AtomLiteral ap = lit(n.kids[0], true), an = lit(n.kids[0], false);
            AtomLiteral bp = lit(n.kids[1], true), bn = lit(n.kids[1], false);
            emit({~label, ~an, bp});
            emit({~label, ap, ~bn});
            break;
        }
        default:
            break;
        }
    }

    // f -> label
    void define_negative(FormulaNode n, AtomLiteral label)
    {
        switch (n.kind) {
        case FormulaKind::And: {
            Clause c{label};
            for (Formula k : n.kids)
                c.push_back(~lit(k, false));
            emit(std::move(c));
            break;
        }
        case FormulaKind::Or:
            for (Formula k : n.kids)
                emit({label, ~lit(k, false)});
            break;
        case FormulaKind::Implies:
            emit({label, lit(n.kids[0], true)});
            emit({label, ~lit(n.kids[1], false)});
            break;
        case FormulaKind::Iff: {
            AtomLiteral ap = lit(n.kids[0], true), an = lit(n.kids[0], false);
            AtomLiteral bp = lit(n.kids[1], true), bn = lit(n.kids[1], false);
            emit({label, ~an, ~bn});
            emit({label, ap, bp});
            break;
        }
        default:
            break;
        }
    }

    void emit(Clause c)
    {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if (c[i].atom == c[i + 1].atom)
                return; // tautology
        clauses_.push_back(std::move(c));
    }

    Context& ctx_;
    std::map<std::uint32_t, Label> labels_;
    std::vector<Clause> clauses_;
};

} // namespace

std::vector<Clause> cnfize(Context& ctx, Formula f)
{
    Cnfizer cnf(ctx);
    cnf.top(f);
    return cnf.take();
}

// ---------------------------------------------------------------------------
// Purification and interface variables

namespace {

class Purifier {
public:
    explicit Purifier(Context& ctx) : ctx_(ctx) {}

    PurifyResult run(Formula f)
    {
        std::map<std::uint32_t, Formula> memo;
        Formula body = substitute(ctx_, f, [this](AtomId a) { return atom(a); }, memo);
        if (defs_.empty())
            return {body, interface_variables(ctx_, body)};
        std::vector<Formula> all{body};
        all.insert(all.end(), defs_.begin(), defs_.end());
        Formula out = ctx_.mk_and(std::move(all));
        return {out, interface_variables(ctx_, out)};
    }

private:
    Formula atom(AtomId id)
    {
        Atom a = ctx_.atom(id);
        switch (a.kind) {
        case AtomKind::Boolean:
            return ctx_.mk_atom({id, true});
        case AtomKind::Arith: {
            if (ctx_.is_arith_pure(id))
                return ctx_.mk_atom({id, true});
            LinearExpr lhs = arith_part(a.lhs);
            return ctx_.mk_arith(lhs, a.rel, LinearExpr::of_constant(a.rhs));
        }
        case AtomKind::Equality:
            if (ctx_.is_euf_pure(id))
                return ctx_.mk_atom({id, true});
            return ctx_.mk_eq(euf_term(a.left), euf_term(a.right));
        }
        return ctx_.mk_atom({id, true});
    }

    // Replaces application terms inside an arithmetic expression by variables.
    LinearExpr arith_part(const LinearExpr& e)
    {
        LinearExpr out = LinearExpr::of_constant(e.constant);
        for (const auto& [t, c] : e.terms) {
            if (ctx_.is_variable(t))
                out.add_term(t, c);
            else
                out.add_term(var_for_app(euf_term(t)), c);
        }
        return out;
    }

    // Rewrites an uninterpreted term so that it has no arithmetic arguments.
    TermId euf_term(TermId t)
    {
        const TermNode n = ctx_.term(t);
        if (n.kind == TermKind::Variable)
            return t;
        if (n.kind == TermKind::Linear)
            return var_for_linear(t);
        std::vector<TermId> args;
        for (TermId arg : n.args)
            args.push_back(ctx_.term(arg).kind == TermKind::Linear ? var_for_linear(arg) : euf_term(arg));
        return ctx_.mk_app(n.func, std::move(args));
    }

    TermId var_for_app(TermId app)
    {
        if (auto it = app_vars_.find(app); it != app_vars_.end())
            return it->second;
        TermId w = ctx_.fresh_var("pur!", kRealSort);
        app_vars_.emplace(app, w);
        defs_.push_back(ctx_.mk_eq(w, app));
        return w;
    }

    TermId var_for_linear(TermId lin)
    {
        if (auto it = linear_vars_.find(lin); it != linear_vars_.end())
            return it->second;
        LinearExpr pure = arith_part(ctx_.term(lin).linear);
        TermId w = ctx_.fresh_var("pur!", kRealSort);
        linear_vars_.emplace(lin, w);
        defs_.push_back(ctx_.mk_arith(LinearExpr::of_term(w), Relation::Eq, pure));
        return w;
    }

    Context& ctx_;
    std::map<TermId, TermId> app_vars_;
    std::map<TermId, TermId> linear_vars_;
    std::vector<Formula> defs_;
};

} // namespace

PurifyResult purify(Context& ctx, Formula f) { return Purifier(ctx).run(f); }

std::vector<TermId> interface_variables(const Context& ctx, Formula f)
{
    std::set<TermId> arith_vars;
    std::set<TermId> euf_vars;
    for (AtomId id : atoms_of(ctx, f)) {
        const Atom& a = ctx.atom(id);
        if (a.kind == AtomKind::Arith) {
            for (const auto& [t, c] : a.lhs.terms)
                if (ctx.is_variable(t))
                    arith_vars.insert(t);
        } else if (a.kind == AtomKind::Equality) {
            collect_term_vars(ctx, a.left, euf_vars);
            collect_term_vars(ctx, a.right, euf_vars);
        }
    }
    std::vector<TermId> out;
    for (TermId t : arith_vars)
        if (euf_vars.count(t) && ctx.sort_of(t) == kRealSort)
            out.push_back(t);
    std::sort(out.begin(), out.end(),
              [&](TermId a, TermId b) { return ctx.name_of(a) < ctx.name_of(b); });
    return out;
}

std::vector<InterfaceEquality> interface_equalities(Context& ctx, std::vector<TermId> vars)
{
    std::sort(vars.begin(), vars.end(), [&](TermId a, TermId b) { return ctx.name_of(a) < ctx.name_of(b); });
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<InterfaceEquality> out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
            InterfaceEquality ie;
            ie.first = vars[i];
            ie.second = vars[j];
            auto x = LinearExpr::of_term(vars[i]);
            auto y = LinearExpr::of_term(vars[j]);
            ie.eq = ctx.node(ctx.mk_arith(x, Relation::Eq, y)).atom;
            ie.lt = ctx.node(ctx.mk_arith(x, Relation::Lt, y)).atom;
            ie.gt = ctx.node(ctx.mk_arith(x, Relation::Gt, y)).atom;
            out.push_back(ie);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model evaluation

Rational Model::value_of(const Context& ctx, TermId t) const
{
    const TermNode& n = ctx.term(t);
    switch (n.kind) {
    case TermKind::Variable: {
        auto it = values.find(t);
        return it == values.end() ? Rational(0) : it->second;
    }
    case TermKind::Application: {
        std::vector<Rational> args;
        for (TermId a : n.args)
            args.push_back(value_of(ctx, a));
        auto table = functions.find(n.func);
        if (table == functions.end())
            return Rational(0);
        auto it = table->second.find(args);
        return it == table->second.end() ? Rational(0) : it->second;
    }
    case TermKind::Linear:
        return value_of(ctx, n.linear);
    }
    return Rational(0);
}

Rational Model::value_of(const Context& ctx, const LinearExpr& e) const
{
    Rational v = e.constant;
    for (const auto& [t, c] : e.terms)
        v += c * value_of(ctx, t);
    return v;
}

bool Model::holds(const Context& ctx, AtomId id) const
{
    const Atom& a = ctx.atom(id);
    switch (a.kind) {
    case AtomKind::Boolean: {
        auto it = booleans.find(a.var);
        return it != booleans.end() && it->second;
    }
    case AtomKind::Arith:
        return compare_holds(value_of(ctx, a.lhs), a.rel, a.rhs);
    case AtomKind::Equality:
        return value_of(ctx, a.left) == value_of(ctx, a.right);
    }
    return false;
}

bool Model::evaluate(const Context& ctx, Formula f) const
{
    const FormulaNode& n = ctx.node(f);
    switch (n.kind) {
    case FormulaKind::True:
        return true;
    case FormulaKind::False:
        return false;
    case FormulaKind::Atom:
        return holds(ctx, n.atom);
    case FormulaKind::Not:
        return !evaluate(ctx, n.kids[0]);
    case FormulaKind::And:
        return std::all_of(n.kids.begin(), n.kids.end(), [&](Formula k) { return evaluate(ctx, k); });
    case FormulaKind::Or:
        return std::any_of(n.kids.begin(), n.kids.end(), [&](Formula k) { return evaluate(ctx, k); });
    case FormulaKind::Implies:
        return !evaluate(ctx, n.kids[0]) || evaluate(ctx, n.kids[1]);
    case FormulaKind::Iff:
        return evaluate(ctx, n.kids[0]) == evaluate(ctx, n.kids[1]);
    }
    return false;
}

} // namespace omt::ast
