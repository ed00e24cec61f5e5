#include "omt/smt.hpp"

#include <algorithm>

#include "omt/errors.hpp"

namespace omt {

using ast::AtomKind;
using ast::Relation;
using ast::TermKind;

namespace {

void collect_vars(const ast::Context& ctx, TermId t, std::set<TermId>& out)
{
    const ast::TermNode& n = ctx.term(t);
    if (n.kind == TermKind::Variable)
        out.insert(t);
    for (TermId a : n.args)
        collect_vars(ctx, a, out);
    for (const auto& [a, c] : n.linear.terms)
        collect_vars(ctx, a, out);
}

} // namespace

// ---------------------------------------------------------------- TheoryStack

TheoryStack::TheoryStack(const ast::Context& ctx, std::optional<TermId> cost) : ctx_(ctx), cost_(cost)
{
    if (cost_)
        arith_var(*cost_);
    base_ = mark();
}

lra::VarId TheoryStack::arith_var(TermId t)
{
    if (auto it = lra_vars_.find(t); it != lra_vars_.end())
        return it->second;
    if (!ctx_.is_variable(t) || ctx_.sort_of(t) != ast::kRealSort)
        throw UsageError("arithmetic over a non-variable term: " + ctx_.to_string(t));
    lra::VarId v = lra_.new_var();
    lra_vars_.emplace(t, v);
    return v;
}

std::optional<lra::VarId> TheoryStack::lra_var(TermId t) const
{
    if (auto it = lra_vars_.find(t); it != lra_vars_.end())
        return it->second;
    return std::nullopt;
}

euf::NodeId TheoryStack::node(TermId t)
{
    if (auto it = nodes_.find(t); it != nodes_.end())
        return it->second;
    const ast::TermNode& n = ctx_.term(t);
    euf::NodeId id = 0;
    if (n.kind == TermKind::Variable) {
        id = egraph_.add_leaf();
    } else if (n.kind == TermKind::Application) {
        std::vector<euf::NodeId> args;
        args.reserve(n.args.size());
        for (TermId a : n.args)
            args.push_back(node(a));
        id = egraph_.add_app(n.func, std::move(args));
    } else {
        throw UsageError("arithmetic term inside an uninterpreted atom: " + ctx_.to_string(t));
    }
    nodes_.emplace(t, id);
    return id;
}

bool TheoryStack::is_theory_atom(AtomId a) const
{
    return ctx_.atom(a).kind != AtomKind::Boolean;
}

void TheoryStack::register_atom(AtomId a)
{
    const ast::Atom& atom = ctx_.atom(a);
    if (atom.kind == AtomKind::Boolean)
        return;
    if (atom.kind == AtomKind::Equality) {
        if (std::find(euf_atoms_.begin(), euf_atoms_.end(), a) != euf_atoms_.end())
            return;
        node(atom.left);
        node(atom.right);
        euf_atoms_.push_back(a);
        return;
    }
    if (lra_atoms_.count(a))
        return;
    std::vector<std::pair<lra::VarId, Rational>> form;
    for (const auto& [t, c] : atom.lhs.terms)
        form.emplace_back(arith_var(t), c);
    lra::AtomIndex idx = lra_.register_atom(form, atom.rel, atom.rhs);
    lra_atoms_.emplace(a, idx);
    if (lra_atom_owner_.size() <= idx)
        lra_atom_owner_.resize(idx + 1);
    lra_atom_owner_[idx] = a;
}

void TheoryStack::register_interface_equality(const ast::InterfaceEquality& ie)
{
    register_atom(ie.eq);
    register_atom(ie.lt);
    register_atom(ie.gt);
    node(ie.first);
    node(ie.second);
    interface_.emplace(ie.eq, ie);
}

AtomLiteral TheoryStack::to_atom_literal(const lra::Literal& l) const
{
    return {lra_atom_owner_.at(l.atom), l.positive};
}

std::optional<std::vector<AtomLiteral>> TheoryStack::assert_literal(AtomLiteral l)
{
    const ast::Atom& atom = ctx_.atom(l.atom);
    if (atom.kind == AtomKind::Boolean)
        return std::nullopt;
    std::optional<euf::Conflict> euf_conflict;
    if (atom.kind == AtomKind::Equality) {
        register_atom(l.atom);
        euf::NodeId a = nodes_.at(atom.left);
        euf::NodeId b = nodes_.at(atom.right);
        ++euf_assertions_;
        euf_conflict = l.positive ? egraph_.assert_eq(a, b, tag_of(l)) : egraph_.assert_diseq(a, b, tag_of(l));
    } else {
        auto ie = interface_.find(l.atom);
        bool skip_lra = !l.positive && atom.rel == Relation::Eq;
        if (!skip_lra) {
            auto it = lra_atoms_.find(l.atom);
            if (it == lra_atoms_.end())
                throw UsageError("assertion of an unregistered atom");
            lra_dirty_ = true;
            if (auto c = lra_.assert_literal({it->second, l.positive})) {
                std::vector<AtomLiteral> out;
                for (const lra::Literal& x : c->literals)
                    out.push_back(to_atom_literal(x));
                return out;
            }
        }
        if (ie != interface_.end()) {
            euf::NodeId a = nodes_.at(ie->second.first);
            euf::NodeId b = nodes_.at(ie->second.second);
            ++euf_assertions_;
            euf_conflict = l.positive ? egraph_.assert_eq(a, b, tag_of(l)) : egraph_.assert_diseq(a, b, tag_of(l));
        }
    }
    if (euf_conflict) {
        std::vector<AtomLiteral> out;
        for (euf::Tag t : euf_conflict->tags)
            out.push_back(literal_of(t));
        return out;
    }
    return std::nullopt;
}

std::optional<std::vector<AtomLiteral>> TheoryStack::check()
{
    if (!lra_dirty_)
        return std::nullopt;
    if (auto c = lra_.check()) {
        std::vector<AtomLiteral> out;
        for (const lra::Literal& x : c->literals)
            out.push_back(to_atom_literal(x));
        return out;
    }
    lra_dirty_ = false;
    return std::nullopt;
}

std::vector<TheoryStack::Deduction> TheoryStack::deduce(const std::function<bool(AtomId)>& unassigned)
{
    std::vector<Deduction> out;
    for (const lra::Deduction& d : lra_.deduce()) {
        AtomLiteral lit = to_atom_literal(d.literal);
        if (!unassigned(lit.atom))
            continue;
        Deduction ded{lit, {}};
        for (const lra::Literal& x : d.explanation)
            ded.explanation.push_back(to_atom_literal(x));
        out.push_back(std::move(ded));
    }
    if (euf_assertions_ == 0)
        return out;
    auto try_merge = [&](AtomId a, euf::NodeId x, euf::NodeId y) {
        if (!unassigned(a) || !egraph_.are_equal(x, y))
            return;
        Deduction ded{{a, true}, {}};
        for (euf::Tag t : egraph_.explain(x, y))
            ded.explanation.push_back(literal_of(t));
        out.push_back(std::move(ded));
    };
    for (AtomId a : euf_atoms_) {
        const ast::Atom& atom = ctx_.atom(a);
        try_merge(a, nodes_.at(atom.left), nodes_.at(atom.right));
    }
    for (const auto& [a, ie] : interface_)
        try_merge(a, nodes_.at(ie.first), nodes_.at(ie.second));
    return out;
}

TheoryStack::Mark TheoryStack::mark()
{
    return {lra_.mark(), egraph_.mark(), euf_assertions_};
}

void TheoryStack::backtrack(Mark m)
{
    lra_.backtrack(m.lra);
    egraph_.backtrack(m.euf);
    euf_assertions_ = m.euf_assertions;
    lra_dirty_ = true;
}

void TheoryStack::reset()
{
    backtrack(*base_);
    base_ = mark();
}

lra::Minimum TheoryStack::minimize()
{
    if (!cost_)
        throw UsageError("minimize without a cost variable");
    return lra_.minimize(lra_vars_.at(*cost_));
}

ast::Model TheoryStack::model(const std::map<TermId, bool>& booleans) const
{
    ast::Model m;
    m.booleans = booleans;
    std::vector<Rational> values = lra_.concrete_model();
    Rational next(1);
    for (const auto& [t, v] : lra_vars_) {
        m.values[t] = values[v];
        if (values[v] >= next)
            next = values[v] + Rational(1);
    }
    std::map<euf::NodeId, Rational> class_value;
    for (const auto& [t, n] : nodes_) {
        auto it = lra_vars_.find(t);
        if (it != lra_vars_.end())
            class_value.emplace(egraph_.find(n), values[it->second]);
    }
    for (euf::NodeId n = 0; n < egraph_.num_nodes(); ++n) {
        euf::NodeId r = egraph_.find(n);
        if (!class_value.count(r)) {
            class_value.emplace(r, next);
            next = next + Rational(1);
        }
    }
    for (const auto& [t, n] : nodes_) {
        const Rational& v = class_value.at(egraph_.find(n));
        const ast::TermNode& term = ctx_.term(t);
        if (term.kind == TermKind::Variable) {
            m.values.emplace(t, v);
        } else {
            std::vector<Rational> args;
            for (euf::NodeId a : egraph_.args(n))
                args.push_back(class_value.at(egraph_.find(a)));
            m.functions[term.func][args] = v;
        }
    }
    return m;
}

// ------------------------------------------------------------------ SmtEngine

SmtEngine::SmtEngine(ast::Context& ctx, std::optional<TermId> cost, SmtConfig config)
    : ctx_(ctx), cost_(cost), config_(config), theory_(ctx, cost)
{
    sat_.set_listener(this);
    sat_.set_partial_models(config_.partial_models);
    sat_.set_deadline(config_.deadline);
    if (cost_)
        arith_vars_seen_.insert(*cost_);
}

sat::Var SmtEngine::var_of(AtomId a)
{
    if (a < var_of_atom_.size() && var_of_atom_[a])
        return *var_of_atom_[a];
    ast::Atom atom = ctx_.atom(a);
    if (atom.kind == AtomKind::Equality && !theory_.euf_pristine()) {
        // New congruence nodes need an empty e-graph trail.
        sat_.backtrack(-1);
    }
    theory_.register_atom(a);
    sat::Var v = sat_.new_var();
    if (var_of_atom_.size() <= a) {
        var_of_atom_.resize(a + 1);
        role_.resize(a + 1, kPlain);
        positive_uses_.resize(a + 1, 0);
        negative_uses_.resize(a + 1, 0);
    }
    var_of_atom_[a] = v;
    atom_of_var_.push_back(a);
    if (cost_ && atom.kind == AtomKind::Arith && ctx_.atom_mentions(a, *cost_)) {
        role_[a] |= kCostAtom;
        if (atom.rel == Relation::Eq)
            ensure_split(a);
    }
    return v;
}

sat::Lit SmtEngine::literal(AtomLiteral l)
{
    return sat::Lit::make(var_of(l.atom), !l.positive);
}

AtomLiteral SmtEngine::atom_literal(sat::Lit l) const
{
    return {atom_of_var_[l.var()], !l.negated()};
}

std::vector<sat::Lit> SmtEngine::to_clause(const std::vector<AtomLiteral>& true_lits) const
{
    std::vector<sat::Lit> out;
    out.reserve(true_lits.size());
    for (const AtomLiteral& l : true_lits)
        out.push_back(~sat::Lit::make(*var_of_atom_.at(l.atom), !l.positive));
    return out;
}

void SmtEngine::count_polarity(AtomLiteral l)
{
    var_of(l.atom);
    auto& uses = l.positive ? positive_uses_ : negative_uses_;
    if (uses[l.atom]++ == 0 && sat_.value(*var_of_atom_[l.atom]) != sat::LBool::Undef)
        needs_resync_ = true;
    const ast::Atom& atom = ctx_.atom(l.atom);
    if (!l.positive && atom.kind == AtomKind::Arith && atom.rel == Relation::Eq)
        ensure_split(l.atom);
}

void SmtEngine::ensure_split(AtomId eq)
{
    if (role_[eq] & (kSplit | kInterface))
        return;
    role_[eq] |= kSplit;
    ast::Atom atom = ctx_.atom(eq);
    ast::LinearExpr rhs = ast::LinearExpr::of_constant(atom.rhs);
    AtomId lt = ctx_.node(ctx_.mk_arith(atom.lhs, Relation::Lt, rhs)).atom;
    AtomId gt = ctx_.node(ctx_.mk_arith(atom.lhs, Relation::Gt, rhs)).atom;
    std::vector<ast::Clause> clauses{
        {{eq, true}, {lt, true}, {gt, true}},
        {{eq, false}, {lt, false}},
        {{eq, false}, {gt, false}},
        {{lt, false}, {gt, false}},
    };
    for (const ast::Clause& c : clauses)
        add_sat_clause(c, sat::ClauseKind::Lemma, 0);
}

void SmtEngine::add_sat_clause(const ast::Clause& clause, sat::ClauseKind kind, std::uint32_t frame)
{
    std::vector<sat::Lit> lits;
    lits.reserve(clause.size());
    for (const AtomLiteral& l : clause) {
        if (kind != sat::ClauseKind::Learned)
            count_polarity(l);
        lits.push_back(literal(l));
    }
    sat_.add_clause(std::move(lits), kind, frame);
}

void SmtEngine::add_clause(const ast::Clause& clause, sat::ClauseKind kind)
{
    auto frame = static_cast<std::uint32_t>(kind == sat::ClauseKind::Original ? sat_.frame_depth() : 0);
    add_sat_clause(clause, kind, frame);
}

void SmtEngine::assert_formula(ast::Formula f)
{
    if (!ast::is_pure(ctx_, f))
        f = ast::purify(ctx_, f).formula;
    for (AtomId a : ast::atoms_of(ctx_, f)) {
        const ast::Atom& atom = ctx_.atom(a);
        if (atom.kind == AtomKind::Arith) {
            for (const auto& [t, c] : atom.lhs.terms)
                arith_vars_seen_.insert(t);
        } else if (atom.kind == AtomKind::Equality) {
            collect_vars(ctx_, atom.left, euf_vars_seen_);
            collect_vars(ctx_, atom.right, euf_vars_seen_);
        }
        var_of(a);
    }
    std::vector<TermId> shared;
    std::set_intersection(arith_vars_seen_.begin(), arith_vars_seen_.end(), euf_vars_seen_.begin(),
                          euf_vars_seen_.end(), std::back_inserter(shared));
    if (shared.size() != interface_vars_.size())
        add_interface_vars(shared);
    for (const ast::Clause& c : ast::cnfize(ctx_, f))
        add_sat_clause(c, sat::ClauseKind::Original, static_cast<std::uint32_t>(sat_.frame_depth()));
}

void SmtEngine::add_interface_vars(const std::vector<TermId>& vars)
{
    std::vector<ast::InterfaceEquality> all = ast::interface_equalities(ctx_, vars);
    std::vector<TermId> sorted;
    for (const auto& ie : all) {
        if (interface_index_.count(ie.eq))
            continue;
        if (!theory_.euf_pristine())
            sat_.backtrack(-1);
        theory_.register_interface_equality(ie);
        for (AtomId a : {ie.eq, ie.lt, ie.gt}) {
            var_of(a);
            role_[a] |= kInterface;
        }
        interface_index_.emplace(ie.eq, interface_eqs_.size());
        strict_index_.emplace(ie.lt, interface_eqs_.size());
        strict_index_.emplace(ie.gt, interface_eqs_.size());
        interface_eqs_.push_back(ie);
        sat_.set_required(*var_of_atom_[ie.eq]);
        std::vector<ast::Clause> clauses{
            {{ie.eq, true}, {ie.lt, true}, {ie.gt, true}},
            {{ie.eq, false}, {ie.lt, false}},
            {{ie.eq, false}, {ie.gt, false}},
            {{ie.lt, false}, {ie.gt, false}},
        };
        for (const ast::Clause& c : clauses)
            add_sat_clause(c, sat::ClauseKind::Lemma, 0);
    }
    interface_vars_ = vars;
}

void SmtEngine::retire(AtomId a)
{
    if (a < var_of_atom_.size() && var_of_atom_[a])
        sat_.retire_var(*var_of_atom_[a]);
}

bool SmtEngine::filtered(AtomLiteral l) const
{
    if (!config_.pure_literal_filtering || role_[l.atom] != kPlain)
        return false;
    return l.positive ? positive_uses_[l.atom] == 0 : negative_uses_[l.atom] == 0;
}

sat::Result SmtEngine::check(const std::vector<AtomLiteral>& assumptions)
{
    ++stats_.checks;
    assumption_lits_.clear();
    for (const AtomLiteral& a : assumptions)
        assumption_lits_.push_back(literal(a));
    in_search_ = true;
    sat::Result r = sat_.solve(assumption_lits_);
    in_search_ = false;
    return r;
}

std::vector<AtomLiteral> SmtEngine::core() const
{
    std::vector<AtomLiteral> out;
    for (sat::Lit l : sat_.core())
        out.push_back(atom_literal(l));
    return out;
}

void SmtEngine::resync()
{
    ++stats_.resyncs;
    if (!level_marks_.empty())
        theory_.backtrack(level_marks_.front());
    level_marks_.clear();
    processed_ = 0;
    needs_resync_ = false;
}

sat::TheoryListener::Check SmtEngine::propagate(sat::Solver& solver)
{
    ++stats_.theory_checks;
    if (needs_resync_)
        resync();
    const std::vector<sat::Lit>& trail = solver.trail();
    for (; processed_ < trail.size(); ++processed_) {
        sat::Lit lit = trail[processed_];
        int lvl = solver.level(lit.var());
        while (static_cast<int>(level_marks_.size()) <= lvl)
            level_marks_.push_back(theory_.mark());
        AtomLiteral al = atom_literal(lit);
        if (!theory_.is_theory_atom(al.atom) || filtered(al))
            continue;
        if (auto conflict = theory_.assert_literal(al)) {
            ++processed_;
            return Check{to_clause(*conflict), {}};
        }
    }
    if (auto conflict = theory_.check())
        return Check{to_clause(*conflict), {}};

    Check out;
    auto unassigned = [this](AtomId a) {
        return a < var_of_atom_.size() && var_of_atom_[a] && sat_.value(*var_of_atom_[a]) == sat::LBool::Undef;
    };
    for (TheoryStack::Deduction& d : theory_.deduce(unassigned)) {
        std::vector<sat::Lit> because;
        for (const AtomLiteral& e : d.explanation)
            because.push_back(sat::Lit::make(*var_of_atom_[e.atom], !e.positive));
        out.propagations.push_back({sat::Lit::make(*var_of_atom_[d.literal.atom], !d.literal.positive),
                                    explanations_.size()});
        explanations_.push_back(std::move(because));
        explanation_levels_.push_back(solver.decision_level());
    }
    return out;
}

sat::FinalVerdict SmtEngine::final_check(sat::Solver&)
{
    if (hook_)
        return hook_(*this);
    return sat::FinalVerdict::Accept;
}

void SmtEngine::backtrack(int level)
{
    auto target = static_cast<std::size_t>(level + 1);
    if (level_marks_.size() > target) {
        theory_.backtrack(level_marks_[target]);
        level_marks_.resize(target);
    }
    processed_ = std::min(processed_, sat_.trail_size());
    while (!explanation_levels_.empty() && explanation_levels_.back() > level) {
        explanation_levels_.pop_back();
        explanations_.pop_back();
    }
}

void SmtEngine::explain(sat::Lit, std::uint64_t explanation, std::vector<sat::Lit>& antecedents)
{
    antecedents = explanations_.at(explanation);
}

ast::Model SmtEngine::model() const
{
    std::map<TermId, bool> booleans;
    for (sat::Var v = 0; v < atom_of_var_.size(); ++v) {
        const ast::Atom& atom = ctx_.atom(atom_of_var_[v]);
        if (atom.kind == AtomKind::Boolean)
            booleans[atom.var] = sat_.value(v) == sat::LBool::True;
    }
    return theory_.model(booleans);
}

lra::Minimum SmtEngine::minimize()
{
    return theory_.minimize();
}

SmtEngine::Assignment SmtEngine::assignment() const
{
    Assignment out;
    for (sat::Lit lit : sat_.trail()) {
        AtomLiteral al = atom_literal(lit);
        if (filtered(al))
            continue;
        const ast::Atom& atom = ctx_.atom(al.atom);
        if (atom.kind == AtomKind::Boolean) {
            out.boolean.push_back(al);
        } else if (atom.kind == AtomKind::Equality) {
            out.euf.push_back(al);
        } else if (auto it = interface_index_.find(al.atom); it != interface_index_.end()) {
            (al.positive ? out.equal : out.distinct).push_back(interface_eqs_[it->second]);
        } else if (strict_index_.count(al.atom)) {
            out.strict.push_back(al);
        } else {
            out.lra.push_back(al);
        }
    }
    return out;
}

} // namespace omt
