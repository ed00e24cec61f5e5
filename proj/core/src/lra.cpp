#include "omt/lra.hpp"

#include <algorithm>

#include "omt/errors.hpp"

namespace omt::lra {

namespace {

void push_unique(std::vector<Literal>& out, Literal l)
{
    if (std::find(out.begin(), out.end(), l) == out.end())
        out.push_back(l);
}

} // namespace

VarId Solver::new_var()
{
    auto v = static_cast<VarId>(values_.size());
    values_.emplace_back();
    lower_.emplace_back();
    upper_.emplace_back();
    is_slack_.push_back(false);
    columns_.emplace_back();
    atoms_of_var_.emplace_back();
    ++original_count_;
    return v;
}

std::vector<std::pair<VarId, Rational>> Solver::definition(VarId v) const
{
    if (auto it = slack_form_.find(v); it != slack_form_.end())
        return it->second;
    return {{v, Rational(1)}};
}

void Solver::add_to_column(VarId nonbasic, VarId basic) { columns_[nonbasic].insert(basic); }
void Solver::remove_from_column(VarId nonbasic, VarId basic) { columns_[nonbasic].erase(basic); }

AtomIndex Solver::register_atom(const std::vector<std::pair<VarId, Rational>>& lhs, Relation rel,
                                const Rational& rhs)
{
    std::map<VarId, Rational> merged;
    for (const auto& [v, c] : lhs) {
        if (v >= num_vars())
            throw UsageError("atom over an unknown arithmetic variable");
        merged[v] += c;
    }
    std::vector<std::pair<VarId, Rational>> form;
    for (auto& [v, c] : merged)
        if (!c.is_zero())
            form.emplace_back(v, c);
    if (form.empty())
        throw UsageError("atom without variables");

    Rational bound = rhs;
    Rational lead = form.front().second;
    Rational scale = lead.abs().inverse();
    if (lead.sign() < 0) {
        scale = -scale;
        switch (rel) {
        case Relation::Le: rel = Relation::Ge; break;
        case Relation::Lt: rel = Relation::Gt; break;
        case Relation::Ge: rel = Relation::Le; break;
        case Relation::Gt: rel = Relation::Lt; break;
        case Relation::Eq: break;
        }
    }
    for (auto& term : form)
        term.second *= scale;
    bound *= scale;

    VarId var;
    if (form.size() == 1) {
        var = form.front().first;
    } else if (auto it = slack_of_form_.find(form); it != slack_of_form_.end()) {
        var = it->second;
    } else {
        var = static_cast<VarId>(values_.size());
        values_.emplace_back();
        lower_.emplace_back();
        upper_.emplace_back();
        is_slack_.push_back(true);
        columns_.emplace_back();
        atoms_of_var_.emplace_back();
        Row row;
        DeltaRational value;
        for (const auto& [x, c] : form) {
            value += values_[x] * c;
            if (auto r = rows_.find(x); r != rows_.end()) {
                for (const auto& [k, d] : r->second)
                    row[k] += c * d;
            } else {
                row[x] += c;
            }
        }
        std::erase_if(row, [](const auto& e) { return e.second.is_zero(); });
        for (const auto& [k, d] : row)
            add_to_column(k, var);
        rows_.emplace(var, std::move(row));
        values_[var] = value;
        slack_of_form_.emplace(form, var);
        slack_form_.emplace(var, form);
    }

    auto index = static_cast<AtomIndex>(atoms_.size());
    atoms_.push_back(AtomData{var, rel, bound, false});
    atoms_of_var_[var].push_back(index);
    return index;
}

std::optional<DeltaRational> Solver::lower(VarId v) const
{
    if (lower_.at(v))
        return lower_[v]->value;
    return std::nullopt;
}

std::optional<DeltaRational> Solver::upper(VarId v) const
{
    if (upper_.at(v))
        return upper_[v]->value;
    return std::nullopt;
}

FarkasEntry Solver::entry_for(VarId v, bool upper, const Rational& lambda) const
{
    const Bound& b = upper ? *upper_[v] : *lower_[v];
    return FarkasEntry{b.reason, v, upper, b.value, lambda};
}

// ---------------------------------------------------------------------------
// Assertions

std::optional<Conflict> Solver::set_bound(VarId v, bool upper, const DeltaRational& value, Literal reason)
{
    auto& mine = upper ? upper_[v] : lower_[v];
    const auto& other = upper ? lower_[v] : upper_[v];
    if (mine && (upper ? mine->value <= value : mine->value >= value))
        return std::nullopt;
    if (other && (upper ? value < other->value : value > other->value)) {
        Conflict c;
        c.literals = {reason};
        push_unique(c.literals, other->reason);
        c.farkas.push_back(FarkasEntry{reason, v, upper, value, Rational(1)});
        c.farkas.push_back(FarkasEntry{other->reason, v, !upper, other->value, Rational(1)});
        return c;
    }
    bound_trail_.push_back(BoundUndo{v, upper, mine});
    mine = Bound{value, reason};
    dirty_.insert(v);
    last_check_sat_ = false;
    if (!is_basic(v) && (upper ? values_[v] > value : values_[v] < value))
        update_nonbasic(v, value);
    return std::nullopt;
}

std::optional<Conflict> Solver::assert_literal(Literal l)
{
    AtomData& atom = atoms_.at(l.atom);
    if (!l.positive && atom.rel == Relation::Eq)
        throw UsageError("negated equality asserted to the arithmetic solver");
    if (!atom.asserted) {
        atom.asserted = true;
        asserted_trail_.push_back(l.atom);
    }
    last_check_sat_ = false;
    const Rational& b = atom.rhs;
    VarId v = atom.var;
    auto bound = [&](bool upper, int delta) { return set_bound(v, upper, DeltaRational(b, Rational(delta)), l); };
    if (l.positive) {
        switch (atom.rel) {
        case Relation::Eq:
            if (auto c = bound(true, 0))
                return c;
            return bound(false, 0);
        case Relation::Le: return bound(true, 0);
        case Relation::Lt: return bound(true, -1);
        case Relation::Ge: return bound(false, 0);
        case Relation::Gt: return bound(false, 1);
        }
    } else {
        switch (atom.rel) {
        case Relation::Le: return bound(false, 1);
        case Relation::Lt: return bound(false, 0);
        case Relation::Ge: return bound(true, -1);
        case Relation::Gt: return bound(true, 0);
        case Relation::Eq: break;
        }
    }
    return std::nullopt;
}

std::vector<Deduction> Solver::deduce()
{
    std::vector<Deduction> out;
    for (VarId v : dirty_) {
        const auto& lo = lower_[v];
        const auto& hi = upper_[v];
        for (AtomIndex a : atoms_of_var_[v]) {
            const AtomData& atom = atoms_[a];
            if (atom.asserted)
                continue;
            DeltaRational b(atom.rhs);
            DeltaRational below(atom.rhs, Rational(-1));
            DeltaRational above(atom.rhs, Rational(1));
            auto emit = [&](bool positive, std::vector<Literal> why) {
                out.push_back(Deduction{Literal{a, positive}, std::move(why)});
            };
            switch (atom.rel) {
            case Relation::Le:
                if (hi && hi->value <= b)
                    emit(true, {hi->reason});
                else if (lo && lo->value > b)
                    emit(false, {lo->reason});
                break;
            case Relation::Lt:
                if (hi && hi->value <= below)
                    emit(true, {hi->reason});
                else if (lo && lo->value >= b)
                    emit(false, {lo->reason});
                break;
            case Relation::Ge:
                if (lo && lo->value >= b)
                    emit(true, {lo->reason});
                else if (hi && hi->value < b)
                    emit(false, {hi->reason});
                break;
            case Relation::Gt:
                if (lo && lo->value >= above)
                    emit(true, {lo->reason});
                else if (hi && hi->value <= b)
                    emit(false, {hi->reason});
                break;
            case Relation::Eq:
                if (lo && hi && lo->value >= b && hi->value <= b) {
                    std::vector<Literal> why{lo->reason};
                    push_unique(why, hi->reason);
                    emit(true, std::move(why));
                } else if (lo && lo->value > b) {
                    emit(false, {lo->reason});
                } else if (hi && hi->value < b) {
                    emit(false, {hi->reason});
                }
                break;
            }
        }
    }
    dirty_.clear();
    return out;
}

Mark Solver::mark()
{
    Mark m{next_mark_++};
    marks_.push_back({m.id, {bound_trail_.size(), asserted_trail_.size()}});
    return m;
}

void Solver::backtrack(Mark m)
{
    auto it = std::find_if(marks_.begin(), marks_.end(), [&](const auto& e) { return e.first == m.id; });
    if (it == marks_.end())
        throw UsageError("backtrack to an unknown or stale mark");
    auto [bounds, asserted] = it->second;
    marks_.erase(it, marks_.end());
    while (bound_trail_.size() > bounds) {
        BoundUndo& u = bound_trail_.back();
        (u.upper ? upper_ : lower_)[u.var] = u.old;
        bound_trail_.pop_back();
    }
    while (asserted_trail_.size() > asserted) {
        atoms_[asserted_trail_.back()].asserted = false;
        asserted_trail_.pop_back();
    }
    dirty_.clear();
    last_check_sat_ = false;
}

// ---------------------------------------------------------------------------
// Simplex

void Solver::update_nonbasic(VarId v, const DeltaRational& value)
{
    DeltaRational diff = value - values_[v];
    for (VarId b : columns_[v])
        values_[b] += diff * rows_.at(b).at(v);
    values_[v] = value;
}

void Solver::pivot(VarId basic, VarId entering)
{
    Row row = std::move(rows_.at(basic));
    rows_.erase(basic);
    Rational a = row.at(entering);
    row.erase(entering);
    remove_from_column(entering, basic);
    for (const auto& [k, c] : row)
        remove_from_column(k, basic);

    Row fresh;
    Rational inv = a.inverse();
    fresh[basic] = inv;
    for (const auto& [k, c] : row)
        fresh[k] = -c * inv;

    std::vector<VarId> users(columns_[entering].begin(), columns_[entering].end());
    for (VarId r : users) {
        Row& target = rows_.at(r);
        Rational c = target.at(entering);
        target.erase(entering);
        remove_from_column(entering, r);
        for (const auto& [k, d] : fresh) {
            Rational& slot = target[k];
            slot += c * d;
            if (slot.is_zero()) {
                target.erase(k);
                remove_from_column(k, r);
            } else {
                add_to_column(k, r);
            }
        }
    }
    for (const auto& [k, d] : fresh)
        add_to_column(k, entering);
    rows_.emplace(entering, std::move(fresh));
    ++stats_.pivots;
}

void Solver::pivot_and_update(VarId basic, VarId entering, const DeltaRational& value)
{
    Rational a = rows_.at(basic).at(entering);
    DeltaRational theta = (value - values_[basic]) / a;
    values_[basic] = value;
    values_[entering] += theta;
    for (VarId b : columns_[entering])
        if (b != basic)
            values_[b] += theta * rows_.at(b).at(entering);
    pivot(basic, entering);
}

std::optional<Conflict> Solver::check()
{
    ++stats_.checks;
    for (;;) {
        VarId violated = 0;
        bool found = false;
        bool below = false;
        for (const auto& [b, row] : rows_) {
            if (lower_[b] && values_[b] < lower_[b]->value) {
                violated = b;
                below = true;
                found = true;
                break;
            }
            if (upper_[b] && values_[b] > upper_[b]->value) {
                violated = b;
                below = false;
                found = true;
                break;
            }
        }
        if (!found) {
            last_check_sat_ = true;
            return std::nullopt;
        }

        const Row& row = rows_.at(violated);
        std::optional<VarId> entering;
        for (const auto& [j, a] : row) {
            bool increase = (a.sign() > 0) == below;
            bool room = increase ? (!upper_[j] || values_[j] < upper_[j]->value)
                                 : (!lower_[j] || values_[j] > lower_[j]->value);
            if (room) {
                entering = j;
                break;
            }
        }
        if (!entering) {
            Conflict c;
            const Bound& own = below ? *lower_[violated] : *upper_[violated];
            c.literals.push_back(own.reason);
            c.farkas.push_back(entry_for(violated, !below, Rational(1)));
            for (const auto& [j, a] : row) {
                bool use_upper = (a.sign() > 0) == below;
                const Bound& b = use_upper ? *upper_[j] : *lower_[j];
                push_unique(c.literals, b.reason);
                c.farkas.push_back(entry_for(j, use_upper, a.abs()));
            }
            last_check_sat_ = false;
            return c;
        }
        pivot_and_update(violated, *entering, below ? lower_[violated]->value : upper_[violated]->value);
    }
}

Minimum Solver::minimize(VarId cost)
{
    if (!last_check_sat_)
        throw UsageError("minimize requires a satisfiable check");
    ++stats_.minimizations;
    for (;;) {
        Row row = is_basic(cost) ? rows_.at(cost) : Row{{cost, Rational(1)}};

        std::optional<VarId> entering;
        int dir = 0;
        for (const auto& [j, a] : row) {
            if (a.sign() > 0 && (!lower_[j] || values_[j] > lower_[j]->value)) {
                entering = j;
                dir = -1;
                break;
            }
            if (a.sign() < 0 && (!upper_[j] || values_[j] < upper_[j]->value)) {
                entering = j;
                dir = 1;
                break;
            }
        }
        if (!entering) {
            Minimum m;
            m.value = values_[cost];
            for (const auto& [j, a] : row)
                m.certificate.push_back(entry_for(j, a.sign() < 0, a.abs()));
            return m;
        }

        VarId j = *entering;
        std::optional<DeltaRational> best;
        VarId limiting = j;
        bool limiting_upper = false;
        auto consider = [&](const DeltaRational& theta, VarId v, bool upper) {
            if (!best || theta < *best || (theta == *best && v < limiting)) {
                best = theta;
                limiting = v;
                limiting_upper = upper;
            }
        };
        if (dir < 0 && lower_[j])
            consider(values_[j] - lower_[j]->value, j, false);
        if (dir > 0 && upper_[j])
            consider(upper_[j]->value - values_[j], j, true);
        for (VarId b : columns_[j]) {
            Rational rate = rows_.at(b).at(j) * Rational(dir);
            if (rate.sign() > 0 && upper_[b])
                consider((upper_[b]->value - values_[b]) / rate, b, true);
            else if (rate.sign() < 0 && lower_[b])
                consider((values_[b] - lower_[b]->value) / -rate, b, false);
        }
        if (!best)
            return Minimum{Minimum::Kind::Unbounded, {}, {}};
        if (limiting == j)
            update_nonbasic(j, limiting_upper ? upper_[j]->value : lower_[j]->value);
        else
            pivot_and_update(limiting, j, limiting_upper ? upper_[limiting]->value : lower_[limiting]->value);
    }
}

std::vector<Rational> Solver::concrete_model() const
{
    std::vector<std::pair<DeltaRational, DeltaRational>> pairs;
    for (VarId v = 0; v < num_vars(); ++v) {
        if (lower_[v])
            pairs.emplace_back(lower_[v]->value, values_[v]);
        if (upper_[v])
            pairs.emplace_back(values_[v], upper_[v]->value);
    }
    Rational eps = concretization_epsilon(pairs);
    std::vector<Rational> out;
    out.reserve(num_vars());
    for (const auto& v : values_)
        out.push_back(v.concretize(eps));
    return out;
}

bool Solver::rows_consistent() const
{
    for (const auto& [b, row] : rows_) {
        DeltaRational sum;
        for (const auto& [k, c] : row)
            sum += values_[k] * c;
        if (sum != values_[b])
            return false;
    }
    return true;
}

std::optional<DeltaRational> farkas_residual(const Solver& solver, const std::vector<FarkasEntry>& entries,
                                             const std::vector<std::pair<VarId, Rational>>& extra_lhs,
                                             const DeltaRational& extra_rhs)
{
    std::map<VarId, Rational> vars;
    DeltaRational constant;
    for (const auto& e : entries) {
        if (e.lambda.sign() < 0)
            return std::nullopt;
        Rational sign = e.upper ? Rational(1) : Rational(-1);
        for (const auto& [x, c] : solver.definition(e.var))
            vars[x] += sign * e.lambda * c;
        constant -= e.bound * (sign * e.lambda);
    }
    for (const auto& [x, c] : extra_lhs)
        vars[x] += c;
    constant -= extra_rhs;
    for (const auto& [x, c] : vars)
        if (!c.is_zero())
            return std::nullopt;
    return -constant;
}

} // namespace omt::lra
