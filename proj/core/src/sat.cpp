#include "omt/sat.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <sstream>
#include <string>

#include "omt/errors.hpp"

namespace omt::sat {

namespace {

constexpr double kVarDecay = 0.95;
constexpr std::uint64_t kRestartBase = 100;
constexpr std::uint64_t kReduceInterval = 2000;
constexpr std::uint32_t kKeepLbd = 3;

// Luby sequence 1,1,2,1,1,2,4,... (0-based index).
std::uint64_t luby(std::uint64_t i)
{
    std::uint64_t size = 1;
    int seq = 0;
    while (size < i + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != i) {
        size = (size - 1) >> 1;
        --seq;
        i = i % size;
    }
    return std::uint64_t{1} << seq;
}

} // namespace

Solver::Solver() = default;

Var Solver::new_var(bool decidable)
{
    auto v = static_cast<Var>(assigns_.size());
    assigns_.push_back(LBool::Undef);
    levels_.push_back(-1);
    reasons_.emplace_back();
    level0_frame_.push_back(0);
    phase_.push_back(false);
    decidable_.push_back(decidable);
    required_.push_back(false);
    seen_.push_back(false);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    if (decidable)
        heap_insert(v);
    return v;
}

LBool Solver::value(Lit l) const
{
    LBool v = assigns_[l.var()];
    if (v == LBool::Undef)
        return v;
    bool t = (v == LBool::True) != l.negated();
    return t ? LBool::True : LBool::False;
}

void Solver::set_required(Var v, bool required) { required_.at(v) = required; }

// ---------------------------------------------------------------------------
// Clause database

void Solver::add_clause(std::vector<Lit> lits, ClauseKind kind)
{
    add_clause(std::move(lits), kind, static_cast<std::uint32_t>(frame_depth_));
}

void Solver::add_clause(std::vector<Lit> lits, ClauseKind kind, std::uint32_t frame)
{
    for (Lit l : lits)
        if (l.var() >= num_vars())
            throw UsageError("clause mentions an unknown variable");
    if (auto c = insert_clause(std::move(lits), kind, frame); c && !pending_conflict_)
        pending_conflict_ = std::move(c);
}

void Solver::attach(std::uint32_t cref)
{
    const Clause& c = clauses_[cref];
    watches_[c.lits[0].index()].push_back({cref, c.lits[1]});
    watches_[c.lits[1].index()].push_back({cref, c.lits[0]});
}

std::optional<Solver::Conflict> Solver::insert_clause(std::vector<Lit> lits, ClauseKind kind, std::uint32_t frame)
{
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
        if (lits[i].var() == lits[i + 1].var())
            return std::nullopt;

    if (lits.empty()) {
        empty_frames_.push_back(frame);
        return Conflict{{}, frame};
    }

    if (lits.size() == 1) {
        Lit l = lits[0];
        units_.push_back({l, kind, frame});
        if (trail_cleared_)
            return std::nullopt;
        LBool v = value(l);
        if (v == LBool::True && level(l.var()) == 0)
            return std::nullopt;
        if (v == LBool::False && level(l.var()) == 0)
            return Conflict{{l}, std::max(frame, level0_frame_[l.var()])};
        backtrack(0);
        enqueue(l, Reason{});
        level0_frame_[l.var()] = frame;
        return std::nullopt;
    }

    auto cref = static_cast<std::uint32_t>(clauses_.size());
    if (trail_cleared_) {
        clauses_.push_back(Clause{std::move(lits), kind, frame, 0, false});
        attach(cref);
        return std::nullopt;
    }

    // Order: true literals by ascending level, then unassigned, then false
    // literals by descending level.
    auto rank = [&](Lit l) {
        LBool v = value(l);
        if (v == LBool::True)
            return std::make_pair(0, level(l.var()));
        if (v == LBool::Undef)
            return std::make_pair(1, 0);
        return std::make_pair(2, -level(l.var()));
    };
    std::stable_sort(lits.begin(), lits.end(), [&](Lit a, Lit b) { return rank(a) < rank(b); });
    std::size_t non_false = 0;
    for (Lit l : lits)
        if (value(l) != LBool::False)
            ++non_false;

    clauses_.push_back(Clause{lits, kind, frame, 0, false});
    if (kind == ClauseKind::Learned)
        clauses_.back().lbd = static_cast<std::uint32_t>(lits.size());

    if (non_false >= 2) {
        attach(cref);
        return std::nullopt;
    }
    if (non_false == 1) {
        int false_level = level(lits[1].var());
        if (value(lits[0]) == LBool::True && level(lits[0].var()) <= false_level) {
            attach(cref);
            return std::nullopt;
        }
        backtrack(false_level);
        attach(cref);
        enqueue(lits[0], Reason{ReasonKind::Clause, cref, 0});
        return std::nullopt;
    }

    int top = level(lits[0].var());
    if (top == 0) {
        attach(cref);
        return Conflict{lits, frame};
    }
    if (level(lits[1].var()) < top) {
        backtrack(level(lits[1].var()));
        attach(cref);
        enqueue(lits[0], Reason{ReasonKind::Clause, cref, 0});
        return std::nullopt;
    }
    backtrack(top);
    attach(cref);
    return Conflict{lits, frame};
}

void Solver::push() { ++frame_depth_; }

void Solver::pop()
{
    if (frame_depth_ == 0)
        throw UsageError("pop on an empty frame stack");
    --frame_depth_;
    auto depth = static_cast<std::uint32_t>(frame_depth_);
    clear_trail();
    for (auto& c : clauses_) {
        if (!c.deleted && c.frame > depth) {
            c.deleted = true;
            c.lits.clear();
        }
    }
    std::erase_if(units_, [depth](const Unit& u) { return u.frame > depth; });
    std::erase_if(empty_frames_, [depth](std::uint32_t f) { return f > depth; });
    pending_conflict_.reset();
}

std::vector<std::vector<Lit>> Solver::learned_clauses() const
{
    std::vector<std::vector<Lit>> out;
    for (const auto& c : clauses_)
        if (!c.deleted && c.kind == ClauseKind::Learned)
            out.push_back(c.lits);
    for (const auto& u : units_)
        if (u.kind == ClauseKind::Learned)
            out.push_back({u.lit});
    return out;
}

void Solver::retire_var(Var v)
{
    decidable_.at(v) = false;
    required_[v] = false;
    backtrack(0);
    if (assigns_[v] != LBool::Undef)
        clear_trail();
    for (auto& c : clauses_) {
        if (c.deleted || c.kind != ClauseKind::Learned)
            continue;
        if (std::any_of(c.lits.begin(), c.lits.end(), [v](Lit l) { return l.var() == v; })) {
            c.deleted = true;
            c.lits.clear();
            ++stats_.deleted;
        }
    }
    std::erase_if(units_, [v](const Unit& u) { return u.kind == ClauseKind::Learned && u.lit.var() == v; });
}

void Solver::reduce_db()
{
    conflicts_since_reduce_ = 0;
    std::vector<std::uint32_t> candidates;
    for (std::uint32_t i = 0; i < clauses_.size(); ++i) {
        const Clause& c = clauses_[i];
        if (c.deleted || c.kind != ClauseKind::Learned || c.lbd <= kKeepLbd)
            continue;
        Var v = c.lits[0].var();
        bool locked = value(c.lits[0]) == LBool::True && reasons_[v].kind == ReasonKind::Clause &&
                      reasons_[v].cref == i;
        if (!locked)
            candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (clauses_[a].lbd != clauses_[b].lbd)
            return clauses_[a].lbd > clauses_[b].lbd;
        return clauses_[a].lits.size() > clauses_[b].lits.size();
    });
    for (std::size_t i = 0; i < candidates.size() / 2; ++i) {
        Clause& c = clauses_[candidates[i]];
        c.deleted = true;
        c.lits.clear();
        ++stats_.deleted;
    }
}

// ---------------------------------------------------------------------------
// Trail

void Solver::enqueue(Lit l, Reason r)
{
    Var v = l.var();
    assert(assigns_[v] == LBool::Undef);
    assigns_[v] = l.negated() ? LBool::False : LBool::True;
    levels_[v] = decision_level();
    reasons_[v] = r;
    trail_.push_back(l);
    if (decision_level() == 0) {
        std::uint32_t frame = 0;
        if (r.kind != ReasonKind::Decision) {
            frame = reason_frame(v);
            for (Lit q : reason_lits(v))
                if (q.var() != v)
                    frame = std::max(frame, level0_frame_[q.var()]);
        }
        level0_frame_[v] = frame;
    }
}

void Solver::decide(Lit l)
{
    if (value(l) != LBool::Undef)
        throw UsageError("decision on an assigned literal");
    if (trail_cleared_)
        requeue_units();
    trail_lim_.push_back(trail_.size());
    enqueue(l, Reason{});
    ++stats_.decisions;
}

void Solver::backtrack(int level)
{
    if (level < 0) {
        clear_trail();
        return;
    }
    if (decision_level() <= level)
        return;
    std::size_t keep = trail_lim_[level];
    for (std::size_t i = trail_.size(); i-- > keep;) {
        Var v = trail_[i].var();
        phase_[v] = assigns_[v] == LBool::True;
        assigns_[v] = LBool::Undef;
        reasons_[v] = Reason{};
        levels_[v] = -1;
        if (decidable_[v])
            heap_insert(v);
    }
    trail_.resize(keep);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
    if (listener_)
        listener_->backtrack(level);
}

void Solver::clear_trail()
{
    for (Lit l : trail_) {
        Var v = l.var();
        phase_[v] = assigns_[v] == LBool::True;
        assigns_[v] = LBool::Undef;
        reasons_[v] = Reason{};
        levels_[v] = -1;
        if (decidable_[v])
            heap_insert(v);
    }
    trail_.clear();
    trail_lim_.clear();
    qhead_ = 0;
    trail_cleared_ = true;
    if (listener_)
        listener_->backtrack(-1);
}

void Solver::requeue_units()
{
    trail_cleared_ = false;
    for (const Unit& u : units_) {
        LBool v = value(u.lit);
        if (v == LBool::Undef) {
            enqueue(u.lit, Reason{});
            level0_frame_[u.lit.var()] = u.frame;
        } else if (v == LBool::False && !pending_conflict_) {
            pending_conflict_ = Conflict{{u.lit}, std::max(u.frame, level0_frame_[u.lit.var()])};
        }
    }
}

std::vector<Lit> Solver::reason_lits(Var v)
{
    const Reason& r = reasons_[v];
    if (r.kind == ReasonKind::Clause)
        return clauses_[r.cref].lits;
    if (r.kind == ReasonKind::Theory) {
        Lit l = value(Lit::make(v)) == LBool::True ? Lit::make(v) : Lit::make(v, true);
        std::vector<Lit> ants;
        listener_->explain(l, r.explanation, ants);
        std::vector<Lit> out{l};
        for (Lit a : ants)
            out.push_back(~a);
        return out;
    }
    return {};
}

std::uint32_t Solver::reason_frame(Var v) const
{
    const Reason& r = reasons_[v];
    return r.kind == ReasonKind::Clause ? clauses_[r.cref].frame : 0;
}

// ---------------------------------------------------------------------------
// Propagation

std::optional<std::uint32_t> Solver::bcp()
{
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        Lit false_lit = ~p;
        auto& ws = watches_[false_lit.index()];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            Watcher w = ws[i++];
            Clause& c = clauses_[w.cref];
            if (c.deleted)
                continue;
            if (value(w.blocker) == LBool::True) {
                ws[j++] = w;
                continue;
            }
            if (c.lits[0] == false_lit)
                std::swap(c.lits[0], c.lits[1]);
            Lit first = c.lits[0];
            if (value(first) == LBool::True) {
                ws[j++] = {w.cref, first};
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.lits.size(); ++k) {
                if (value(c.lits[k]) != LBool::False) {
                    std::swap(c.lits[1], c.lits[k]);
                    watches_[c.lits[1].index()].push_back({w.cref, first});
                    moved = true;
                    break;
                }
            }
            if (moved)
                continue;
            ws[j++] = {w.cref, first};
            if (value(first) == LBool::False) {
                while (i < ws.size())
                    ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return w.cref;
            }
            enqueue(first, Reason{ReasonKind::Clause, w.cref, 0});
            ++stats_.propagations;
        }
        ws.resize(j);
    }
    return std::nullopt;
}

std::optional<Solver::Conflict> Solver::handle_theory(TheoryListener::Check check)
{
    if (check.conflict) {
        ++stats_.theory_conflicts;
        return insert_clause(std::move(*check.conflict), ClauseKind::Learned, 0);
    }
    for (const auto& p : check.propagations) {
        LBool v = value(p.lit);
        if (v == LBool::True)
            continue;
        if (v == LBool::Undef) {
            enqueue(p.lit, Reason{ReasonKind::Theory, kNoClause, p.explanation});
            ++stats_.theory_propagations;
            continue;
        }
        std::vector<Lit> ants;
        listener_->explain(p.lit, p.explanation, ants);
        std::vector<Lit> clause{p.lit};
        for (Lit a : ants)
            clause.push_back(~a);
        ++stats_.theory_conflicts;
        return insert_clause(std::move(clause), ClauseKind::Learned, 0);
    }
    return std::nullopt;
}

std::optional<Solver::Conflict> Solver::propagate_all()
{
    for (;;) {
        if (auto cref = bcp())
            return Conflict{clauses_[*cref].lits, clauses_[*cref].frame};
        if (!listener_)
            return std::nullopt;
        std::size_t before = trail_.size();
        int level_before = decision_level();
        auto check = listener_->propagate(*this);
        if (!check.conflict && check.propagations.empty())
            return std::nullopt;
        if (auto c = handle_theory(std::move(check)))
            return c;
        if (trail_.size() == before && decision_level() == level_before && qhead_ == trail_.size())
            return std::nullopt;
    }
}

std::optional<std::vector<Lit>> Solver::propagate()
{
    if (trail_cleared_)
        requeue_units();
    if (pending_conflict_) {
        auto c = std::move(*pending_conflict_);
        pending_conflict_.reset();
        return c.lits;
    }
    if (auto c = propagate_all())
        return c->lits;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Conflict analysis

std::pair<std::vector<Lit>, int> Solver::analyze(const std::vector<Lit>& conflict)
{
    std::uint32_t frame = 0;
    return analyze_conflict(Conflict{conflict, 0}, frame);
}

std::pair<std::vector<Lit>, int> Solver::analyze_conflict(const Conflict& conflict, std::uint32_t& frame)
{
    if (decision_level() == 0)
        throw UsageError("conflict analysis at decision level 0");
    frame = conflict.frame;
    std::vector<Lit> learned{Lit{}};
    std::vector<Var> touched;
    int path = 0;
    std::optional<Lit> p;
    std::size_t index = trail_.size();
    std::vector<Lit> clause = conflict.lits;

    for (;;) {
        for (Lit q : clause) {
            Var v = q.var();
            if (p && v == p->var())
                continue;
            if (seen_[v])
                continue;
            if (level(v) == 0) {
                frame = std::max(frame, level0_frame_[v]);
                continue;
            }
            seen_[v] = true;
            touched.push_back(v);
            bump(v);
            if (level(v) >= decision_level())
                ++path;
            else
                learned.push_back(q);
        }
        do {
            --index;
        } while (!seen_[trail_[index].var()]);
        p = trail_[index];
        seen_[p->var()] = false;
        --path;
        if (path <= 0)
            break;
        clause = reason_lits(p->var());
        frame = std::max(frame, reason_frame(p->var()));
    }
    learned[0] = ~*p;
    for (Var v : touched)
        seen_[v] = false;

    int backjump = 0;
    if (learned.size() > 1) {
        std::size_t best = 1;
        for (std::size_t i = 2; i < learned.size(); ++i)
            if (level(learned[i].var()) > level(learned[best].var()))
                best = i;
        std::swap(learned[1], learned[best]);
        backjump = level(learned[1].var());
    }
    return {learned, backjump};
}

void Solver::learn(std::vector<Lit> lits, int backjump, std::uint32_t frame)
{
    backtrack(backjump);
    ++stats_.learned;
    if (lits.size() == 1) {
        units_.push_back({lits[0], ClauseKind::Learned, frame});
        enqueue(lits[0], Reason{});
        level0_frame_[lits[0].var()] = frame;
        return;
    }
    std::vector<int> levels;
    for (Lit l : lits)
        levels.push_back(level(l.var()));
    std::sort(levels.begin(), levels.end());
    auto lbd = static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
    auto cref = static_cast<std::uint32_t>(clauses_.size());
    clauses_.push_back(Clause{std::move(lits), ClauseKind::Learned, frame, lbd, false});
    attach(cref);
    enqueue(clauses_[cref].lits[0], Reason{ReasonKind::Clause, cref, 0});
}

void Solver::analyze_final(Lit p)
{
    core_ = {p};
    Var x = p.var();
    if (level(x) == 0 || trail_lim_.empty())
        return;
    seen_[x] = true;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
        Var v = trail_[i].var();
        if (!seen_[v])
            continue;
        if (reasons_[v].kind == ReasonKind::Decision) {
            if (v != x)
                core_.push_back(trail_[i]);
        } else {
            for (Lit q : reason_lits(v))
                if (q.var() != v && level(q.var()) > 0)
                    seen_[q.var()] = true;
        }
        seen_[v] = false;
    }
    seen_[x] = false;
}

// ---------------------------------------------------------------------------
// Search

bool Solver::partial_model_ok() const
{
    for (Var v = 0; v < num_vars(); ++v)
        if (required_[v] && assigns_[v] == LBool::Undef)
            return false;
    for (const Unit& u : units_)
        if (u.kind != ClauseKind::Learned && value(u.lit) != LBool::True)
            return false;
    for (const Clause& c : clauses_) {
        if (c.deleted || c.kind == ClauseKind::Learned)
            continue;
        if (std::none_of(c.lits.begin(), c.lits.end(), [this](Lit l) { return value(l) == LBool::True; }))
            return false;
    }
    return true;
}

std::optional<Lit> Solver::pick_branch()
{
    while (!heap_.empty()) {
        Var v = heap_pop();
        if (assigns_[v] == LBool::Undef && decidable_[v])
            return Lit::make(v, !phase_[v]);
    }
    return std::nullopt;
}

bool Solver::out_of_time() const
{
    return deadline_ && std::chrono::steady_clock::now() > *deadline_;
}

Result Solver::solve(const std::vector<Lit>& assumptions)
{
    core_.clear();
    for (Lit a : assumptions)
        if (a.var() >= num_vars())
            throw UsageError("assumption over an unknown variable");
    backtrack(0);
    if (pending_conflict_) {
        bool stale = std::any_of(pending_conflict_->lits.begin(), pending_conflict_->lits.end(),
                                 [this](Lit l) { return value(l) != LBool::False; });
        if (stale)
            pending_conflict_.reset();
    }
    if (!empty_frames_.empty())
        return Result::Unsat;
    if (trail_cleared_)
        requeue_units();

    std::uint64_t restart_index = 0;
    std::uint64_t restart_limit = kRestartBase * luby(restart_index);
    std::uint64_t conflicts_here = 0;
    std::uint64_t steps = 0;

    for (;;) {
        std::optional<Conflict> conflict;
        if (pending_conflict_) {
            conflict = std::move(pending_conflict_);
            pending_conflict_.reset();
        } else {
            conflict = propagate_all();
        }

        if (conflict) {
            ++stats_.conflicts;
            int top = 0;
            for (Lit l : conflict->lits)
                top = std::max(top, level(l.var()));
            if (conflict->lits.empty() || top == 0 || decision_level() == 0) {
                backtrack(0);
                return Result::Unsat;
            }
            if (top < decision_level())
                backtrack(top);
            std::uint32_t frame = 0;
            auto [learned, backjump] = analyze_conflict(*conflict, frame);
            learn(std::move(learned), backjump, frame);
            var_inc_ /= kVarDecay;
            if (++conflicts_since_reduce_ >= kReduceInterval)
                reduce_db();
            if (out_of_time())
                return Result::Unknown;
            if (++conflicts_here >= restart_limit) {
                conflicts_here = 0;
                restart_limit = kRestartBase * luby(++restart_index);
                ++stats_.restarts;
                backtrack(0);
            }
            continue;
        }

        if ((++steps & 255u) == 0 && out_of_time())
            return Result::Unknown;

        if (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
            Lit a = assumptions[decision_level()];
            LBool v = value(a);
            if (v == LBool::True) {
                trail_lim_.push_back(trail_.size());
            } else if (v == LBool::False) {
                analyze_final(a);
                return Result::Unsat;
            } else {
                decide(a);
            }
            continue;
        }

        std::optional<Lit> next;
        if (!(partial_models_ && partial_model_ok()))
            next = pick_branch();
        if (next) {
            decide(*next);
            continue;
        }

        FinalVerdict verdict = listener_ ? listener_->final_check(*this) : FinalVerdict::Accept;
        if (verdict == FinalVerdict::Continue)
            continue;
        model_ = assigns_;
        return verdict == FinalVerdict::Accept ? Result::Sat : Result::Interrupted;
    }
}

// ---------------------------------------------------------------------------
// Activity heap

bool Solver::heap_less(Var a, Var b) const
{
    if (activity_[a] != activity_[b])
        return activity_[a] > activity_[b];
    return a < b;
}

void Solver::heap_insert(Var v)
{
    if (heap_pos_[v] >= 0)
        return;
    heap_pos_[v] = static_cast<std::int64_t>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i)
{
    Var v = heap_[i];
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!heap_less(v, heap_[parent]))
            break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = static_cast<std::int64_t>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<std::int64_t>(i);
}

void Solver::heap_down(std::size_t i)
{
    Var v = heap_[i];
    for (;;) {
        std::size_t child = 2 * i + 1;
        if (child >= heap_.size())
            break;
        if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child]))
            ++child;
        if (!heap_less(heap_[child], v))
            break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = static_cast<std::int64_t>(i);
        i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<std::int64_t>(i);
}

Var Solver::heap_pop()
{
    Var top = heap_.front();
    heap_pos_[top] = -1;
    Var last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return top;
}

void Solver::bump(Var v)
{
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (double& a : activity_)
            a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0)
        heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

// ---------------------------------------------------------------------------
// DIMACS

Cnf read_dimacs(std::istream& in)
{
    Cnf cnf;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<int> current;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == 'c' || first[0] == '%')
            continue;
        if (first == "p") {
            std::string fmt;
            long long vars = -1, count = -1;
            if (!(ls >> fmt >> vars >> count) || fmt != "cnf" || vars < 0 || count < 0)
                throw ParseError("malformed DIMACS header", line_no, 1);
            cnf.num_vars = static_cast<std::size_t>(vars);
            header = true;
            continue;
        }
        if (!header)
            throw ParseError("clause before the DIMACS header", line_no, 1);
        std::istringstream body(line);
        long long x;
        while (body >> x) {
            if (x == 0) {
                cnf.clauses.push_back(current);
                current.clear();
                continue;
            }
            if (static_cast<std::size_t>(x < 0 ? -x : x) > cnf.num_vars)
                throw ParseError("literal " + std::to_string(x) + " exceeds the declared variable count", line_no, 1);
            current.push_back(static_cast<int>(x));
        }
        if (!body.eof())
            throw ParseError("non-integer token in clause", line_no, 1);
    }
    if (!current.empty())
        cnf.clauses.push_back(current);
    if (!header)
        throw ParseError("missing DIMACS header", 0, 0);
    return cnf;
}

void load(Solver& solver, const Cnf& cnf)
{
    while (solver.num_vars() < cnf.num_vars)
        solver.new_var();
    for (const auto& c : cnf.clauses) {
        std::vector<Lit> lits;
        for (int d : c)
            lits.push_back(Lit::from_dimacs(d));
        solver.add_clause(std::move(lits));
    }
}

} // namespace omt::sat
