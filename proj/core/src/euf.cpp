#include "omt/euf.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "omt/errors.hpp"

namespace omt::euf {

NodeId EGraph::add_leaf()
{
    if (!trail_.empty())
        throw UsageError("terms must be added before the first assertion");
    auto n = static_cast<NodeId>(parent_.size());
    func_.emplace_back();
    args_.emplace_back();
    parent_.push_back(n);
    size_.push_back(1);
    uses_.emplace_back();
    proof_parent_.emplace_back();
    proof_why_.emplace_back();
    return n;
}

NodeId EGraph::add_app(std::uint32_t func, std::vector<NodeId> args)
{
    if (!trail_.empty())
        throw UsageError("terms must be added before the first assertion");
    for (NodeId a : args)
        if (a >= num_nodes())
            throw UsageError("application over an unknown node");
    Signature key{func, args};
    if (auto it = apps_.find(key); it != apps_.end())
        return it->second;
    NodeId n = add_leaf();
    func_[n] = func;
    args_[n] = args;
    std::vector<NodeId> distinct = args;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (NodeId a : distinct)
        uses_[find(a)].push_back(n);
    apps_.emplace(key, n);
    table_.emplace(std::move(key), n);
    return n;
}

NodeId EGraph::find(NodeId n) const
{
    while (parent_[n] != n)
        n = parent_[n];
    return n;
}

EGraph::Signature EGraph::signature(NodeId app) const
{
    Signature s{*func_[app], {}};
    s.second.reserve(args_[app].size());
    for (NodeId a : args_[app])
        s.second.push_back(find(a));
    return s;
}

std::optional<NodeId> EGraph::lookup(const Signature& key) const
{
    auto it = table_.find(key);
    if (it == table_.end() || signature(it->second) != key)
        return std::nullopt;
    return it->second;
}

void EGraph::set_table(const Signature& key, NodeId value)
{
    std::optional<NodeId> old;
    if (auto it = table_.find(key); it != table_.end())
        old = it->second;
    trail_.push_back(UndoTable{key, old});
    table_[key] = value;
}

void EGraph::set_proof(NodeId node, std::optional<NodeId> parent, std::optional<Justification> why)
{
    trail_.push_back(UndoProof{node, proof_parent_[node], proof_why_[node]});
    proof_parent_[node] = parent;
    proof_why_[node] = std::move(why);
}

void EGraph::merge(NodeId a, NodeId b, Justification why)
{
    struct Pending {
        NodeId a;
        NodeId b;
        Justification why;
    };
    std::deque<Pending> queue{{a, b, std::move(why)}};
    while (!queue.empty()) {
        Pending p = std::move(queue.front());
        queue.pop_front();
        NodeId ra = find(p.a);
        NodeId rb = find(p.b);
        if (ra == rb)
            continue;

        // Re-root the proof tree of p.a at p.a, then hang it below p.b.
        std::optional<NodeId> prev;
        std::optional<Justification> prev_why;
        std::optional<NodeId> cur = p.a;
        while (cur) {
            std::optional<NodeId> next = proof_parent_[*cur];
            std::optional<Justification> next_why = proof_why_[*cur];
            set_proof(*cur, prev, prev_why);
            prev = cur;
            prev_why = std::move(next_why);
            cur = next;
        }
        set_proof(p.a, p.b, p.why);

        if (size_[ra] > size_[rb])
            std::swap(ra, rb);
        trail_.push_back(UndoUnion{ra, rb, uses_[rb].size()});
        parent_[ra] = rb;
        size_[rb] += size_[ra];
        for (NodeId app : uses_[ra]) {
            Signature sig = signature(app);
            if (auto other = lookup(sig)) {
                if (find(*other) != find(app))
                    queue.push_back({app, *other, Congruence{app, *other}});
            } else {
                set_table(sig, app);
            }
        }
        uses_[rb].insert(uses_[rb].end(), uses_[ra].begin(), uses_[ra].end());
    }
}

std::vector<Tag> EGraph::explain(NodeId a, NodeId b) const
{
    if (!are_equal(a, b))
        throw UsageError("explain on terms that are not equal");
    std::vector<Tag> out;
    std::set<std::pair<NodeId, NodeId>> done;
    std::vector<std::pair<NodeId, NodeId>> work{{a, b}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        if (x == y || !done.insert({std::min(x, y), std::max(x, y)}).second)
            continue;
        std::set<NodeId> ancestors;
        for (std::optional<NodeId> n = x; n; n = proof_parent_[*n])
            ancestors.insert(*n);
        NodeId common = y;
        while (!ancestors.count(common))
            common = *proof_parent_[common];
        for (NodeId start : {x, y}) {
            for (NodeId n = start; n != common; n = *proof_parent_[n]) {
                const Justification& why = *proof_why_[n];
                if (const Tag* t = std::get_if<Tag>(&why)) {
                    out.push_back(*t);
                } else {
                    const auto& c = std::get<Congruence>(why);
                    for (std::size_t i = 0; i < args_[c.a].size(); ++i)
                        work.emplace_back(args_[c.a][i], args_[c.b][i]);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<Conflict> EGraph::check_diseqs() const
{
    for (const Diseq& d : diseqs_) {
        if (are_equal(d.a, d.b)) {
            Conflict c{explain(d.a, d.b)};
            if (std::find(c.tags.begin(), c.tags.end(), d.tag) == c.tags.end())
                c.tags.push_back(d.tag);
            return c;
        }
    }
    return std::nullopt;
}

std::optional<Conflict> EGraph::assert_eq(NodeId a, NodeId b, Tag tag)
{
    merge(a, b, tag);
    return check_diseqs();
}

std::optional<Conflict> EGraph::assert_diseq(NodeId a, NodeId b, Tag tag)
{
    trail_.push_back(UndoDiseq{});
    diseqs_.push_back({a, b, tag});
    return check_diseqs();
}

Mark EGraph::mark()
{
    Mark m{next_mark_++};
    marks_.emplace_back(m.id, trail_.size());
    return m;
}

void EGraph::backtrack(Mark m)
{
    auto it = std::find_if(marks_.begin(), marks_.end(), [&](const auto& e) { return e.first == m.id; });
    if (it == marks_.end())
        throw UsageError("backtrack to an unknown or stale mark");
    std::size_t size = it->second;
    marks_.erase(it, marks_.end());
    while (trail_.size() > size) {
        Undo u = std::move(trail_.back());
        trail_.pop_back();
        if (auto* un = std::get_if<UndoUnion>(&u)) {
            parent_[un->child] = un->child;
            size_[un->root] -= size_[un->child];
            uses_[un->root].resize(un->uses);
        } else if (auto* pr = std::get_if<UndoProof>(&u)) {
            proof_parent_[pr->node] = pr->parent;
            proof_why_[pr->node] = std::move(pr->why);
        } else if (auto* tb = std::get_if<UndoTable>(&u)) {
            if (tb->old)
                table_[tb->key] = *tb->old;
            else
                table_.erase(tb->key);
        } else {
            diseqs_.pop_back();
        }
    }
}

} // namespace omt::euf
