#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace omt::euf {

using NodeId = std::uint32_t;
/// Caller-chosen identifier of an asserted literal; explanations are sets of tags.
using Tag = std::uint32_t;

struct Conflict {
    std::vector<Tag> tags;
};

struct Mark {
    std::uint64_t id = 0;
};

/// Backtrackable congruence closure. Terms must all be added before the
/// first assertion; union by size without path compression keeps every
/// merge undoable, and a proof forest yields explanations.
class EGraph {
public:
    NodeId add_leaf();
    /// Application of function `func`; structurally equal applications share a node.
    NodeId add_app(std::uint32_t func, std::vector<NodeId> args);
    std::size_t num_nodes() const noexcept { return parent_.size(); }

    std::optional<Conflict> assert_eq(NodeId a, NodeId b, Tag tag);
    std::optional<Conflict> assert_diseq(NodeId a, NodeId b, Tag tag);

    NodeId find(NodeId n) const;
    bool are_equal(NodeId a, NodeId b) const { return find(a) == find(b); }
    /// Tags of asserted equalities entailing a = b. Requires are_equal(a, b).
    std::vector<Tag> explain(NodeId a, NodeId b) const;

    Mark mark();
    void backtrack(Mark m);

    bool is_app(NodeId n) const { return func_[n].has_value(); }
    std::uint32_t func(NodeId n) const { return *func_[n]; }
    const std::vector<NodeId>& args(NodeId n) const { return args_[n]; }

private:
    struct Congruence {
        NodeId a;
        NodeId b;
    };
    using Justification = std::variant<Tag, Congruence>;
    using Signature = std::pair<std::uint32_t, std::vector<NodeId>>;

    struct UndoUnion {
        NodeId child;
        NodeId root;
        std::size_t uses;
    };
    struct UndoProof {
        NodeId node;
        std::optional<NodeId> parent;
        std::optional<Justification> why;
    };
    struct UndoTable {
        Signature key;
        std::optional<NodeId> old;
    };
    struct UndoDiseq {};
    using Undo = std::variant<UndoUnion, UndoProof, UndoTable, UndoDiseq>;

    Signature signature(NodeId app) const;
    void set_table(const Signature& key, NodeId value);
    std::optional<NodeId> lookup(const Signature& key) const;
    void merge(NodeId a, NodeId b, Justification why);
    void set_proof(NodeId node, std::optional<NodeId> parent, std::optional<Justification> why);
    std::optional<Conflict> check_diseqs() const;

    std::vector<std::optional<std::uint32_t>> func_;
    std::vector<std::vector<NodeId>> args_;
    std::vector<NodeId> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<std::vector<NodeId>> uses_;
    std::vector<std::optional<NodeId>> proof_parent_;
    std::vector<std::optional<Justification>> proof_why_;
    std::map<Signature, NodeId> table_;
    std::map<Signature, NodeId> apps_;
    struct Diseq {
        NodeId a;
        NodeId b;
        Tag tag;
    };
    std::vector<Diseq> diseqs_;
    std::vector<Undo> trail_;
    std::vector<std::pair<std::uint64_t, std::size_t>> marks_;
    std::uint64_t next_mark_ = 1;
};

} // namespace omt::euf
