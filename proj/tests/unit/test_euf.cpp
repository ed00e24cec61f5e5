#include <functional>
#include <map>
#include <set>

#include <catch_amalgamated.hpp>

#include "omt/ast.hpp"
#include "omt/euf.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace omt;
using euf::EGraph;
using euf::NodeId;

TEST_CASE("congruence closure merges applications", "[euf]")
{
    EGraph g;
    NodeId a = g.add_leaf(), b = g.add_leaf(), c = g.add_leaf();
    NodeId fa = g.add_app(0, {a}), fb = g.add_app(0, {b});
    NodeId ffa = g.add_app(0, {fa});
    CHECK(g.add_app(0, {a}) == fa);
    REQUIRE_FALSE(g.assert_eq(a, b, 1));
    CHECK(g.are_equal(fa, fb));
    REQUIRE_FALSE(g.assert_eq(fa, a, 2));
    CHECK(g.are_equal(ffa, a));
    auto why = g.explain(ffa, b);
    CHECK(std::set<euf::Tag>(why.begin(), why.end()) == std::set<euf::Tag>{1, 2});
    CHECK_FALSE(g.are_equal(a, c));
}

TEST_CASE("disequalities conflict with explanations and backtracking undoes merges", "[euf]")
{
    EGraph g;
    NodeId a = g.add_leaf(), b = g.add_leaf(), c = g.add_leaf();
    NodeId fa = g.add_app(7, {a}), fc = g.add_app(7, {c});
    REQUIRE_FALSE(g.assert_diseq(fa, fc, 10));
    euf::Mark m = g.mark();
    REQUIRE_FALSE(g.assert_eq(a, b, 11));
    auto conflict = g.assert_eq(b, c, 12);
    REQUIRE(conflict);
    CHECK(std::set<euf::Tag>(conflict->tags.begin(), conflict->tags.end()) == std::set<euf::Tag>{10, 11, 12});
    g.backtrack(m);
    CHECK_FALSE(g.are_equal(a, b));
    CHECK_FALSE(g.are_equal(fa, fc));
    CHECK_FALSE(g.assert_eq(a, b, 13));
}

TEST_CASE("consistency matches the Ackermann oracle", "[euf][property]")
{
    testing::Rng rng(99);
    std::uniform_int_distribution<int> pick(0, 3), coin(0, 2);
    int sat_count = 0;
    for (int round = 0; round < 200; ++round) {
        ast::Context ctx;
        ast::SortId u = ctx.declare_sort("U");
        std::vector<TermId> vars;
        for (int i = 0; i < 4; ++i)
            vars.push_back(ctx.declare_var("v" + std::to_string(i), u));
        ast::FuncId f = ctx.declare_fun("f", {u}, u);
        ast::FuncId g = ctx.declare_fun("g", {u, u}, u);
        auto term = [&]() -> TermId {
            switch (coin(rng)) {
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

        // Mirror the terms into an e-graph.
        EGraph eg;
        std::map<TermId, NodeId> node;
        std::function<NodeId(TermId)> add = [&](TermId t) -> NodeId {
            if (auto it = node.find(t); it != node.end())
                return it->second;
            const ast::TermNode& n = ctx.term(t);
            NodeId id;
            if (n.kind == ast::TermKind::Application) {
                std::vector<NodeId> args;
                for (TermId a : n.args)
                    args.push_back(add(a));
                id = eg.add_app(n.func, args);
            } else {
                id = eg.add_leaf();
            }
            return node[t] = id;
        };
        for (auto& [a, b] : p.equal)
            add(a), add(b);
        for (auto& [a, b] : p.distinct)
            add(a), add(b);
        bool ok = true;
        euf::Tag tag = 0;
        for (auto& [a, b] : p.equal)
            ok = ok && !eg.assert_eq(node[a], node[b], tag++);
        for (auto& [a, b] : p.distinct)
            ok = ok && !eg.assert_diseq(node[a], node[b], tag++);
        bool closure = oracle::euf_consistent_closure(ctx, p);
        REQUIRE(closure == oracle::euf_consistent_partitions(ctx, p));
        REQUIRE(ok == closure);
        sat_count += ok;
    }
    CHECK(sat_count > 20);
    CHECK(sat_count < 190);
}
