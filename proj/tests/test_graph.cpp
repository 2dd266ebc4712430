#include <gtest/gtest.h>

#include <random>

#include "wtrnet/graph.hpp"

using namespace wtrnet;

namespace {

NetworkGraph fig3() {
    return build_graph({{"s", NodeRole::source}, {"t1", NodeRole::intermediate}, {"t2", NodeRole::intermediate},
                        {"u", NodeRole::user}},
                       {{"s", "t1"}, {"s", "t2"}, {"t1", "u"}, {"t2", "u"}});
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::invalid_argument;
}

}  // namespace

TEST(Graph, TwoPathShape) {
    auto g = fig3();
    EXPECT_EQ(g.node_count(), 4u);
    EXPECT_EQ(g.edge_count(), 4u);
    EXPECT_EQ(g.topological_order(), (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_EQ(g.edge_label(2), "t1->u");
}

TEST(Graph, Errors) {
    EXPECT_EQ(code_of([] { build_graph({{"s"}, {"t"}}, {{"s", "t"}, {"t", "s"}}); }), Errc::not_acyclic);
    EXPECT_EQ(code_of([] { build_graph({{"s"}}, {{"s", "x"}}); }), Errc::unknown_node);
    EXPECT_EQ(code_of([] { build_graph({{"s"}, {"s"}}, {}); }), Errc::duplicate_node);
    EXPECT_EQ(code_of([] { fig3().adjacency("nope"); }), Errc::unknown_node);
    EXPECT_EQ(code_of([] { build_graph({{"s"}}, {{"s", "s"}}); }), Errc::not_acyclic);
}

TEST(Graph, ParallelEdges) {
    auto g = build_graph({{"s", NodeRole::source}, {"u", NodeRole::user}}, {{"s", "u"}, {"s", "u"}});
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.adjacency("s"), (std::vector<EdgeId>{0, 1}));
}

TEST(Graph, Adjacency) {
    auto g = fig3();
    EXPECT_EQ(adjacency(g, "t1"), (std::vector<EdgeId>{0, 2}));
    EXPECT_EQ(adjacency(g, "u"), (std::vector<EdgeId>{2, 3}));
    auto iso = build_graph({{"a"}, {"b"}}, {});
    EXPECT_TRUE(iso.adjacency("a").empty());
}

TEST(Graph, TieBreakByInsertionOrder) {
    auto g = build_graph({{"c"}, {"b"}, {"a"}}, {{"a", "b"}});
    // c and a are both ready; c was inserted first.
    EXPECT_EQ(g.topological_order(), (std::vector<std::size_t>{0, 2, 1}));
}

// Random DAGs: topological order respects every edge and adjacency is symmetric.
TEST(GraphProperty, RandomDags) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        std::vector<Node> nodes;
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) {
            nodes.push_back({"n" + std::to_string(i)});
            perm[i] = i;
        }
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<EdgeSpec> edges;
        const int m = static_cast<int>(rng() % 12);
        for (int k = 0; k < m; ++k) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            if (perm[a] > perm[b]) std::swap(a, b);
            edges.push_back({nodes[a].id, nodes[b].id});
        }
        auto g = build_graph(nodes, edges);
        std::vector<std::size_t> pos(n);
        for (std::size_t i = 0; i < g.topological_order().size(); ++i) pos[g.topological_order()[i]] = i;
        for (const auto& e : g.edges()) {
            EXPECT_LT(pos[e.tail], pos[e.head]);
            auto at = g.adjacency(g.node(e.tail).id), ah = g.adjacency(g.node(e.head).id);
            EXPECT_NE(std::find(at.begin(), at.end(), e.id), at.end());
            EXPECT_NE(std::find(ah.begin(), ah.end(), e.id), ah.end());
        }
    }
}
