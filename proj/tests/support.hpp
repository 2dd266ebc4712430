#pragma once

// Shared test helpers: random code generation and brute-force graph oracles.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "wtrnet/wtrnet.hpp"

namespace wtrnet::test {

inline std::string data_path(const std::string& rel) { return std::string(WTRNET_DATA_DIR) + "/" + rel; }

struct RandomInstance {
    LinearNetworkCode code;
    ComponentSet target;
    EdgeSet observed;
};

/// Random DAG with at most `max_edges` edges, random source layout with total
/// dimension in [1, max_d], random local coefficients, random query.
inline RandomInstance random_instance(std::mt19937_64& rng, std::uint32_t q, std::size_t max_edges = 6,
                                      std::size_t max_d = 6) {
    auto pick = [&rng](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    const std::size_t n = pick(2, 5);
    std::vector<Node> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back({"v" + std::to_string(i)});
    // Edges only go from lower to higher index, so the graph is acyclic.
    std::vector<EdgeSpec> edges;
    const std::size_t m = pick(1, max_edges);
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t a = pick(0, n - 2);
        std::size_t b = pick(a + 1, n - 1);
        edges.push_back({nodes[a].id, nodes[b].id});
    }
    auto g = build_graph(nodes, edges);

    const std::size_t d = pick(1, max_d);
    std::vector<SourceAssignment> src;
    std::size_t left = d;
    while (left > 0) {
        const std::size_t take = pick(1, left);
        const std::size_t msg = pick(0, take);
        src.push_back({nodes[pick(0, n - 1)].id, msg, take - msg});
        left -= take;
    }
    // At least one message component keeps the target non-trivial.
    if (std::all_of(src.begin(), src.end(), [](const auto& s) { return s.message_dim == 0; })) {
        src[0].message_dim += 1;
        src[0].key_dim -= 1;
    }
    SourceSpec spec(q, src);
    auto local = zero_coefficients(g, spec);
    std::uniform_int_distribution<Symbol> coef(0, q - 1);
    for (auto& row : local)
        for (auto& v : row) v = coef(rng);
    RandomInstance r{propagate_code(g, spec, local), {}, {}};

    for (std::size_t c = 0; c < spec.dimension(); ++c)
        if (rng() % 2) r.target.push_back(c);
    if (r.target.empty()) r.target.push_back(pick(0, spec.dimension() - 1));
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (rng() % 2) r.observed.push_back(e);
    return r;
}

/// All directed s-u paths as node sequences (the graph is a DAG, so all are
/// simple). Parallel edges give repeated sequences, kept as distinct paths.
inline std::vector<std::vector<std::size_t>> all_paths(const NetworkGraph& g, std::size_t s, std::size_t u) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur{s};
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
        if (v == u) {
            out.push_back(cur);
            return;
        }
        for (EdgeId e : g.out_edges(v)) {
            cur.push_back(g.edge(e).head);
            dfs(g.edge(e).head);
            cur.pop_back();
        }
    };
    dfs(s);
    return out;
}

/// Largest set of internally node-disjoint paths, by exhaustive subset search.
inline std::size_t brute_disjoint_count(const NetworkGraph& g, std::size_t s, std::size_t u) {
    const auto paths = all_paths(g, s, u);
    std::size_t best = 0;
    std::vector<bool> used(g.node_count(), false);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t count) {
        best = std::max(best, count);
        for (std::size_t i = from; i < paths.size(); ++i) {
            const auto& p = paths[i];
            bool ok = true;
            for (std::size_t k = 1; k + 1 < p.size(); ++k) ok = ok && !used[p[k]];
            if (!ok) continue;
            for (std::size_t k = 1; k + 1 < p.size(); ++k) used[p[k]] = true;
            rec(i + 1, count + 1);
            for (std::size_t k = 1; k + 1 < p.size(); ++k) used[p[k]] = false;
        }
    };
    rec(0, 0);
    return best;
}

/// Minimum number of internal nodes whose removal separates s from u, plus
/// the direct s->u edges, which no node removal can cut.
inline std::size_t brute_min_cut(const NetworkGraph& g, std::size_t s, std::size_t u) {
    const auto paths = all_paths(g, s, u);
    std::size_t direct = 0;
    for (const auto& p : paths)
        if (p.size() == 2) ++direct;
    const std::size_t n = g.node_count();
    std::size_t best = n;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (mask & ((1u << s) | (1u << u))) continue;
        const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
        if (size >= best) continue;
        bool cut = true;
        for (const auto& p : paths) {
            if (p.size() == 2) continue;
            bool hit = false;
            for (std::size_t k = 1; k + 1 < p.size(); ++k) hit = hit || (mask >> p[k]) & 1u;
            if (!hit) cut = false;
        }
        if (cut) best = size;
    }
    return best + direct;
}

/// Checks that witness paths are real s-u paths and pairwise internally disjoint.
inline bool valid_witness(const NetworkGraph& g, const std::string& s, const std::string& u,
                          const std::vector<NodePath>& paths) {
    std::set<std::string> seen;
    for (const auto& p : paths) {
        if (p.size() < 2 || p.front() != s || p.back() != u) return false;
        for (std::size_t k = 0; k + 1 < p.size(); ++k) {
            const auto a = g.index_of(p[k]);
            const auto b = g.index_of(p[k + 1]);
            const auto& outs = g.out_edges(a);
            if (std::none_of(outs.begin(), outs.end(), [&](EdgeId e) { return g.edge(e).head == b; })) return false;
        }
        for (std::size_t k = 1; k + 1 < p.size(); ++k)
            if (!seen.insert(p[k]).second) return false;
    }
    return true;
}

/// Every network graph shipped under data/, plus the p1 planning graphs.
inline std::vector<std::pair<std::string, NetworkGraph>> bundled_graphs() {
    std::vector<std::pair<std::string, NetworkGraph>> out;
    for (const char* name : {"two_path", "multicast", "crossed", "two_path_nokey"})
        out.emplace_back(name, io::load_network(data_path(std::string("scenarios/") + name + ".network.json")).graph);
    for (const char* name : {"two_path", "p1_tx1_tx2"})
        out.emplace_back(std::string(name) + ".plan",
                         io::load_plan(data_path(std::string("scenarios/") + name + ".plan.json")).network.graph);
    const auto p1 = io::load_topology(data_path("topologies/p1.json"), Catalog(default_catalog()));
    for (const char* user : {"Tx2", "Tx3"})
        out.emplace_back(std::string("p1:Tx1-") + user, to_netcode_graph(p1, "Tx1", user, 20.0).graph);
    return out;
}

}  // namespace wtrnet::test
