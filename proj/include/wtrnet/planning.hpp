#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wtrnet/error.hpp"
#include "wtrnet/graph.hpp"
#include "wtrnet/netcode.hpp"
#include "wtrnet/optical.hpp"
#include "wtrnet/resilience.hpp"

namespace wtrnet {

struct NetcodeMapping {
    NetworkGraph graph;
    std::string source;
    std::string user;
    std::vector<NodePath> paths;  // chosen repeater paths, source first
    bool insufficient_paths = true;
    std::map<std::string, std::map<std::string, Reach>> reach;  // emitter -> receiver -> best channel
};

inline constexpr std::size_t default_max_hops = 4;

namespace detail {

struct PathChoice {
    std::vector<std::size_t> chosen;
    std::size_t hops = 0;
};

// Better = more paths, then fewer total hops, then earlier in candidate order.
inline bool better_choice(const PathChoice& a, const PathChoice& b) {
    if (a.chosen.size() != b.chosen.size()) return a.chosen.size() > b.chosen.size();
    if (a.hops != b.hops) return a.hops < b.hops;
    return a.chosen < b.chosen;
}

inline void pick_disjoint(const std::vector<NodePath>& cand, std::size_t from, PathChoice& cur,
                          std::set<std::string>& used, PathChoice& best) {
    if (better_choice(cur, best)) best = cur;
    for (std::size_t i = from; i < cand.size(); ++i) {
        if (cur.chosen.size() + (cand.size() - i) < best.chosen.size()) return;
        const auto& p = cand[i];
        bool clash = false;
        for (std::size_t k = 1; k + 1 < p.size(); ++k) clash = clash || used.contains(p[k]);
        if (clash) continue;
        for (std::size_t k = 1; k + 1 < p.size(); ++k) used.insert(p[k]);
        cur.chosen.push_back(i);
        cur.hops += p.size() - 1;
        pick_disjoint(cand, i + 1, cur, used, best);
        cur.hops -= p.size() - 1;
        cur.chosen.pop_back();
        for (std::size_t k = 1; k + 1 < p.size(); ++k) used.erase(p[k]);
    }
}

}  // namespace detail

/// Abstract key-relay graph for one (source emitter, user emitter) pair.
///
/// Emitters and receivers that share a QKD link within the budget are
/// adjacent. Simple alternating paths of at most `max_hops` links are
/// enumerated, a maximum internally disjoint subset is chosen (fewest total
/// hops, then lexicographic), and the union of those paths is oriented from
/// the source to the user.
inline NetcodeMapping to_netcode_graph(const OpticalTopology& topo, const std::string& tx_source,
                                       const std::string& tx_user, double budget_db,
                                       std::size_t max_hops = default_max_hops) {
    for (const auto& tx : {tx_source, tx_user})
        if (!topo.contains(tx) || topo.element(tx).kind != ComponentKind::emitter)
            throw Error(Errc::unknown_emitter, "no emitter '" + tx + "'");
    if (tx_source == tx_user) throw Error(Errc::invalid_argument, "pairing needs two distinct emitters");

    NetcodeMapping m;
    m.source = tx_source;
    m.user = tx_user;
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& tx : topo.emitters()) {
        m.reach[tx] = reachable_receivers(topo, tx, budget_db);
        for (const auto& [rx, _] : m.reach[tx]) {
            adj[tx].insert(rx);
            adj[rx].insert(tx);
        }
    }

    std::vector<NodePath> cand;
    NodePath cur{tx_source};
    std::set<std::string> on_path{tx_source};
    auto dfs = [&](auto&& self, const std::string& v) -> void {
        if (cur.size() - 1 >= max_hops) return;
        for (const auto& w : adj[v]) {
            if (w == tx_user) {
                cur.push_back(w);
                cand.push_back(cur);
                cur.pop_back();
                continue;
            }
            if (on_path.contains(w)) continue;
            cur.push_back(w);
            on_path.insert(w);
            self(self, w);
            on_path.erase(w);
            cur.pop_back();
        }
    };
    dfs(dfs, tx_source);
    std::stable_sort(cand.begin(), cand.end(), [](const NodePath& a, const NodePath& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    detail::PathChoice best, work;
    std::set<std::string> used;
    detail::pick_disjoint(cand, 0, work, used, best);
    for (std::size_t i : best.chosen) m.paths.push_back(cand[i]);
    m.insufficient_paths = m.paths.size() < 2;

    std::vector<Node> nodes{{tx_source, NodeRole::source}};
    std::vector<EdgeSpec> edges;
    for (const auto& p : m.paths) {
        for (std::size_t k = 1; k + 1 < p.size(); ++k) nodes.push_back({p[k], NodeRole::intermediate});
        for (std::size_t k = 0; k + 1 < p.size(); ++k) edges.push_back({p[k], p[k + 1]});
    }
    nodes.push_back({tx_user, NodeRole::user});
    m.graph = build_graph(std::move(nodes), edges);
    return m;
}

struct NetworkSpec {
    NetworkGraph graph;
    SourceSpec sources;
    std::vector<UserSpec> users;
    std::vector<EavesdropPattern> patterns;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct Plan {
    NetcodeMapping mapping;
    NetworkSpec network;
    std::optional<LinearNetworkCode> code;
    std::optional<AdmissibilityReport> admissibility;
    ResilienceReport resilience;
    double budget_db = 0.0;

    bool admissible() const { return admissibility && admissibility->admissible; }
};

/// One message symbol and one key symbol at the source, every repeater as a
/// single-node pattern targeting the message.
inline Plan build_plan(const OpticalTopology& topo, const std::string& tx_source, const std::string& tx_user,
                       double budget_db, std::uint32_t q, std::uint64_t search_cap = default_search_cap) {
    Plan plan;
    plan.budget_db = budget_db;
    plan.mapping = to_netcode_graph(topo, tx_source, tx_user, budget_db);
    const auto& g = plan.mapping.graph;
    plan.network.graph = g;
    plan.network.sources = SourceSpec(q, {{tx_source, 1, 1}});
    plan.network.users = {{tx_user, {0}}};
    std::vector<NamedPattern> named;
    for (const auto& n : g.nodes()) {
        if (n.role != NodeRole::intermediate) continue;
        plan.network.patterns.push_back({n.id, {n.id}, {0}});
        named.push_back({n.id, {n.id}});
    }
    plan.resilience = analyze_resilience(g, tx_source, tx_user, named);
    if (plan.mapping.insufficient_paths) return plan;
    plan.code = search_code(g, plan.network.sources, plan.network.users, plan.network.patterns, search_cap);
    if (plan.code) plan.admissibility = check_admissible(*plan.code, plan.network.users, plan.network.patterns);
    return plan;
}

}  // namespace wtrnet
