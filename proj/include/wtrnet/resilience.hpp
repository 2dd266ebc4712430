#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wtrnet/error.hpp"
#include "wtrnet/graph.hpp"

namespace wtrnet {

/// Node ids from source to user.
using NodePath = std::vector<std::string>;

struct DisjointPaths {
    std::size_t count = 0;
    std::vector<NodePath> paths;
};

namespace detail {

// Residual network over the node-split graph: node v becomes v_in = 2v and
// v_out = 2v + 1 joined by a unit arc (unbounded for the endpoints).
class SplitFlow {
public:
    SplitFlow(const NetworkGraph& g, std::size_t s, std::size_t u) : g_(g), adj_(2 * g.node_count()) {
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            const int cap = (v == s || v == u) ? static_cast<int>(g.edge_count()) + 1 : 1;
            add_arc(2 * v, 2 * v + 1, cap, npos);
        }
        for (const auto& e : g.edges()) add_arc(2 * e.tail + 1, 2 * e.head, 1, e.id);
        source_ = 2 * s + 1;
        sink_ = 2 * u;
    }

    // Edmonds-Karp; BFS scans arcs in insertion order so the witness is stable.
    std::size_t run() {
        std::size_t flow = 0;
        for (;;) {
            std::vector<std::size_t> via(adj_.size(), npos);
            std::vector<bool> seen(adj_.size(), false);
            std::deque<std::size_t> queue{source_};
            seen[source_] = true;
            while (!queue.empty() && !seen[sink_]) {
                const std::size_t x = queue.front();
                queue.pop_front();
                for (std::size_t a : adj_[x]) {
                    const Arc& arc = arcs_[a];
                    if (arc.cap > 0 && !seen[arc.to]) {
                        seen[arc.to] = true;
                        via[arc.to] = a;
                        queue.push_back(arc.to);
                    }
                }
            }
            if (!seen[sink_]) return flow;
            for (std::size_t x = sink_; x != source_;) {
                const std::size_t a = via[x];
                arcs_[a].cap -= 1;
                arcs_[a ^ 1].cap += 1;
                x = arcs_[a ^ 1].to;
            }
            ++flow;
        }
    }

    // Walks saturated graph edges from s to u, consuming them.
    std::vector<NodePath> decompose(std::size_t count) {
        std::vector<NodePath> out;
        const std::size_t s = source_ / 2, u = sink_ / 2;
        std::vector<bool> used(g_.edge_count(), false);
        for (std::size_t k = 0; k < count; ++k) {
            NodePath path{g_.node(s).id};
            std::size_t v = s;
            while (v != u) {
                bool moved = false;
                for (EdgeId e : g_.out_edges(v)) {
                    if (used[e] || arcs_[edge_arc_[e]].cap != 0) continue;
                    used[e] = true;
                    v = g_.edge(e).head;
                    path.push_back(g_.node(v).id);
                    moved = true;
                    break;
                }
                if (!moved) break;
            }
            out.push_back(std::move(path));
        }
        return out;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    struct Arc {
        std::size_t to;
        int cap;
    };

    void add_arc(std::size_t from, std::size_t to, int cap, std::size_t edge) {
        if (edge != npos) {
            if (edge_arc_.size() <= edge) edge_arc_.resize(edge + 1, npos);
            edge_arc_[edge] = arcs_.size();
        }
        adj_[from].push_back(arcs_.size());
        arcs_.push_back({to, cap});
        adj_[to].push_back(arcs_.size());
        arcs_.push_back({from, 0});
    }

    const NetworkGraph& g_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Arc> arcs_;
    std::vector<std::size_t> edge_arc_;
    std::size_t source_ = 0;
    std::size_t sink_ = 0;
};

}  // namespace detail

/// Maximum set of internally node-disjoint s-u paths. A direct s->u edge is a
/// path with no internal nodes, and parallel direct edges each count.
inline DisjointPaths node_disjoint_paths(const NetworkGraph& g, std::string_view s, std::string_view u) {
    const std::size_t si = g.index_of(s);
    const std::size_t ui = g.index_of(u);
    if (si == ui) throw Error(Errc::invalid_argument, "source and user must differ");
    detail::SplitFlow flow(g, si, ui);
    DisjointPaths r;
    r.count = flow.run();
    r.paths = flow.decompose(r.count);
    return r;
}

/// Largest t with 3t+1 <= path_count; nullopt when there is no path at all.
inline std::optional<std::size_t> byzantine_bound(std::size_t path_count) {
    if (path_count == 0) return std::nullopt;
    return (path_count - 1) / 3;
}

inline std::size_t secure_rate_bound(std::size_t capacity, std::size_t t) { return capacity > t ? capacity - t : 0; }

struct AuthenticityResult {
    std::vector<bool> per_pattern;
    bool overall = true;
};

/// A pattern is harmless for authenticity if some path avoids all of its
/// tapped nodes (endpoints excluded).
inline AuthenticityResult authenticity_feasible(const std::vector<NodePath>& paths,
                                                const std::vector<std::vector<std::string>>& patterns) {
    AuthenticityResult r;
    for (const auto& tapped : patterns) {
        const std::set<std::string> bad(tapped.begin(), tapped.end());
        bool ok = bad.empty();
        for (const auto& p : paths) {
            bool clean = true;
            for (std::size_t i = 1; i + 1 < p.size(); ++i)
                if (bad.contains(p[i])) clean = false;
            if (clean) ok = true;
        }
        r.per_pattern.push_back(ok);
        r.overall = r.overall && ok;
    }
    return r;
}

struct ResilienceReport {
    std::string source;
    std::string user;
    std::size_t disjoint_path_count = 0;
    std::vector<NodePath> paths;
    std::optional<std::size_t> max_byzantine_t;
    std::size_t queried_t = 0;
    std::size_t secure_rate_bound = 0;
    std::vector<std::string> pattern_ids;
    AuthenticityResult authenticity;
};

struct NamedPattern {
    std::string id;
    std::vector<std::string> tapped;
};

inline ResilienceReport analyze_resilience(const NetworkGraph& g, std::string_view s, std::string_view u,
                                           const std::vector<NamedPattern>& patterns, std::size_t t = 0) {
    ResilienceReport r;
    r.source = s;
    r.user = u;
    auto dp = node_disjoint_paths(g, s, u);
    r.disjoint_path_count = dp.count;
    r.paths = std::move(dp.paths);
    r.max_byzantine_t = byzantine_bound(r.disjoint_path_count);
    r.queried_t = t;
    r.secure_rate_bound = secure_rate_bound(r.disjoint_path_count, t);
    std::vector<std::vector<std::string>> tapped;
    for (const auto& p : patterns) {
        r.pattern_ids.push_back(p.id);
        tapped.push_back(p.tapped);
    }
    r.authenticity = authenticity_feasible(r.paths, tapped);
    return r;
}

}  // namespace wtrnet
