#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wtrnet/error.hpp"

namespace wtrnet {

enum class NodeRole { source, user, intermediate };

constexpr std::string_view to_string(NodeRole r) noexcept {
    switch (r) {
        case NodeRole::source: return "source";
        case NodeRole::user: return "user";
        case NodeRole::intermediate: return "intermediate";
    }
    return "intermediate";
}

inline NodeRole parse_node_role(std::string_view s) {
    if (s == "source") return NodeRole::source;
    if (s == "user") return NodeRole::user;
    if (s == "intermediate") return NodeRole::intermediate;
    throw Error(Errc::parse_error, "unknown node role '" + std::string(s) + "'");
}

using EdgeId = std::size_t;

struct Node {
    std::string id;
    NodeRole role = NodeRole::intermediate;

    friend bool operator==(const Node&, const Node&) = default;
};

struct EdgeSpec {
    std::string tail;
    std::string head;

    friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

struct Edge {
    EdgeId id;
    std::size_t tail;
    std::size_t head;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed acyclic multigraph with unit-capacity edges.
///
/// Nodes and edges keep their insertion order; edge ids are positions in that
/// order. The topological order is computed once at construction, breaking
/// ties by node insertion order.
class NetworkGraph {
public:
    NetworkGraph() = default;

    static NetworkGraph build(std::vector<Node> nodes, const std::vector<EdgeSpec>& edges) {
        NetworkGraph g;
        g.nodes_ = std::move(nodes);
        for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
            if (!g.index_.emplace(g.nodes_[i].id, i).second)
                throw Error(Errc::duplicate_node, "node '" + g.nodes_[i].id + "' declared twice");
        }
        g.in_.assign(g.nodes_.size(), {});
        g.out_.assign(g.nodes_.size(), {});
        for (const auto& e : edges) {
            const std::size_t t = g.index_of(e.tail);
            const std::size_t h = g.index_of(e.head);
            const EdgeId id = g.edges_.size();
            g.edges_.push_back({id, t, h});
            g.out_[t].push_back(id);
            g.in_[h].push_back(id);
        }
        g.order_ = g.compute_topological_order();
        return g;
    }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Node& node(std::size_t i) const { return nodes_.at(i); }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }

    bool contains(std::string_view id) const { return index_.contains(std::string(id)); }

    std::size_t index_of(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) throw Error(Errc::unknown_node, "no node '" + std::string(id) + "'");
        return it->second;
    }

    const std::vector<EdgeId>& in_edges(std::size_t node) const { return in_.at(node); }
    const std::vector<EdgeId>& out_edges(std::size_t node) const { return out_.at(node); }
    const std::vector<std::size_t>& topological_order() const noexcept { return order_; }

    /// Edges incident to `id` as tail or head, in ascending id order.
    std::vector<EdgeId> adjacency(std::string_view id) const {
        const std::size_t v = index_of(id);
        std::vector<EdgeId> adj = in_[v];
        adj.insert(adj.end(), out_[v].begin(), out_[v].end());
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        return adj;
    }

    std::string edge_label(EdgeId e) const {
        const Edge& ed = edges_.at(e);
        return nodes_[ed.tail].id + "->" + nodes_[ed.head].id;
    }

    std::vector<EdgeSpec> edge_specs() const {
        std::vector<EdgeSpec> out;
        out.reserve(edges_.size());
        for (const auto& e : edges_) out.push_back({nodes_[e.tail].id, nodes_[e.head].id});
        return out;
    }

    friend bool operator==(const NetworkGraph& a, const NetworkGraph& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    std::vector<std::size_t> compute_topological_order() const {
        std::vector<std::size_t> indegree(nodes_.size(), 0);
        for (const auto& e : edges_) ++indegree[e.head];
        std::set<std::size_t> ready;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (indegree[i] == 0) ready.insert(i);
        std::vector<std::size_t> order;
        order.reserve(nodes_.size());
        while (!ready.empty()) {
            const std::size_t v = *ready.begin();
            ready.erase(ready.begin());
            order.push_back(v);
            for (EdgeId e : out_[v])
                if (--indegree[edges_[e].head] == 0) ready.insert(edges_[e].head);
        }
        if (order.size() != nodes_.size()) throw Error(Errc::not_acyclic, "graph contains a directed cycle");
        return order;
    }

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<EdgeId>> in_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::size_t> order_;
};

/// Convenience wrapper matching the free-function style of the other modules.
inline NetworkGraph build_graph(std::vector<Node> nodes, const std::vector<EdgeSpec>& edges) {
    return NetworkGraph::build(std::move(nodes), edges);
}

inline std::vector<EdgeId> adjacency(const NetworkGraph& g, std::string_view node) { return g.adjacency(node); }

}  // namespace wtrnet
