#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wtrnet/error.hpp"
#include "wtrnet/field.hpp"
#include "wtrnet/graph.hpp"
#include "wtrnet/linalg.hpp"

namespace wtrnet {

using ComponentSet = std::vector<std::size_t>;
using EdgeSet = std::vector<EdgeId>;

struct SourceAssignment {
    std::string node;
    std::size_t message_dim = 0;
    std::size_t key_dim = 0;

    friend bool operator==(const SourceAssignment&, const SourceAssignment&) = default;
};

/// Layout of the extended source vector (messages followed by uniform keys).
///
/// Component indices run over all message symbols first, in source order, then
/// all key symbols, again in source order. Message components therefore occupy
/// `[0, message_dim())` and key components `[message_dim(), dimension())`.
/// A node that only randomizes (a relay injecting fresh key) is a source with
/// `message_dim == 0`.
class SourceSpec {
public:
    SourceSpec() : field_(2) {}

    SourceSpec(std::uint32_t q, std::vector<SourceAssignment> sources) : field_(q), sources_(std::move(sources)) {
        if (dimension() == 0) throw Error(Errc::invalid_argument, "extended source dimension must be at least 1");
    }

    const PrimeField& field() const noexcept { return field_; }
    std::uint32_t q() const noexcept { return field_.modulus(); }
    const std::vector<SourceAssignment>& sources() const noexcept { return sources_; }

    std::size_t message_dim() const {
        return std::accumulate(sources_.begin(), sources_.end(), std::size_t{0},
                               [](std::size_t acc, const SourceAssignment& s) { return acc + s.message_dim; });
    }
    std::size_t key_dim() const {
        return std::accumulate(sources_.begin(), sources_.end(), std::size_t{0},
                               [](std::size_t acc, const SourceAssignment& s) { return acc + s.key_dim; });
    }
    std::size_t dimension() const { return message_dim() + key_dim(); }

    ComponentSet message_components(std::size_t source) const {
        std::size_t start = 0;
        for (std::size_t i = 0; i < source; ++i) start += sources_[i].message_dim;
        ComponentSet out(sources_.at(source).message_dim);
        std::iota(out.begin(), out.end(), start);
        return out;
    }

    ComponentSet key_components(std::size_t source) const {
        std::size_t start = message_dim();
        for (std::size_t i = 0; i < source; ++i) start += sources_[i].key_dim;
        ComponentSet out(sources_.at(source).key_dim);
        std::iota(out.begin(), out.end(), start);
        return out;
    }

    /// Components injected at `node`: its messages, then its keys.
    ComponentSet components_at(std::string_view node) const {
        ComponentSet msgs, keys;
        for (std::size_t i = 0; i < sources_.size(); ++i) {
            if (sources_[i].node != node) continue;
            auto m = message_components(i);
            auto k = key_components(i);
            msgs.insert(msgs.end(), m.begin(), m.end());
            keys.insert(keys.end(), k.begin(), k.end());
        }
        msgs.insert(msgs.end(), keys.begin(), keys.end());
        return msgs;
    }

    bool is_message_component(std::size_t c) const { return c < message_dim(); }

    friend bool operator==(const SourceSpec& a, const SourceSpec& b) {
        return a.q() == b.q() && a.sources_ == b.sources_;
    }

private:
    PrimeField field_;
    std::vector<SourceAssignment> sources_;
};

/// Local coding coefficients: for each edge, one coefficient per incoming edge of
/// its tail (in the tail's in-edge order) followed by one per component injected
/// at the tail.
using LocalCoefficients = std::vector<Row>;

inline std::size_t coefficient_arity(const NetworkGraph& g, const SourceSpec& s, EdgeId e) {
    const std::size_t tail = g.edge(e).tail;
    return g.in_edges(tail).size() + s.components_at(g.node(tail).id).size();
}

inline LocalCoefficients zero_coefficients(const NetworkGraph& g, const SourceSpec& s) {
    LocalCoefficients lc;
    for (EdgeId e = 0; e < g.edge_count(); ++e) lc.emplace_back(coefficient_arity(g, s, e), 0);
    return lc;
}

class LinearNetworkCode {
public:
    LinearNetworkCode() = default;
    LinearNetworkCode(NetworkGraph graph, SourceSpec sources, LocalCoefficients local, std::vector<Row> global)
        : graph_(std::move(graph)), sources_(std::move(sources)), local_(std::move(local)), global_(std::move(global)) {}

    const NetworkGraph& graph() const noexcept { return graph_; }
    const SourceSpec& sources() const noexcept { return sources_; }
    const PrimeField& field() const noexcept { return sources_.field(); }
    std::size_t dimension() const { return sources_.dimension(); }
    const LocalCoefficients& local() const noexcept { return local_; }
    const std::vector<Row>& global() const noexcept { return global_; }
    const Row& global(EdgeId e) const { return global_.at(e); }

    /// Symbol carried by every edge for a given extended source vector.
    std::vector<Symbol> edge_symbols(std::span<const Symbol> extended) const {
        if (extended.size() != dimension())
            throw Error(Errc::invalid_argument, "extended vector has wrong length");
        std::vector<Symbol> out;
        out.reserve(global_.size());
        for (const auto& row : global_) out.push_back(dot(row, extended, field()));
        return out;
    }

    friend bool operator==(const LinearNetworkCode& a, const LinearNetworkCode& b) {
        return a.graph_ == b.graph_ && a.sources_ == b.sources_ && a.local_ == b.local_;
    }

private:
    NetworkGraph graph_;
    SourceSpec sources_;
    LocalCoefficients local_;
    std::vector<Row> global_;
};

/// Computes every edge's global map by forward substitution in topological order.
inline LinearNetworkCode propagate_code(const NetworkGraph& graph, const SourceSpec& sources,
                                        const LocalCoefficients& local) {
    const PrimeField& f = sources.field();
    const std::size_t d = sources.dimension();
    if (local.size() != graph.edge_count())
        throw Error(Errc::incomplete_code, "expected coefficients for " + std::to_string(graph.edge_count()) +
                                               " edges, got " + std::to_string(local.size()));
    for (const auto& s : sources.sources())
        if (!graph.contains(s.node)) throw Error(Errc::unknown_node, "source node '" + s.node + "'");

    std::vector<Row> global(graph.edge_count(), Row(d, 0));
    for (std::size_t v : graph.topological_order()) {
        const auto& ins = graph.in_edges(v);
        const ComponentSet injected = sources.components_at(graph.node(v).id);
        for (EdgeId e : graph.out_edges(v)) {
            const Row& coeffs = local[e];
            if (coeffs.size() != ins.size() + injected.size())
                throw Error(Errc::incomplete_code, "edge " + graph.edge_label(e) + " needs " +
                                                       std::to_string(ins.size() + injected.size()) +
                                                       " coefficients, got " + std::to_string(coeffs.size()));
            Row& out = global[e];
            for (std::size_t i = 0; i < ins.size(); ++i) {
                const Symbol c = f.reduce(coeffs[i]);
                if (c == 0) continue;
                for (std::size_t j = 0; j < d; ++j) out[j] = f.add(out[j], f.mul(c, global[ins[i]][j]));
            }
            for (std::size_t i = 0; i < injected.size(); ++i)
                out[injected[i]] = f.add(out[injected[i]], f.reduce(coeffs[ins.size() + i]));
        }
    }
    LocalCoefficients reduced = local;
    for (auto& r : reduced)
        for (auto& v : r) v = f.reduce(v);
    return LinearNetworkCode(graph, sources, std::move(reduced), std::move(global));
}

namespace detail {

inline void validate_query(const LinearNetworkCode& code, const ComponentSet& target, const EdgeSet& observed) {
    for (std::size_t c : target)
        if (c >= code.dimension())
            throw Error(Errc::invalid_argument, "component index " + std::to_string(c) + " out of range");
    for (EdgeId e : observed)
        if (e >= code.graph().edge_count())
            throw Error(Errc::invalid_argument, "edge id " + std::to_string(e) + " out of range");
}

}  // namespace detail

/// H(target | observed edges) in log_q symbols, from the rank identity.
inline std::size_t conditional_entropy_rank(const LinearNetworkCode& code, const ComponentSet& target,
                                            const EdgeSet& observed) {
    detail::validate_query(code, target, observed);
    std::vector<Row> obs;
    for (EdgeId e : observed) obs.push_back(code.global(e));
    std::vector<Row> tgt;
    for (std::size_t c : target) tgt.push_back(unit_row(code.dimension(), c));
    return conditional_entropy_rows(tgt, obs, code.field());
}

inline constexpr std::uint64_t default_enumeration_cap = 531441;  // 3^12

/// H(target | observed edges) in log_q units by exhaustive enumeration of the
/// uniform extended source space. Independent of the rank route.
inline double brute_force_entropy(const LinearNetworkCode& code, const ComponentSet& target, const EdgeSet& observed,
                                  std::uint64_t cap = default_enumeration_cap) {
    detail::validate_query(code, target, observed);
    const std::uint32_t q = code.field().modulus();
    const std::size_t d = code.dimension();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > cap / q)
            throw Error(Errc::enumeration_cap_exceeded,
                        std::to_string(q) + "^" + std::to_string(d) + " exceeds cap " + std::to_string(cap));
        total *= q;
    }

    std::map<std::vector<Symbol>, std::uint64_t> joint;
    std::map<std::vector<Symbol>, std::uint64_t> marginal;
    std::vector<Symbol> x(d, 0);
    std::vector<Symbol> key;
    for (std::uint64_t n = 0; n < total; ++n) {
        std::uint64_t rest = n;
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = static_cast<Symbol>(rest % q);
            rest /= q;
        }
        key.clear();
        for (EdgeId e : observed) key.push_back(dot(code.global(e), x, code.field()));
        ++marginal[key];
        for (std::size_t c : target) key.push_back(x[c]);
        ++joint[key];
    }

    // H(T|O) = H(T,O) − H(O) = (Σ_o c_o log c_o − Σ_{t,o} c_{to} log c_{to}) / N.
    auto sum_clogc = [](const auto& counts) {
        double s = 0.0;
        for (const auto& [_, c] : counts) s += static_cast<double>(c) * std::log(static_cast<double>(c));
        return s;
    };
    const double nats = (sum_clogc(marginal) - sum_clogc(joint)) / static_cast<double>(total);
    return nats / std::log(static_cast<double>(q));
}

inline double symbols_to_bits(double symbols, std::uint32_t q) { return symbols * std::log2(static_cast<double>(q)); }

struct UserSpec {
    std::string node;
    ComponentSet wanted;

    friend bool operator==(const UserSpec&, const UserSpec&) = default;
};

struct EavesdropPattern {
    std::string id;
    std::vector<std::string> tapped;
    ComponentSet targets;

    friend bool operator==(const EavesdropPattern&, const EavesdropPattern&) = default;
};

enum class LeakVerdict { secure, partially_leaked, fully_leaked };

constexpr std::string_view to_string(LeakVerdict v) noexcept {
    switch (v) {
        case LeakVerdict::secure: return "secure";
        case LeakVerdict::partially_leaked: return "partially_leaked";
        case LeakVerdict::fully_leaked: return "fully_leaked";
    }
    return "secure";
}

inline LeakVerdict classify_leak(std::size_t prior, std::size_t posterior) noexcept {
    if (posterior == prior) return LeakVerdict::secure;
    if (posterior == 0) return LeakVerdict::fully_leaked;
    return LeakVerdict::partially_leaked;
}

inline void validate_user(const NetworkGraph& g, const SourceSpec& s, const UserSpec& u) {
    if (!g.contains(u.node)) throw Error(Errc::unknown_node, "user node '" + u.node + "'");
    for (std::size_t c : u.wanted)
        if (!s.is_message_component(c))
            throw Error(Errc::invalid_argument, "user " + u.node + " wants non-message component " + std::to_string(c));
}

inline void validate_pattern(const NetworkGraph& g, const SourceSpec& s, const EavesdropPattern& p) {
    for (const auto& n : p.tapped)
        if (!g.contains(n)) throw Error(Errc::unknown_node, "pattern " + p.id + " taps unknown node '" + n + "'");
    for (std::size_t c : p.targets)
        if (!s.is_message_component(c))
            throw Error(Errc::invalid_argument, "pattern " + p.id + " targets non-message component " + std::to_string(c));
}

/// Edges entering the user node.
inline EdgeSet user_view(const NetworkGraph& g, const UserSpec& u) { return g.in_edges(g.index_of(u.node)); }

/// Every edge adjacent to any tapped node, incoming or outgoing.
inline EdgeSet pattern_view(const NetworkGraph& g, const EavesdropPattern& p) {
    EdgeSet out;
    for (const auto& n : p.tapped) {
        auto adj = g.adjacency(n);
        out.insert(out.end(), adj.begin(), adj.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct UserResult {
    std::string node;
    std::size_t conditional_entropy = 0;
    bool decodable = false;
};

struct PatternResult {
    std::string id;
    std::size_t target_entropy = 0;
    std::size_t conditional_entropy = 0;
    bool secure = false;
    LeakVerdict verdict = LeakVerdict::secure;
};

struct AdmissibilityReport {
    std::uint32_t q = 2;
    std::vector<UserResult> users;
    std::vector<PatternResult> patterns;
    bool admissible = false;
};

inline AdmissibilityReport check_admissible(const LinearNetworkCode& code, const std::vector<UserSpec>& users,
                                            const std::vector<EavesdropPattern>& patterns) {
    const auto& g = code.graph();
    AdmissibilityReport report;
    report.q = code.field().modulus();
    report.admissible = true;
    for (const auto& u : users) {
        validate_user(g, code.sources(), u);
        const std::size_t h = conditional_entropy_rank(code, u.wanted, user_view(g, u));
        report.users.push_back({u.node, h, h == 0});
        report.admissible = report.admissible && h == 0;
    }
    for (const auto& p : patterns) {
        validate_pattern(g, code.sources(), p);
        const std::size_t prior = conditional_entropy_rank(code, p.targets, {});
        const std::size_t post = conditional_entropy_rank(code, p.targets, pattern_view(g, p));
        report.patterns.push_back({p.id, prior, post, post == prior, classify_leak(prior, post)});
        report.admissible = report.admissible && post == prior;
    }
    return report;
}

inline bool is_admissible(const LinearNetworkCode& code, const std::vector<UserSpec>& users,
                          const std::vector<EavesdropPattern>& patterns) {
    const auto& g = code.graph();
    for (const auto& u : users)
        if (conditional_entropy_rank(code, u.wanted, user_view(g, u)) != 0) return false;
    for (const auto& p : patterns) {
        if (conditional_entropy_rank(code, p.targets, pattern_view(g, p)) !=
            conditional_entropy_rank(code, p.targets, {}))
            return false;
    }
    return true;
}

inline constexpr std::uint64_t default_search_cap = 10'000'000;

/// Exhaustive lexicographic search over all local coefficient assignments.
///
/// Coefficients are ordered edge by edge (insertion order), each edge's vector
/// in its declared layout; the last coefficient varies fastest. Returns the
/// first admissible code, or nullopt if none exists.
inline std::optional<LinearNetworkCode> search_code(const NetworkGraph& graph, const SourceSpec& sources,
                                                    const std::vector<UserSpec>& users,
                                                    const std::vector<EavesdropPattern>& patterns,
                                                    std::uint64_t cap = default_search_cap) {
    for (const auto& u : users) validate_user(graph, sources, u);
    for (const auto& p : patterns) validate_pattern(graph, sources, p);

    LocalCoefficients local = zero_coefficients(graph, sources);
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t e = 0; e < local.size(); ++e)
        for (std::size_t i = 0; i < local[e].size(); ++i) slots.emplace_back(e, i);

    const std::uint32_t q = sources.q();
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (space > cap / q)
            throw Error(Errc::search_cap_exceeded, std::to_string(q) + "^" + std::to_string(slots.size()) +
                                                       " assignments exceed cap " + std::to_string(cap));
        space *= q;
    }

    for (std::uint64_t n = 0; n < space; ++n) {
        auto code = propagate_code(graph, sources, local);
        if (is_admissible(code, users, patterns)) return code;
        // Odometer increment, last slot fastest.
        for (std::size_t k = slots.size(); k-- > 0;) {
            auto& v = local[slots[k].first][slots[k].second];
            if (++v < q) break;
            v = 0;
        }
    }
    return std::nullopt;
}

struct Scenario {
    std::string name;
    LinearNetworkCode code;
    std::vector<UserSpec> users;
    std::vector<EavesdropPattern> patterns;
};

/// Canonical small networks: `two_path`, `multicast` and `crossed`, all over GF(3).
inline Scenario builtin_scenario(std::string_view name) {
    using R = NodeRole;
    if (name == "two_path") {
        auto g = build_graph({{"s", R::source}, {"t1", R::intermediate}, {"t2", R::intermediate}, {"u", R::user}},
                             {{"s", "t1"}, {"s", "t2"}, {"t1", "u"}, {"t2", "u"}});
        SourceSpec src(3, {{"s", 1, 1}});
        // s->t1 carries m+k, s->t2 carries k, relays forward.
        auto code = propagate_code(g, src, {{1, 1}, {0, 1}, {1}, {1}});
        return {"two_path", code, {{"u", {0}}}, {{"t1", {"t1"}, {0}}, {"t2", {"t2"}, {0}}}};
    }
    if (name == "multicast") {
        auto g = build_graph({{"s", R::source},
                              {"t1", R::intermediate},
                              {"t2", R::intermediate},
                              {"u1", R::user},
                              {"u2", R::user}},
                             {{"s", "t1"}, {"s", "t2"}, {"t1", "u1"}, {"t2", "u1"}, {"t1", "u2"}, {"t2", "u2"}});
        SourceSpec src(3, {{"s", 1, 1}});
        auto code = propagate_code(g, src, {{1, 1}, {0, 1}, {1}, {1}, {1}, {1}});
        return {"multicast", code, {{"u1", {0}}, {"u2", {0}}}, {{"t1", {"t1"}, {0}}, {"t2", {"t2"}, {0}}}};
    }
    if (name == "crossed") {
        auto g = build_graph({{"s1", R::source},
                              {"s2", R::source},
                              {"t1", R::intermediate},
                              {"t2", R::intermediate},
                              {"u1", R::user},
                              {"u2", R::user}},
                             {{"t1", "s1"},
                              {"t1", "s2"},
                              {"t1", "u1"},
                              {"t1", "u2"},
                              {"s1", "t2"},
                              {"s2", "t2"},
                              {"t2", "u1"},
                              {"t2", "u2"}});
        // Components: m1, m2, k (k injected by the randomizing node t1).
        SourceSpec src(3, {{"s1", 1, 0}, {"s2", 1, 0}, {"t1", 0, 1}});
        auto code = propagate_code(g, src,
                                   {{1}, {1}, {1}, {1},  // t1 hands k to s1, s2, u1, u2
                                    {1, 1},              // s1 -> t2: k + m1
                                    {1, 1},              // s2 -> t2: k + m2
                                    {0, 1},              // t2 -> u1: m2 + k
                                    {1, 0}});            // t2 -> u2: m1 + k
        return {"crossed",
                code,
                {{"u1", {1}}, {"u2", {0}}},
                {{"t1", {"t1"}, {0, 1}},
                 {"t2:m1", {"t2"}, {0}},
                 {"t2:m2", {"t2"}, {1}},
                 {"u1:m1", {"u1"}, {0}},
                 {"u2:m2", {"u2"}, {1}}}};
    }
    throw Error(Errc::unknown_scenario, "no built-in scenario '" + std::string(name) + "'");
}

/// The two-path network with plain forwarding of the message on both paths.
inline Scenario naive_forwarding() {
    Scenario s = builtin_scenario("two_path");
    s.name = "naive";
    s.code = propagate_code(s.code.graph(), s.code.sources(), {{1, 0}, {1, 0}, {1}, {1}});
    return s;
}

}  // namespace wtrnet
