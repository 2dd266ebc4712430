#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "wtrnet/error.hpp"
#include "wtrnet/field.hpp"
#include "wtrnet/linalg.hpp"
#include "wtrnet/netcode.hpp"

namespace wtrnet {

enum class RelayMode { trusted_chain, wtr };

constexpr std::string_view to_string(RelayMode m) noexcept {
    return m == RelayMode::trusted_chain ? "trusted_chain" : "wtr";
}

struct Transmission {
    std::string label;  // "a->b"
    Symbol symbol = 0;
};

struct NodeView {
    std::string node;
    std::vector<std::string> items;  // labels of what the node sees
    std::vector<Symbol> values;
};

struct UserDelivery {
    std::string user;
    ComponentSet components;
    std::vector<Symbol> values;
    bool decoded = false;
};

struct AuditEntry {
    std::string pattern;
    std::size_t prior = 0;
    std::size_t posterior = 0;
    LeakVerdict verdict = LeakVerdict::secure;
};

struct LeakageAudit {
    std::vector<AuditEntry> entries;

    bool all(LeakVerdict v) const {
        return std::all_of(entries.begin(), entries.end(), [v](const AuditEntry& e) { return e.verdict == v; });
    }
};

struct RelaySession {
    RelayMode mode = RelayMode::wtr;
    std::uint32_t q = 2;
    std::uint64_t seed = 0;
    std::vector<Symbol> message;
    std::vector<Symbol> keys;
    std::vector<Transmission> transmissions;
    std::vector<NodeView> views;
    std::vector<UserDelivery> delivered;
    LeakageAudit audit;
};

namespace detail {

inline std::vector<Symbol> draw_symbols(std::mt19937_64& rng, std::size_t n, std::uint32_t q) {
    std::uniform_int_distribution<Symbol> dist(0, q - 1);
    std::vector<Symbol> out(n);
    for (auto& v : out) v = dist(rng);
    return out;
}

}  // namespace detail

/// Hop-by-hop one-time pad over `links` QKD links. Link j carries
/// c_j = m + r_j; repeater j holds r_j, r_{j+1} and both ciphertexts.
inline RelaySession simulate_trusted_chain(std::size_t links, std::uint32_t q, Symbol message, std::uint64_t seed) {
    if (links == 0) throw Error(Errc::empty_chain, "a relay chain needs at least one link");
    const PrimeField f(q);
    std::mt19937_64 rng(seed);
    RelaySession s;
    s.mode = RelayMode::trusted_chain;
    s.q = q;
    s.seed = seed;
    s.message = {f.reduce(message)};
    s.keys = detail::draw_symbols(rng, links, q);

    auto node = [links](std::size_t i) {
        return i == 0 ? std::string("s") : i == links ? std::string("u") : "t" + std::to_string(i);
    };
    // Extended vector (m, r_1..r_n).
    const std::size_t d = links + 1;
    std::vector<Row> cipher_rows;
    for (std::size_t j = 1; j <= links; ++j) {
        s.transmissions.push_back({node(j - 1) + "->" + node(j), f.add(s.message[0], s.keys[j - 1])});
        Row r = unit_row(d, 0);
        r[j] = 1;
        cipher_rows.push_back(r);
    }

    const Row target = unit_row(d, 0);
    for (std::size_t j = 1; j < links; ++j) {
        NodeView v{node(j), {}, {}};
        std::vector<Row> rows;
        for (std::size_t k : {j, j + 1}) {
            v.items.push_back("r" + std::to_string(k));
            v.values.push_back(s.keys[k - 1]);
            rows.push_back(unit_row(d, k));
        }
        for (std::size_t k : {j, j + 1}) {
            v.items.push_back(s.transmissions[k - 1].label);
            v.values.push_back(s.transmissions[k - 1].symbol);
            rows.push_back(cipher_rows[k - 1]);
        }
        s.views.push_back(std::move(v));
        const std::size_t post = conditional_entropy_rows(std::span(&target, 1), rows, f);
        s.audit.entries.push_back({node(j), 1, post, classify_leak(1, post)});
    }
    s.delivered.push_back({"u", {0}, {f.sub(s.transmissions.back().symbol, s.keys.back())}, true});
    return s;
}

/// Runs one message through a linear network code with freshly drawn keys.
inline RelaySession simulate_wtr_exchange(const LinearNetworkCode& code, const std::vector<UserSpec>& users,
                                          const std::vector<EavesdropPattern>& patterns,
                                          const std::vector<Symbol>& message, std::uint64_t seed,
                                          bool override_admissibility = false) {
    const auto& src = code.sources();
    const PrimeField& f = code.field();
    if (message.size() != src.message_dim())
        throw Error(Errc::invalid_argument, "message needs " + std::to_string(src.message_dim()) + " symbols");
    if (!override_admissibility && !is_admissible(code, users, patterns))
        throw Error(Errc::not_admissible, "code fails the secure or decodable condition");

    std::mt19937_64 rng(seed);
    RelaySession s;
    s.mode = RelayMode::wtr;
    s.q = f.modulus();
    s.seed = seed;
    for (Symbol m : message) s.message.push_back(f.reduce(m));
    s.keys = detail::draw_symbols(rng, src.key_dim(), s.q);

    std::vector<Symbol> x = s.message;
    x.insert(x.end(), s.keys.begin(), s.keys.end());
    const auto y = code.edge_symbols(x);
    const auto& g = code.graph();
    for (EdgeId e = 0; e < g.edge_count(); ++e) s.transmissions.push_back({g.edge_label(e), y[e]});

    for (const auto& n : g.nodes()) {
        NodeView v{n.id, {}, {}};
        for (EdgeId e : g.adjacency(n.id)) {
            v.items.push_back(g.edge_label(e));
            v.values.push_back(y[e]);
        }
        s.views.push_back(std::move(v));
    }

    for (const auto& u : users) {
        validate_user(g, src, u);
        const auto in = user_view(g, u);
        std::vector<Row> rows;
        for (EdgeId e : in) rows.push_back(code.global(e));
        UserDelivery d{u.node, u.wanted, {}, true};
        for (std::size_t c : u.wanted) {
            auto coeff = solve_combination(rows, unit_row(code.dimension(), c), f);
            if (!coeff) {
                d.decoded = false;
                d.values.push_back(0);
                continue;
            }
            Symbol acc = 0;
            for (std::size_t i = 0; i < in.size(); ++i) acc = f.add(acc, f.mul((*coeff)[i], y[in[i]]));
            d.values.push_back(acc);
        }
        s.delivered.push_back(std::move(d));
    }

    for (const auto& p : patterns) {
        validate_pattern(g, src, p);
        const std::size_t prior = conditional_entropy_rank(code, p.targets, {});
        const std::size_t post = conditional_entropy_rank(code, p.targets, pattern_view(g, p));
        s.audit.entries.push_back({p.id, prior, post, classify_leak(prior, post)});
    }
    return s;
}

struct ThroughputReport {
    std::vector<double> link_rates_bps;
    std::vector<EdgeId> used_edges;
    double effective_bps = 0.0;   // per message component
    double aggregate_bps = 0.0;   // all message components together
    std::optional<EdgeId> bottleneck;
    std::string bottleneck_label;
};

/// Every used edge carries one symbol per message use, so the code runs at the
/// pace of its slowest used link. Edges with a zero global map are idle.
inline ThroughputReport effective_rate(const LinearNetworkCode& code, const std::vector<double>& link_rates_bps) {
    const auto& g = code.graph();
    if (link_rates_bps.size() < g.edge_count())
        throw Error(Errc::missing_rate, "need a rate for each of " + std::to_string(g.edge_count()) + " edges");
    ThroughputReport r;
    r.link_rates_bps.assign(link_rates_bps.begin(), link_rates_bps.begin() + static_cast<long>(g.edge_count()));
    double best = std::numeric_limits<double>::infinity();
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& row = code.global(e);
        if (std::all_of(row.begin(), row.end(), [](Symbol v) { return v == 0; })) continue;
        if (!(link_rates_bps[e] >= 0.0)) throw Error(Errc::missing_rate, "edge " + g.edge_label(e) + " has no rate");
        r.used_edges.push_back(e);
        if (link_rates_bps[e] < best) {
            best = link_rates_bps[e];
            r.bottleneck = e;
        }
    }
    if (!r.bottleneck) return r;
    r.effective_bps = best;
    r.aggregate_bps = best * static_cast<double>(code.sources().message_dim());
    r.bottleneck_label = g.edge_label(*r.bottleneck);
    return r;
}

/// A trusted chain relays one symbol per link per message symbol.
inline double trusted_chain_rate(const std::vector<double>& link_rates_bps) {
    if (link_rates_bps.empty()) throw Error(Errc::empty_chain, "a relay chain needs at least one link");
    return *std::min_element(link_rates_bps.begin(), link_rates_bps.end());
}

/// Pearson statistic of observed counts against a uniform distribution.
inline double chi_square_uniform(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0.0;
    for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
    return stat;
}

}  // namespace wtrnet
