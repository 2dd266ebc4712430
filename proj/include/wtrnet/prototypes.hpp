#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "wtrnet/error.hpp"
#include "wtrnet/optical.hpp"

namespace wtrnet {

enum class PrototypeKind { p1, p2, p3 };
enum class RingMode { open, closed, dual };

constexpr std::string_view to_string(PrototypeKind k) noexcept {
    switch (k) {
        case PrototypeKind::p1: return "p1";
        case PrototypeKind::p2: return "p2";
        case PrototypeKind::p3: return "p3";
    }
    return "p1";
}

constexpr std::string_view to_string(RingMode m) noexcept {
    switch (m) {
        case RingMode::open: return "open";
        case RingMode::closed: return "closed";
        case RingMode::dual: return "dual";
    }
    return "open";
}

inline PrototypeKind parse_prototype_kind(std::string_view s) {
    if (s == "p1") return PrototypeKind::p1;
    if (s == "p2") return PrototypeKind::p2;
    if (s == "p3") return PrototypeKind::p3;
    throw Error(Errc::invalid_config, "unknown prototype '" + std::string(s) + "'");
}

inline RingMode parse_ring_mode(std::string_view s) {
    if (s == "open") return RingMode::open;
    if (s == "closed") return RingMode::closed;
    if (s == "dual") return RingMode::dual;
    throw Error(Errc::invalid_config, "unknown ring mode '" + std::string(s) + "'");
}

/// Physical allocation of the reference build. With the default catalog the
/// first prototype gives
///   local     = drop 0.45 + splitter 7 + feeder 1.65 + filter 0.7 + DWDM 0.6 + rx 0.2 = 10.6 dB
///   neighbour = local + CWDM add 0.6 + span 3.1 + CWDM drop 0.6 + far DWDM 0.6 = 15.5 dB
struct PrototypeConfig {
    int branches = 6;
    int tx_per_branch = 1;
    double drop_km = 1.0;  // emitter to access splitter/AWG
    int drop_pairs = 1;
    double feeder_km = 5.0;  // access to backbone node
    int feeder_pairs = 2;
    double span_km = 10.0;  // between backbone nodes
    int span_pairs = 3;
    int rx_pairs = 1;  // backbone OADM to receiver
    RingMode ring_mode = RingMode::open;
    AwgGrid grid{};

    friend bool operator==(const PrototypeConfig&, const PrototypeConfig&) = default;
};

namespace detail {

inline std::string tx_name(const PrototypeConfig& c, int branch, int j) {
    return c.tx_per_branch == 1 ? "Tx" + std::to_string(branch) : "Tx" + std::to_string(branch) + "_" + std::to_string(j);
}

inline Band channel_band(double nm) { return {nm - 0.4, nm + 0.4}; }

class ProtoBuilder {
public:
    explicit ProtoBuilder(const PrototypeConfig& c) : c_(c) {}

    void element(Element e) { elements_.push_back(std::move(e)); }
    void link(std::string ea, std::string pa, std::string eb, std::string pb, double km = 0.0, int pairs = 0) {
        links_.push_back({{std::move(ea), std::move(pa)}, {std::move(eb), std::move(pb)}, km, pairs});
    }
    void span(std::string ea, std::string pa, std::string eb, std::string pb) {
        link(std::move(ea), std::move(pa), std::move(eb), std::move(pb), c_.span_km, c_.span_pairs);
    }
    void rx_link(const std::string& oadm, const std::string& port, const std::string& rx, int& rx_port) {
        link(oadm, port, rx, "in" + std::to_string(++rx_port), 0.0, c_.rx_pairs);
    }

    OpticalTopology finish(std::string name) {
        OpticalTopology t(std::move(name), std::move(elements_), std::move(links_), {});
        std::vector<PlanEntry> plan;
        for (const auto& tx : t.emitters())
            for (const auto& [rx, r] : reachable_receivers(t, tx, 1e9)) plan.push_back({tx, rx, r.wavelength_nm});
        t.set_plan(std::move(plan));
        return t;
    }

private:
    const PrototypeConfig& c_;
    std::vector<Element> elements_;
    std::vector<Link> links_;
};

inline int next_branch(int i, int n) { return i % n + 1; }
inline int prev_branch(int i, int n) { return (i + n - 2) % n + 1; }

inline void access_splitter(ProtoBuilder& b, const PrototypeConfig& c, int i, const std::vector<double>& channels) {
    const std::string node = "B" + std::to_string(i);
    const std::string s = "S" + std::to_string(i);
    b.element({s, ComponentKind::splitter_1x4, {}, {}, {}, node, {}});
    for (int j = 1; j <= c.tx_per_branch; ++j) {
        b.element({tx_name(c, i, j), ComponentKind::emitter, {}, {}, {}, node, channels});
        b.link(tx_name(c, i, j), "out", s, "o" + std::to_string(j), c.drop_km, c.drop_pairs);
    }
}

inline OpticalTopology build_p1(const PrototypeConfig& c) {
    if (c.branches % 3 != 0)
        throw Error(Errc::invalid_config, "p1 reuses three channels around the ring; branches must be a multiple of 3");
    if (c.tx_per_branch > 4) throw Error(Errc::invalid_config, "p1 access splitter has 4 ports");
    constexpr std::array<double, 3> chan{1540.0, 1545.0, 1550.0};
    // Filtered band per node phase: own channel may go either way, the next
    // node's channel is always filtered toward the east OADM.
    const std::array<Band, 3> filt{Band{1537.5, 1547.5}, Band{1547.5, 1552.5}, Band{1537.5, 1542.5}};
    const Band cwdm{1530.0, 1557.0};
    const std::vector<double> all(chan.begin(), chan.end());
    ProtoBuilder b(c);
    const int n = c.branches;
    for (int i = 1; i <= n; ++i) {
        const std::string k = std::to_string(i), node = "B" + k;
        const double own = chan[(i - 1) % 3];
        access_splitter(b, c, i, all);
        b.element({"F" + k, ComponentKind::bandpass_filter, {filt[(i - 1) % 3]}, {}, {}, node, {}});
        b.element({"DE" + k, ComponentKind::dwdm_oadm, {channel_band(own)}, {channel_band(own)}, {}, node, {}});
        b.element({"DW" + k, ComponentKind::dwdm_oadm, {channel_band(own)}, {channel_band(own)}, {}, node, {}});
        b.element({"C" + k, ComponentKind::cwdm_oadm, {cwdm}, {cwdm}, {}, node, {}});
        b.element({"Rx" + k, ComponentKind::receiver, {}, {}, {}, node, {}});
        b.link("S" + k, "com", "F" + k, "common", c.feeder_km, c.feeder_pairs);
        b.link("F" + k, "filtered", "DE" + k, "west");
        b.link("F" + k, "reflected", "DW" + k, "east");
        b.link("DE" + k, "east", "C" + k, "add");
        b.link("DW" + k, "west", "C" + k, "drop");
        int rp = 0;
        b.rx_link("DE" + k, "drop", "Rx" + k, rp);
        b.rx_link("DE" + k, "add", "Rx" + k, rp);
        b.rx_link("DW" + k, "drop", "Rx" + k, rp);
        b.rx_link("DW" + k, "add", "Rx" + k, rp);
    }
    for (int i = 1; i <= n; ++i) b.span("C" + std::to_string(i), "east", "C" + std::to_string(next_branch(i, n)), "west");
    return b.finish("p1");
}

// One unidirectional ring set (CWDM + circulator + DWDM) at node i.
inline void p2_ring_set(ProtoBuilder& b, const std::string& tag, int i, double own, Band cwdm_drop, Band cwdm_add,
                        int& rp) {
    const std::string k = std::to_string(i), node = "B" + k;
    const std::string C = "C" + tag + k, CIR = "CIR" + tag + k, D = "D" + tag + k;
    b.element({C, ComponentKind::cwdm_oadm, {cwdm_drop}, {cwdm_add}, {}, node, {}});
    b.element({CIR, ComponentKind::circulator, {}, {}, {}, node, {}});
    b.element({D, ComponentKind::dwdm_oadm, {channel_band(own)}, {channel_band(own)}, {}, node, {}});
    b.link(C, "drop", CIR, "p1");
    b.link(CIR, "p2", D, "west");
    b.link(CIR, "p3", C, "add");
    b.rx_link(D, "drop", "Rx" + k, rp);
    b.rx_link(D, "add", "Rx" + k, rp);
}

inline OpticalTopology build_p2(const PrototypeConfig& c) {
    if (c.tx_per_branch > 4) throw Error(Errc::invalid_config, "p2 access splitter has 4 ports");
    const int n = c.branches;
    std::vector<double> chan;
    switch (c.ring_mode) {
        case RingMode::open:
            if (n % 2 != 0) throw Error(Errc::invalid_config, "p2 open ring alternates two channels; branches must be even");
            chan = {1540.0, 1545.0};
            break;
        case RingMode::closed:
            if (n > 37) throw Error(Errc::invalid_config, "p2 closed ring supports at most 37 channels");
            for (int i = 0; i < n; ++i) chan.push_back(1535.0 + 0.8 * i);
            break;
        case RingMode::dual:
            if (n % 3 != 0) throw Error(Errc::invalid_config, "p2 dual ring reuses three channels; branches must be a multiple of 3");
            chan = {1540.0, 1545.0, 1550.0};
            break;
    }
    const Band wide{1530.0, 1557.0};
    const Band add_all{1530.0, 1560.0};
    ProtoBuilder b(c);
    for (int i = 1; i <= n; ++i) {
        const std::string k = std::to_string(i), node = "B" + k;
        const double own = chan[(i - 1) % chan.size()];
        access_splitter(b, c, i, chan);
        b.element({"Rx" + k, ComponentKind::receiver, {}, {}, {}, node, {}});
        int rp = 0;
        if (c.ring_mode == RingMode::dual) {
            b.element({"SP" + k, ComponentKind::splitter_1x2, {}, {}, {}, node, {}});
            b.link("S" + k, "com", "SP" + k, "com", c.feeder_km, c.feeder_pairs);
            p2_ring_set(b, "f", i, own, wide, wide, rp);
            p2_ring_set(b, "b", i, own, wide, wide, rp);
            b.link("SP" + k, "o1", "Df" + k, "east");
            b.link("SP" + k, "o2", "Db" + k, "east");
        } else {
            const Band drop = c.ring_mode == RingMode::open ? wide : channel_band(own);
            const Band add = c.ring_mode == RingMode::open ? wide : add_all;
            p2_ring_set(b, "", i, own, drop, add, rp);
            b.link("S" + k, "com", "D" + k, "east", c.feeder_km, c.feeder_pairs);
        }
    }
    for (int i = 1; i <= n; ++i) {
        const std::string k = std::to_string(i);
        if (c.ring_mode == RingMode::dual) {
            b.span("Cf" + k, "east", "Cf" + std::to_string(next_branch(i, n)), "west");
            b.span("Cb" + k, "east", "Cb" + std::to_string(prev_branch(i, n)), "west");
        } else {
            b.span("C" + k, "east", "C" + std::to_string(next_branch(i, n)), "west");
        }
    }
    return b.finish("p2-" + std::string(to_string(c.ring_mode)));
}

inline OpticalTopology build_p3(const PrototypeConfig& c) {
    const AwgGrid& g = c.grid;
    if (g.bands < 2) throw Error(Errc::invalid_config, "p3 needs two AWG bands");
    if (c.tx_per_branch > g.channels) throw Error(Errc::invalid_config, "more emitters than AWG ports");
    const double half = g.spacing_nm / 2;
    const Band band0{g.wavelength(1, 0) - half, g.wavelength(g.channels, 0) + half};
    const Band band1{g.wavelength(1, 1) - half, g.wavelength(g.channels, 1) + half};
    ProtoBuilder b(c);
    const int n = c.branches;
    for (int i = 1; i <= n; ++i) {
        const std::string k = std::to_string(i), node = "B" + k;
        b.element({"A" + k, ComponentKind::awg, {}, {}, g, node, {}});
        for (int j = 1; j <= c.tx_per_branch; ++j) {
            b.element({tx_name(c, i, j), ComponentKind::emitter, {}, {}, {}, node,
                       {g.wavelength(j, 0), g.wavelength(j, 1)}});
            b.link(tx_name(c, i, j), "out", "A" + k, "p" + std::to_string(j), c.drop_km, c.drop_pairs);
        }
        b.element({"BS" + k, ComponentKind::splitter_1x2, {}, {}, {}, node, {}});
        b.element({"D" + k, ComponentKind::dwdm_oadm, {band1}, {band0}, {}, node, {}});
        b.element({"Rx" + k, ComponentKind::receiver, {}, {}, {}, node, {}});
        b.link("A" + k, "com", "BS" + k, "com", c.feeder_km, c.feeder_pairs);
        b.link("BS" + k, "o1", "D" + k, "east");
        int rp = 0;
        b.rx_link("D" + k, "add", "Rx" + k, rp);
        b.rx_link("D" + k, "drop", "Rx" + k, rp);
    }
    for (int i = 1; i <= n; ++i) b.span("BS" + std::to_string(i), "o2", "D" + std::to_string(next_branch(i, n)), "west");
    return b.finish("p3");
}

}  // namespace detail

inline OpticalTopology build_prototype(PrototypeKind kind, const PrototypeConfig& c = {}) {
    if (c.branches < 2) throw Error(Errc::invalid_config, "need at least 2 branches");
    if (c.tx_per_branch < 1) throw Error(Errc::invalid_config, "need at least 1 emitter per branch");
    if (c.drop_km < 0 || c.feeder_km < 0 || c.span_km < 0 || c.drop_pairs < 0 || c.feeder_pairs < 0 ||
        c.span_pairs < 0 || c.rx_pairs < 0)
        throw Error(Errc::invalid_config, "fiber lengths and connector counts must be non-negative");
    switch (kind) {
        case PrototypeKind::p1: return detail::build_p1(c);
        case PrototypeKind::p2: return detail::build_p2(c);
        case PrototypeKind::p3: return detail::build_p3(c);
    }
    throw Error(Errc::invalid_config, "unknown prototype");
}

}  // namespace wtrnet
