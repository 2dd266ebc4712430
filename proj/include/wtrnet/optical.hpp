#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wtrnet/error.hpp"

namespace wtrnet {

enum class ComponentKind {
    fiber,
    splitter_1x2,
    splitter_1x4,
    cwdm_oadm,
    dwdm_oadm,
    bandpass_filter,
    circulator,
    connector_pair,
    awg,
    emitter,
    receiver,
};

constexpr std::string_view to_string(ComponentKind k) noexcept {
    switch (k) {
        case ComponentKind::fiber: return "fiber";
        case ComponentKind::splitter_1x2: return "splitter_1x2";
        case ComponentKind::splitter_1x4: return "splitter_1x4";
        case ComponentKind::cwdm_oadm: return "cwdm_oadm";
        case ComponentKind::dwdm_oadm: return "dwdm_oadm";
        case ComponentKind::bandpass_filter: return "bandpass_filter";
        case ComponentKind::circulator: return "circulator";
        case ComponentKind::connector_pair: return "connector_pair";
        case ComponentKind::awg: return "awg";
        case ComponentKind::emitter: return "emitter";
        case ComponentKind::receiver: return "receiver";
    }
    return "fiber";
}

inline ComponentKind parse_component_kind(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(ComponentKind::receiver); ++i) {
        const auto k = static_cast<ComponentKind>(i);
        if (to_string(k) == s) return k;
    }
    throw Error(Errc::parse_error, "unknown component kind '" + std::string(s) + "'");
}

struct Band {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double nm) const noexcept { return nm >= lo - 1e-9 && nm <= hi + 1e-9; }
    friend bool operator==(const Band&, const Band&) = default;
};

inline bool in_any(const std::vector<Band>& bands, double nm) {
    return std::any_of(bands.begin(), bands.end(), [nm](const Band& b) { return b.contains(nm); });
}

struct OpticalComponent {
    ComponentKind kind = ComponentKind::fiber;
    double insertion_loss = 0.0;  // dB; per km for fiber, per mated pair for connectors
    Band window{0.0, std::numeric_limits<double>::infinity()};
    int channels = 0;  // AWG only

    friend bool operator==(const OpticalComponent&, const OpticalComponent&) = default;
};

/// Insertion-loss table keyed by component kind.
class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::vector<OpticalComponent> items) {
        for (auto& c : items) {
            if (!(c.insertion_loss >= 0.0))
                throw Error(Errc::invalid_config, std::string(to_string(c.kind)) + " has negative loss");
            if (!(c.window.lo < c.window.hi))
                throw Error(Errc::invalid_config, std::string(to_string(c.kind)) + " window is empty");
            items_[c.kind] = c;
        }
        for (auto k : {ComponentKind::fiber, ComponentKind::connector_pair})
            if (!items_.contains(k)) throw Error(Errc::invalid_config, "catalog lacks " + std::string(to_string(k)));
    }

    bool has(ComponentKind k) const { return items_.contains(k); }
    const OpticalComponent& at(ComponentKind k) const {
        auto it = items_.find(k);
        if (it == items_.end()) throw Error(Errc::invalid_config, "catalog lacks " + std::string(to_string(k)));
        return it->second;
    }
    double loss(ComponentKind k) const { return at(k).insertion_loss; }
    double fiber_db_per_km() const { return loss(ComponentKind::fiber); }
    double connector_db() const { return loss(ComponentKind::connector_pair); }

    std::vector<OpticalComponent> items() const {
        std::vector<OpticalComponent> out;
        for (const auto& [_, c] : items_) out.push_back(c);
        return out;
    }

    friend bool operator==(const Catalog&, const Catalog&) = default;

private:
    std::map<ComponentKind, OpticalComponent> items_;
};

inline std::vector<OpticalComponent> default_catalog() {
    using K = ComponentKind;
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {
        {K::fiber, 0.25, {0.0, inf}, 0},
        {K::splitter_1x2, 3.5, {1260.0, 1610.0}, 0},
        {K::splitter_1x4, 7.0, {1260.0, 1610.0}, 0},
        {K::cwdm_oadm, 0.6, {1270.0, 1610.0}, 0},
        {K::dwdm_oadm, 0.6, {1525.0, 1610.0}, 0},
        {K::bandpass_filter, 0.7, {1525.0, 1610.0}, 0},
        {K::circulator, 0.5, {1530.0, 1565.0}, 0},
        {K::connector_pair, 0.2, {0.0, inf}, 0},
        {K::awg, 3.0, {1525.0, 1610.0}, 40},
    };
}

/// Cyclic AWG channel grid: port k (1-based) in band b sits at
/// base + (k-1)*spacing + b*fsr.
struct AwgGrid {
    int channels = 40;
    int bands = 2;
    double base_nm = 1530.0;
    double spacing_nm = 0.8;
    double fsr_nm = 32.0;

    double wavelength(int port, int band) const { return base_nm + (port - 1) * spacing_nm + band * fsr_nm; }

    /// Port whose channel matches `nm` in some band, within a quarter spacing.
    std::optional<int> port_for(double nm) const {
        for (int b = 0; b < bands; ++b)
            for (int k = 1; k <= channels; ++k)
                if (std::abs(wavelength(k, b) - nm) <= spacing_nm / 4) return k;
        return std::nullopt;
    }

    friend bool operator==(const AwgGrid&, const AwgGrid&) = default;
};

struct Element {
    std::string id;
    ComponentKind kind = ComponentKind::receiver;
    std::vector<Band> pass;      // filter: filtered band; OADM: drop band
    std::vector<Band> add_pass;  // OADM: add band
    AwgGrid grid;                // AWG only
    std::string node;            // backbone node or access branch label
    std::vector<double> channels;  // emitter: wavelengths it can tune to

    friend bool operator==(const Element&, const Element&) = default;
};

struct PortRef {
    std::string element;
    std::string port;

    friend bool operator==(const PortRef&, const PortRef&) = default;
    friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

/// Bidirectional fiber run between two ports.
struct Link {
    PortRef a;
    PortRef b;
    double fiber_km = 0.0;
    int connector_pairs = 0;

    friend bool operator==(const Link&, const Link&) = default;
};

struct PlanEntry {
    std::string tx;
    std::string rx;
    double wavelength_nm = 0.0;

    friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

inline std::vector<std::string> valid_ports(const Element& e) {
    using K = ComponentKind;
    switch (e.kind) {
        case K::splitter_1x2: return {"com", "o1", "o2"};
        case K::splitter_1x4: return {"com", "o1", "o2", "o3", "o4"};
        case K::cwdm_oadm:
        case K::dwdm_oadm: return {"west", "east", "drop", "add"};
        case K::bandpass_filter: return {"common", "filtered", "reflected"};
        case K::circulator: return {"p1", "p2", "p3"};
        case K::emitter: return {"out"};
        case K::awg: {
            std::vector<std::string> p{"com"};
            for (int k = 1; k <= e.grid.channels; ++k) p.push_back("p" + std::to_string(k));
            return p;
        }
        default: return {};
    }
}

class OpticalTopology {
public:
    OpticalTopology() = default;

    OpticalTopology(std::string name, std::vector<Element> elements, std::vector<Link> links,
                    std::vector<PlanEntry> plan, Catalog catalog = Catalog(default_catalog()))
        : name_(std::move(name)),
          elements_(std::move(elements)),
          links_(std::move(links)),
          plan_(std::move(plan)),
          catalog_(std::move(catalog)) {
        index();
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<Element>& elements() const noexcept { return elements_; }
    const std::vector<Link>& links() const noexcept { return links_; }
    const std::vector<PlanEntry>& plan() const noexcept { return plan_; }
    const Catalog& catalog() const noexcept { return catalog_; }
    void set_plan(std::vector<PlanEntry> plan) { plan_ = std::move(plan); }

    bool contains(std::string_view id) const { return by_id_.contains(std::string(id)); }
    const Element& element(std::string_view id) const {
        auto it = by_id_.find(std::string(id));
        if (it == by_id_.end()) throw Error(Errc::unknown_node, "no optical element '" + std::string(id) + "'");
        return elements_[it->second];
    }

    /// Link attached to a port and which end of it the port is.
    std::optional<std::pair<std::size_t, bool>> link_at(const PortRef& p) const {
        auto it = port_link_.find(p);
        if (it == port_link_.end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::string> ids_of(ComponentKind k) const {
        std::vector<std::string> out;
        for (const auto& e : elements_)
            if (e.kind == k) out.push_back(e.id);
        return out;
    }
    std::vector<std::string> emitters() const { return ids_of(ComponentKind::emitter); }
    std::vector<std::string> receivers() const { return ids_of(ComponentKind::receiver); }

    double link_loss(const Link& l) const {
        return l.fiber_km * catalog_.fiber_db_per_km() + l.connector_pairs * catalog_.connector_db();
    }

    friend bool operator==(const OpticalTopology& a, const OpticalTopology& b) {
        return a.name_ == b.name_ && a.elements_ == b.elements_ && a.links_ == b.links_ && a.plan_ == b.plan_;
    }

private:
    void index() {
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            const auto& e = elements_[i];
            if (e.kind == ComponentKind::fiber || e.kind == ComponentKind::connector_pair)
                throw Error(Errc::invalid_config,
                            e.id + ": fibers and connectors belong on links, not as elements");
            if (!by_id_.emplace(e.id, i).second) throw Error(Errc::duplicate_node, "element '" + e.id + "' twice");
            for (const auto& bands : {e.pass, e.add_pass})
                for (const auto& b : bands)
                    if (!(b.lo < b.hi)) throw Error(Errc::invalid_config, e.id + ": pass band is not ordered");
            if (e.kind != ComponentKind::receiver && e.kind != ComponentKind::emitter && !catalog_.has(e.kind))
                throw Error(Errc::invalid_config, e.id + ": kind missing from catalog");
        }
        for (std::size_t i = 0; i < links_.size(); ++i) {
            const auto& l = links_[i];
            if (!(l.fiber_km >= 0.0) || l.connector_pairs < 0)
                throw Error(Errc::invalid_config, "link " + std::to_string(i) + " has negative length or connectors");
            for (bool first : {true, false}) {
                const PortRef& p = first ? l.a : l.b;
                const Element& e = element(p.element);
                auto ports = valid_ports(e);
                if (e.kind != ComponentKind::receiver && std::find(ports.begin(), ports.end(), p.port) == ports.end())
                    throw Error(Errc::invalid_config, e.id + " has no port '" + p.port + "'");
                if (!port_link_.emplace(p, std::make_pair(i, first)).second)
                    throw Error(Errc::invalid_config, p.element + "." + p.port + " used by two links");
            }
        }
        for (const auto& e : elements_)
            if (e.kind == ComponentKind::emitter && !port_link_.contains({e.id, "out"}))
                throw Error(Errc::invalid_config, "emitter " + e.id + " is not attached");
        for (const auto& pe : plan_) {
            if (element(pe.tx).kind != ComponentKind::emitter || element(pe.rx).kind != ComponentKind::receiver)
                throw Error(Errc::invalid_config, "plan entry " + pe.tx + "->" + pe.rx + " has wrong endpoints");
        }
    }

    std::string name_;
    std::vector<Element> elements_;
    std::vector<Link> links_;
    std::vector<PlanEntry> plan_;
    Catalog catalog_;
    std::map<std::string, std::size_t> by_id_;
    std::map<PortRef, std::pair<std::size_t, bool>> port_link_;
};

/// One traversal step: arrive over `link` at `element` through `in_port`, leave
/// through `out_port` (empty at the terminating receiver).
struct Hop {
    std::size_t link = 0;
    std::string element;
    std::string in_port;
    std::string out_port;

    friend bool operator==(const Hop&, const Hop&) = default;
};

struct PhysicalPath {
    std::string tx;
    double wavelength_nm = 0.0;
    std::vector<Hop> hops;

    const std::string& receiver() const { return hops.back().element; }
    friend bool operator==(const PhysicalPath&, const PhysicalPath&) = default;
};

struct Blocked {
    std::string element;
    std::string port;
    std::string reason;

    friend bool operator==(const Blocked&, const Blocked&) = default;
};

struct Delivery {
    PhysicalPath path;
    double loss_db = 0.0;
};

struct TraceResult {
    std::vector<Delivery> deliveries;
    std::vector<Blocked> blocks;
};

namespace detail {

struct PortDecision {
    std::vector<std::string> out;
    std::string block;  // non-empty: signal absorbed here
    bool delivered = false;
};

inline PortDecision port_semantics(const Element& e, const std::string& in, double nm, const Catalog& cat) {
    using K = ComponentKind;
    if (e.kind == K::receiver) return {{}, {}, true};
    if (e.kind == K::emitter) return {{}, "absorbed by emitter", false};
    if (!cat.at(e.kind).window.contains(nm)) return {{}, "outside operating window", false};
    switch (e.kind) {
        case K::splitter_1x2:
        case K::splitter_1x4: {
            if (in != "com") return {{"com"}, {}, false};
            std::vector<std::string> outs;
            for (int k = 1; k <= (e.kind == K::splitter_1x2 ? 2 : 4); ++k) outs.push_back("o" + std::to_string(k));
            return {outs, {}, false};
        }
        case K::bandpass_filter: {
            const bool inband = in_any(e.pass, nm);
            if (in == "common") return {{inband ? "filtered" : "reflected"}, {}, false};
            if (in == "filtered") return inband ? PortDecision{{"common"}, {}, false}
                                                : PortDecision{{}, "rejected by filtered port", false};
            return inband ? PortDecision{{}, "rejected by reflected port", false} : PortDecision{{"common"}, {}, false};
        }
        case K::circulator: {
            if (in == "p1") return {{"p2"}, {}, false};
            if (in == "p2") return {{"p3"}, {}, false};
            return {{"p1"}, {}, false};
        }
        case K::cwdm_oadm:
        case K::dwdm_oadm: {
            if (in == "west") return {{in_any(e.pass, nm) ? "drop" : "east"}, {}, false};
            if (in == "east") return {{in_any(e.add_pass, nm) ? "add" : "west"}, {}, false};
            if (in == "drop")
                return in_any(e.pass, nm) ? PortDecision{{"west"}, {}, false}
                                          : PortDecision{{}, "out of drop band", false};
            return in_any(e.add_pass, nm) ? PortDecision{{"east"}, {}, false}
                                          : PortDecision{{}, "out of add band", false};
        }
        case K::awg: {
            const auto port = e.grid.port_for(nm);
            if (in == "com") {
                if (!port) return {{}, "no AWG channel", false};
                return {{"p" + std::to_string(*port)}, {}, false};
            }
            if (port && in == "p" + std::to_string(*port)) return {{"com"}, {}, false};
            return {{}, "wrong AWG channel for port", false};
        }
        default: return {{}, "not a routing component", false};
    }
}

class Tracer {
public:
    Tracer(const OpticalTopology& t, std::string tx, double nm) : topo_(t), nm_(nm) {
        result_path_.tx = std::move(tx);
        result_path_.wavelength_nm = nm;
    }

    TraceResult run() {
        depart({result_path_.tx, "out"}, 0.0);
        return std::move(result_);
    }

private:
    void depart(const PortRef& from, double loss) {
        auto at = topo_.link_at(from);
        if (!at) {
            result_.blocks.push_back({from.element, from.port, "unconnected port"});
            return;
        }
        const Link& l = topo_.links()[at->first];
        const PortRef& to = at->second ? l.b : l.a;
        arrive(at->first, to, loss + topo_.link_loss(l));
    }

    void arrive(std::size_t link, const PortRef& at, double loss) {
        if (!visited_.insert(at).second) {
            result_.blocks.push_back({at.element, at.port, "loop"});
            return;
        }
        const Element& e = topo_.element(at.element);
        auto d = port_semantics(e, at.port, nm_, topo_.catalog());
        if (d.delivered) {
            result_path_.hops.push_back({link, at.element, at.port, ""});
            result_.deliveries.push_back({result_path_, loss});
            result_path_.hops.pop_back();
        } else if (!d.block.empty()) {
            result_.blocks.push_back({at.element, at.port, d.block});
        } else {
            const double here = loss + topo_.catalog().loss(e.kind);
            for (const auto& out : d.out) {
                result_path_.hops.push_back({link, at.element, at.port, out});
                depart({at.element, out}, here);
                result_path_.hops.pop_back();
            }
        }
        visited_.erase(at);
    }

    const OpticalTopology& topo_;
    double nm_;
    PhysicalPath result_path_;
    TraceResult result_;
    std::set<PortRef> visited_;
};

inline std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline const Element& require_emitter(const OpticalTopology& t, std::string_view tx) {
    if (!t.contains(tx) || t.element(tx).kind != ComponentKind::emitter)
        throw Error(Errc::unknown_emitter, "no emitter '" + std::string(tx) + "'");
    return t.element(tx);
}

}  // namespace detail

/// Every terminating receiver and every absorption point for one wavelength.
inline TraceResult trace_wavelength(const OpticalTopology& t, std::string_view tx, double nm) {
    detail::require_emitter(t, tx);
    return detail::Tracer(t, std::string(tx), nm).run();
}

struct RouteResult {
    std::optional<PhysicalPath> path;
    double loss_db = 0.0;
    std::optional<Blocked> blocked;

    bool ok() const noexcept { return path.has_value(); }
};

/// Lowest-loss delivery for `nm`, ties to traversal order; otherwise the first
/// absorption point met.
inline RouteResult route_wavelength(const OpticalTopology& t, std::string_view tx, double nm) {
    auto tr = trace_wavelength(t, tx, nm);
    if (tr.deliveries.empty()) {
        RouteResult r;
        r.blocked = tr.blocks.empty() ? Blocked{std::string(tx), "out", "no route"} : tr.blocks.front();
        return r;
    }
    const Delivery* best = &tr.deliveries.front();
    for (const auto& d : tr.deliveries)
        if (d.loss_db < best->loss_db - 1e-12) best = &d;
    return {best->path, best->loss_db, std::nullopt};
}

struct BudgetItem {
    std::string item;
    std::string kind;
    double db = 0.0;
    double cumulative_db = 0.0;
};

struct PathLossBudget {
    std::vector<BudgetItem> items;
    double total_db = 0.0;
    double wavelength_nm = 0.0;
};

inline PathLossBudget path_loss(const OpticalTopology& t, const PhysicalPath& path) {
    PathLossBudget b;
    b.wavelength_nm = path.wavelength_nm;
    auto push = [&b](std::string item, std::string_view kind, double db) {
        b.total_db += db;
        b.items.push_back({std::move(item), std::string(kind), db, b.total_db});
    };
    const Catalog& cat = t.catalog();
    for (const auto& h : path.hops) {
        if (h.link >= t.links().size()) throw Error(Errc::invalid_path, "hop references unknown link");
        const Link& l = t.links()[h.link];
        const std::string span = l.a.element + "." + l.a.port + "<->" + l.b.element + "." + l.b.port;
        if (l.fiber_km > 0.0)
            push(span + " (" + detail::format_number(l.fiber_km) + " km)", "fiber", l.fiber_km * cat.fiber_db_per_km());
        if (l.connector_pairs > 0)
            push(span + " x" + std::to_string(l.connector_pairs), "connector_pair",
                 l.connector_pairs * cat.connector_db());
        const Element& e = t.element(h.element);
        if (e.kind == ComponentKind::receiver || e.kind == ComponentKind::emitter) continue;
        push(e.id + " " + h.in_port + "->" + h.out_port, to_string(e.kind), cat.loss(e.kind));
    }
    return b;
}

struct Reach {
    double wavelength_nm = 0.0;
    double loss_db = 0.0;
};

/// Best channel and loss per receiver over all of the emitter's channels.
inline std::map<std::string, Reach> reachable_receivers(const OpticalTopology& t, std::string_view tx,
                                                        double budget_db) {
    if (!(budget_db >= 0.0)) throw Error(Errc::invalid_argument, "loss budget must be non-negative");
    const Element& em = detail::require_emitter(t, tx);
    std::map<std::string, Reach> best;
    for (double nm : em.channels) {
        for (const auto& d : trace_wavelength(t, tx, nm).deliveries) {
            auto [it, fresh] = best.try_emplace(d.path.receiver(), Reach{nm, d.loss_db});
            if (!fresh && d.loss_db < it->second.loss_db - 1e-12) it->second = {nm, d.loss_db};
        }
    }
    std::erase_if(best, [budget_db](const auto& kv) { return kv.second.loss_db > budget_db + 1e-9; });
    return best;
}

/// Component counts divided by the number of backbone nodes.
inline std::map<std::string, double> component_tally(const OpticalTopology& t) {
    std::map<std::string, double> count;
    std::set<std::string> nodes;
    for (const auto& e : t.elements()) {
        if (!e.node.empty()) nodes.insert(e.node);
        count[std::string(to_string(e.kind))] += 1.0;
    }
    const double n = nodes.empty() ? 1.0 : static_cast<double>(nodes.size());
    for (auto& [_, c] : count) c /= n;
    return count;
}

}  // namespace wtrnet
