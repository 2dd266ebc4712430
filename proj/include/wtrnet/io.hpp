#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wtrnet/error.hpp"
#include "wtrnet/netcode.hpp"
#include "wtrnet/optical.hpp"
#include "wtrnet/planning.hpp"
#include "wtrnet/qkd_rate.hpp"
#include "wtrnet/relay.hpp"
#include "wtrnet/resilience.hpp"

namespace wtrnet::io {

using nlohmann::json;

inline constexpr int schema_version = 1;

namespace detail {

inline void expect_schema(const json& j, std::string_view schema) {
    if (!j.is_object()) throw Error(Errc::parse_error, "expected a JSON object");
    const auto s = j.value("schema", std::string{});
    if (s != schema) throw Error(Errc::parse_error, "expected schema '" + std::string(schema) + "', got '" + s + "'");
    const int v = j.value("version", 0);
    if (v != schema_version) throw Error(Errc::parse_error, "unsupported schema version " + std::to_string(v));
}

inline json header(std::string_view schema) { return {{"schema", schema}, {"version", schema_version}}; }

// Runs `f`, turning JSON library failures into parse errors.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, e.what());
    }
}

inline PortRef parse_port(const std::string& s) {
    const auto dot = s.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == s.size())
        throw Error(Errc::parse_error, "port reference '" + s + "' is not element.port");
    return {s.substr(0, dot), s.substr(dot + 1)};
}

inline json bands_to_json(const std::vector<Band>& bands) {
    json a = json::array();
    for (const auto& b : bands) a.push_back({b.lo, b.hi});
    return a;
}

inline std::vector<Band> bands_from_json(const json& j) {
    std::vector<Band> out;
    for (const auto& b : j) out.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    return out;
}

}  // namespace detail

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse_error, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, path + ": " + e.what());
    }
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::invalid_argument, "cannot write '" + path + "'");
    out << text;
}

// ---- network + code -------------------------------------------------------

inline json network_to_json(const NetworkSpec& n) {
    json j = detail::header("wtrnet.network");
    j["q"] = n.sources.q();
    j["nodes"] = json::array();
    for (const auto& v : n.graph.nodes()) j["nodes"].push_back({{"id", v.id}, {"role", to_string(v.role)}});
    j["edges"] = json::array();
    for (const auto& e : n.graph.edge_specs()) j["edges"].push_back({e.tail, e.head});
    j["sources"] = json::array();
    for (const auto& s : n.sources.sources())
        j["sources"].push_back({{"node", s.node}, {"message_dim", s.message_dim}, {"key_dim", s.key_dim}});
    j["users"] = json::array();
    for (const auto& u : n.users) j["users"].push_back({{"node", u.node}, {"wants", u.wanted}});
    j["patterns"] = json::array();
    for (const auto& p : n.patterns)
        j["patterns"].push_back({{"id", p.id}, {"tapped", p.tapped}, {"targets", p.targets}});
    return j;
}

inline NetworkSpec network_from_json(const json& j) {
    return detail::guarded([&] {
        detail::expect_schema(j, "wtrnet.network");
        std::vector<Node> nodes;
        for (const auto& v : j.at("nodes"))
            nodes.push_back({v.at("id").get<std::string>(), parse_node_role(v.at("role").get<std::string>())});
        std::vector<EdgeSpec> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw Error(Errc::parse_error, "edge must be [tail, head]");
            edges.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
        }
        NetworkSpec n;
        n.graph = build_graph(std::move(nodes), edges);
        std::vector<SourceAssignment> src;
        for (const auto& s : j.at("sources"))
            src.push_back({s.at("node").get<std::string>(), s.at("message_dim").get<std::size_t>(),
                           s.at("key_dim").get<std::size_t>()});
        n.sources = SourceSpec(j.at("q").get<std::uint32_t>(), std::move(src));
        for (const auto& s : n.sources.sources())
            if (!n.graph.contains(s.node)) throw Error(Errc::unknown_node, "source node '" + s.node + "'");
        for (const auto& u : j.value("users", json::array())) {
            n.users.push_back({u.at("node").get<std::string>(), u.at("wants").get<ComponentSet>()});
            validate_user(n.graph, n.sources, n.users.back());
        }
        for (const auto& p : j.value("patterns", json::array())) {
            n.patterns.push_back({p.at("id").get<std::string>(), p.at("tapped").get<std::vector<std::string>>(),
                                  p.at("targets").get<ComponentSet>()});
            validate_pattern(n.graph, n.sources, n.patterns.back());
        }
        return n;
    });
}

inline json code_to_json(const LinearNetworkCode& c) {
    json j = detail::header("wtrnet.code");
    j["local"] = c.local();
    return j;
}

inline LinearNetworkCode code_from_json(const json& j, const NetworkSpec& n) {
    return detail::guarded([&] {
        detail::expect_schema(j, "wtrnet.code");
        return propagate_code(n.graph, n.sources, j.at("local").get<LocalCoefficients>());
    });
}

inline NetworkSpec load_network(const std::string& path) { return network_from_json(read_json_file(path)); }
inline LinearNetworkCode load_code(const std::string& path, const NetworkSpec& n) {
    return code_from_json(read_json_file(path), n);
}

inline NetworkSpec scenario_network(const Scenario& s) {
    return {s.code.graph(), s.code.sources(), s.users, s.patterns};
}

// ---- reports --------------------------------------------------------------

inline json admissibility_to_json(const AdmissibilityReport& r) {
    json j = {{"q", r.q}, {"admissible", r.admissible}, {"users", json::array()}, {"patterns", json::array()}};
    for (const auto& u : r.users)
        j["users"].push_back({{"node", u.node}, {"conditional_entropy", u.conditional_entropy}, {"decodable", u.decodable}});
    for (const auto& p : r.patterns)
        j["patterns"].push_back({{"id", p.id},
                                 {"target_entropy", p.target_entropy},
                                 {"conditional_entropy", p.conditional_entropy},
                                 {"conditional_entropy_bits", symbols_to_bits(double(p.conditional_entropy), r.q)},
                                 {"secure", p.secure},
                                 {"verdict", to_string(p.verdict)}});
    return j;
}

inline AdmissibilityReport admissibility_from_json(const json& j) {
    AdmissibilityReport r;
    r.q = j.at("q").get<std::uint32_t>();
    r.admissible = j.at("admissible").get<bool>();
    for (const auto& u : j.at("users"))
        r.users.push_back({u.at("node").get<std::string>(), u.at("conditional_entropy").get<std::size_t>(),
                           u.at("decodable").get<bool>()});
    for (const auto& p : j.at("patterns")) {
        const auto prior = p.at("target_entropy").get<std::size_t>();
        const auto post = p.at("conditional_entropy").get<std::size_t>();
        r.patterns.push_back({p.at("id").get<std::string>(), prior, post, p.at("secure").get<bool>(),
                              classify_leak(prior, post)});
    }
    return r;
}

inline json resilience_to_json(const ResilienceReport& r) {
    json j = {{"source", r.source},
              {"user", r.user},
              {"disjoint_path_count", r.disjoint_path_count},
              {"paths", r.paths},
              {"max_byzantine_t", r.max_byzantine_t ? json(*r.max_byzantine_t) : json(nullptr)},
              {"queried_t", r.queried_t},
              {"secure_rate_bound", r.secure_rate_bound},
              {"authenticity_feasible", r.authenticity.overall},
              {"authenticity", json::array()}};
    for (std::size_t i = 0; i < r.pattern_ids.size(); ++i)
        j["authenticity"].push_back({{"pattern", r.pattern_ids[i]}, {"feasible", bool(r.authenticity.per_pattern[i])}});
    return j;
}

inline json session_to_json(const RelaySession& s) {
    json j = detail::header("wtrnet.session");
    j["mode"] = to_string(s.mode);
    j["q"] = s.q;
    j["seed"] = s.seed;
    j["message"] = s.message;
    j["keys"] = s.keys;
    j["transmissions"] = json::array();
    for (const auto& t : s.transmissions) j["transmissions"].push_back({{"edge", t.label}, {"symbol", t.symbol}});
    j["views"] = json::array();
    for (const auto& v : s.views) {
        json items = json::array();
        for (std::size_t i = 0; i < v.items.size(); ++i) items.push_back({{"item", v.items[i]}, {"symbol", v.values[i]}});
        j["views"].push_back({{"node", v.node}, {"sees", items}});
    }
    j["delivered"] = json::array();
    for (const auto& d : s.delivered)
        j["delivered"].push_back(
            {{"user", d.user}, {"components", d.components}, {"values", d.values}, {"decoded", d.decoded}});
    j["audit"] = json::array();
    for (const auto& a : s.audit.entries)
        j["audit"].push_back(
            {{"pattern", a.pattern}, {"prior", a.prior}, {"posterior", a.posterior}, {"verdict", to_string(a.verdict)}});
    return j;
}

inline json throughput_to_json(const ThroughputReport& r) {
    return {{"link_rates_bps", r.link_rates_bps},
            {"used_edges", r.used_edges},
            {"effective_bps", r.effective_bps},
            {"aggregate_bps", r.aggregate_bps},
            {"bottleneck", r.bottleneck_label}};
}

// ---- optical --------------------------------------------------------------

inline json catalog_to_json(const Catalog& c) {
    json j = detail::header("wtrnet.catalog");
    j["components"] = json::array();
    for (const auto& item : c.items()) {
        json e = {{"kind", to_string(item.kind)}, {"insertion_loss_db", item.insertion_loss}};
        if (std::isfinite(item.window.hi)) e["window_nm"] = {item.window.lo, item.window.hi};
        if (item.channels > 0) e["channels"] = item.channels;
        j["components"].push_back(e);
    }
    return j;
}

inline Catalog catalog_from_json(const json& j) {
    return detail::guarded([&] {
        detail::expect_schema(j, "wtrnet.catalog");
        std::vector<OpticalComponent> items;
        for (const auto& e : j.at("components")) {
            OpticalComponent c;
            c.kind = parse_component_kind(e.at("kind").get<std::string>());
            c.insertion_loss = e.at("insertion_loss_db").get<double>();
            if (e.contains("window_nm")) c.window = {e["window_nm"].at(0).get<double>(), e["window_nm"].at(1).get<double>()};
            c.channels = e.value("channels", 0);
            items.push_back(c);
        }
        return Catalog(std::move(items));
    });
}

inline Catalog load_catalog(const std::string& path) { return catalog_from_json(read_json_file(path)); }

/// Table-based catalog, or the file named by WTRNET_CATALOG when set.
inline Catalog active_catalog() {
    if (const char* p = std::getenv("WTRNET_CATALOG"); p && *p) return load_catalog(p);
    return Catalog(default_catalog());
}

inline json topology_to_json(const OpticalTopology& t) {
    json j = detail::header("wtrnet.topology");
    j["name"] = t.name();
    j["elements"] = json::array();
    for (const auto& e : t.elements()) {
        json x = {{"id", e.id}, {"kind", to_string(e.kind)}};
        if (!e.node.empty()) x["node"] = e.node;
        if (!e.pass.empty()) x["pass"] = detail::bands_to_json(e.pass);
        if (!e.add_pass.empty()) x["add_pass"] = detail::bands_to_json(e.add_pass);
        if (!e.channels.empty()) x["channels"] = e.channels;
        if (e.kind == ComponentKind::awg)
            x["grid"] = {{"channels", e.grid.channels},
                         {"bands", e.grid.bands},
                         {"base_nm", e.grid.base_nm},
                         {"spacing_nm", e.grid.spacing_nm},
                         {"fsr_nm", e.grid.fsr_nm}};
        j["elements"].push_back(x);
    }
    j["links"] = json::array();
    for (const auto& l : t.links())
        j["links"].push_back({{"a", l.a.element + "." + l.a.port},
                              {"b", l.b.element + "." + l.b.port},
                              {"fiber_km", l.fiber_km},
                              {"connector_pairs", l.connector_pairs}});
    j["plan"] = json::array();
    for (const auto& p : t.plan()) j["plan"].push_back({{"tx", p.tx}, {"rx", p.rx}, {"wavelength_nm", p.wavelength_nm}});
    return j;
}

inline OpticalTopology topology_from_json(const json& j, const Catalog& catalog) {
    return detail::guarded([&] {
        detail::expect_schema(j, "wtrnet.topology");
        std::vector<Element> elements;
        for (const auto& x : j.at("elements")) {
            Element e;
            e.id = x.at("id").get<std::string>();
            e.kind = parse_component_kind(x.at("kind").get<std::string>());
            e.node = x.value("node", std::string{});
            if (x.contains("pass")) e.pass = detail::bands_from_json(x["pass"]);
            if (x.contains("add_pass")) e.add_pass = detail::bands_from_json(x["add_pass"]);
            if (x.contains("channels")) e.channels = x["channels"].get<std::vector<double>>();
            if (x.contains("grid")) {
                const auto& g = x["grid"];
                e.grid = {g.at("channels").get<int>(), g.at("bands").get<int>(), g.at("base_nm").get<double>(),
                          g.at("spacing_nm").get<double>(), g.at("fsr_nm").get<double>()};
            }
            elements.push_back(std::move(e));
        }
        std::vector<Link> links;
        for (const auto& l : j.at("links"))
            links.push_back({detail::parse_port(l.at("a").get<std::string>()),
                             detail::parse_port(l.at("b").get<std::string>()), l.value("fiber_km", 0.0),
                             l.value("connector_pairs", 0)});
        std::vector<PlanEntry> plan;
        for (const auto& p : j.value("plan", json::array()))
            plan.push_back({p.at("tx").get<std::string>(), p.at("rx").get<std::string>(),
                            p.at("wavelength_nm").get<double>()});
        return OpticalTopology(j.at("name").get<std::string>(), std::move(elements), std::move(links), std::move(plan),
                               catalog);
    });
}

inline OpticalTopology load_topology(const std::string& path, const Catalog& catalog) {
    return topology_from_json(read_json_file(path), catalog);
}

inline json budget_to_json(const PathLossBudget& b) {
    json j = {{"wavelength_nm", b.wavelength_nm}, {"total_db", b.total_db}, {"items", json::array()}};
    for (const auto& i : b.items)
        j["items"].push_back({{"item", i.item}, {"kind", i.kind}, {"db", i.db}, {"cumulative_db", i.cumulative_db}});
    return j;
}

inline std::string budget_to_csv(const PathLossBudget& b) {
    std::ostringstream os;
    os.precision(10);
    os << "item,kind,dB,cumulative_dB\n";
    for (const auto& i : b.items) os << '"' << i.item << "\"," << i.kind << ',' << i.db << ',' << i.cumulative_db << '\n';
    return os.str();
}

// ---- plan -----------------------------------------------------------------

inline json plan_to_json(const Plan& p) {
    json j = detail::header("wtrnet.plan");
    j["source"] = p.mapping.source;
    j["user"] = p.mapping.user;
    j["budget_db"] = p.budget_db;
    j["paths"] = p.mapping.paths;
    j["insufficient_paths"] = p.mapping.insufficient_paths;
    j["network"] = network_to_json(p.network);
    j["code"] = p.code ? code_to_json(*p.code) : json(nullptr);
    j["admissibility"] = p.admissibility ? admissibility_to_json(*p.admissibility) : json(nullptr);
    j["resilience"] = resilience_to_json(p.resilience);
    return j;
}

/// What a plan file carries for simulation: the network and its code.
struct PlanFile {
    NetworkSpec network;
    std::optional<LinearNetworkCode> code;
    std::vector<NodePath> paths;
};

inline PlanFile plan_from_json(const json& j) {
    return detail::guarded([&] {
        detail::expect_schema(j, "wtrnet.plan");
        PlanFile f;
        f.network = network_from_json(j.at("network"));
        if (!j.at("code").is_null()) f.code = code_from_json(j["code"], f.network);
        f.paths = j.value("paths", std::vector<NodePath>{});
        return f;
    });
}

inline PlanFile load_plan(const std::string& path) { return plan_from_json(read_json_file(path)); }

inline json params_to_json(const QkdSystemParams& p) {
    return {{"name", p.name}, {"mu", p.mu},         {"eta_det", p.eta_det}, {"y0", p.y0},
            {"e_det", p.e_det}, {"f", p.f},         {"q_sift", p.q_sift},   {"alpha", p.alpha}};
}

}  // namespace wtrnet::io
