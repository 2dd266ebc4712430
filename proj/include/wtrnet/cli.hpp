#pragma once

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wtrnet/error.hpp"
#include "wtrnet/io.hpp"
#include "wtrnet/netcode.hpp"
#include "wtrnet/optical.hpp"
#include "wtrnet/planning.hpp"
#include "wtrnet/prototypes.hpp"
#include "wtrnet/qkd_rate.hpp"
#include "wtrnet/relay.hpp"
#include "wtrnet/resilience.hpp"

namespace wtrnet::cli {

enum ExitCode : int { ok = 0, negative = 1, input_error = 2 };

/// Errors that come from the analysis itself rather than from bad input.
inline bool is_analysis_negative(Errc c) { return c == Errc::system_nonviable || c == Errc::not_admissible; }

namespace detail {

using io::json;

inline std::string fixed(double v, int digits = 3) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

// Writes `text` to --output when given, otherwise to `out`.
inline void emit(const std::string& output, const std::string& text, std::ostream& out) {
    if (output.empty()) out << text;
    else io::write_text(output, text);
}

inline void print_report(const AdmissibilityReport& r, std::ostream& out) {
    for (const auto& u : r.users)
        out << "user " << u.node << ": H=" << u.conditional_entropy << (u.decodable ? " decodable" : " NOT decodable")
            << '\n';
    for (const auto& p : r.patterns)
        out << "pattern " << p.id << ": H=" << p.conditional_entropy << "/" << p.target_entropy << " "
            << to_string(p.verdict) << '\n';
    out << (r.admissible ? "admissible" : "not admissible") << '\n';
}

inline NetworkSpec with_field(NetworkSpec n, std::uint32_t q) {
    if (q != 0 && q != n.sources.q()) n.sources = SourceSpec(q, n.sources.sources());
    return n;
}

struct Options {
    std::string output;
    bool as_json = false;
    std::uint32_t field_q = 0;
    std::uint64_t cap_enum = default_enumeration_cap;
    std::uint64_t cap_search = default_search_cap;
};

inline int cmd_check(const std::string& network_file, const std::string& code_file, const std::string& scenario,
                     bool oracle, const Options& o, std::ostream& out) {
    NetworkSpec net;
    LinearNetworkCode code;
    if (!scenario.empty()) {
        Scenario s = scenario == "naive" ? naive_forwarding() : builtin_scenario(scenario);
        net = with_field(io::scenario_network(s), o.field_q);
        code = propagate_code(net.graph, net.sources, s.code.local());
    } else {
        if (network_file.empty() || code_file.empty())
            throw Error(Errc::invalid_argument, "check needs NETWORK and CODE files or --scenario");
        net = with_field(io::load_network(network_file), o.field_q);
        code = io::load_code(code_file, net);
    }
    const auto report = check_admissible(code, net.users, net.patterns);
    json j = io::admissibility_to_json(report);
    if (oracle) {
        j["oracle"] = json::array();
        for (const auto& p : net.patterns) {
            const double h = brute_force_entropy(code, p.targets, pattern_view(code.graph(), p), o.cap_enum);
            j["oracle"].push_back({{"pattern", p.id}, {"conditional_entropy", h}});
        }
    }
    if (o.as_json) {
        emit(o.output, j.dump(2) + "\n", out);
    } else {
        std::ostringstream os;
        print_report(report, os);
        if (oracle)
            for (const auto& e : j["oracle"])
                os << "oracle " << e["pattern"].get<std::string>() << ": H=" << e["conditional_entropy"].get<double>()
                   << '\n';
        emit(o.output, os.str(), out);
    }
    return report.admissible ? ok : negative;
}

inline int cmd_rate(const std::string& preset_name, double lo, double hi, double step, double freq_hz,
                    const Options& o, std::ostream& out) {
    const auto params = resolve_params(preset_name);
    const auto curve = rate_curve(params, lo, hi, step);
    std::ostringstream os;
    os.precision(10);
    os << "loss_db,rate_bits_per_qubit,qber";
    if (freq_hz > 0) os << ",rate_bits_per_second";
    os << '\n';
    for (const auto& p : curve) {
        os << p.loss << ',' << p.rate << ',' << p.qber;
        if (freq_hz > 0) os << ',' << p.rate * freq_hz;
        os << '\n';
    }
    const auto cut = max_tolerable_loss(params);
    os << "# cutoff_db," << fixed(cut.loss_db, 2) << ",preset=" << params.name
       << (cut.ceiling_capped ? ",ceiling_capped" : "") << '\n';
    emit(o.output, os.str(), out);
    return ok;
}

inline int cmd_budget(const std::string& topo_file, const std::string& tx, const std::optional<std::string>& rx,
                      std::optional<double> nm, bool csv, const Options& o, std::ostream& out,
                      std::ostream& err) {
    const auto topo = io::load_topology(topo_file, io::active_catalog());
    if (!topo.contains(tx) || topo.element(tx).kind != ComponentKind::emitter)
        throw Error(Errc::unknown_emitter, "no emitter '" + tx + "'");
    if (rx && !nm) {
        auto reach = reachable_receivers(topo, tx, 1e9);
        auto it = reach.find(*rx);
        if (it == reach.end()) {
            err << "blocked: " << *rx << " is not reachable from " << tx << " on any channel\n";
            return negative;
        }
        nm = it->second.wavelength_nm;
    }
    if (!nm) throw Error(Errc::invalid_argument, "budget needs --wavelength or --rx");
    auto route = route_wavelength(topo, tx, *nm);
    if (!route.ok()) {
        err << "blocked at " << route.blocked->element << "." << route.blocked->port << ": " << route.blocked->reason
            << '\n';
        return negative;
    }
    if (rx && route.path->receiver() != *rx) {
        err << "blocked: " << fixed(*nm, 2) << " nm ends at " << route.path->receiver() << ", not " << *rx << '\n';
        return negative;
    }
    const auto budget = path_loss(topo, *route.path);
    if (o.as_json) {
        json j = io::budget_to_json(budget);
        j["tx"] = tx;
        j["rx"] = route.path->receiver();
        emit(o.output, j.dump(2) + "\n", out);
    } else if (csv) {
        emit(o.output, io::budget_to_csv(budget), out);
    } else {
        std::ostringstream os;
        os << tx << " -> " << route.path->receiver() << " at " << fixed(*nm, 2) << " nm\n";
        for (const auto& i : budget.items)
            os << "  " << std::left << std::setw(52) << i.item << std::setw(16) << i.kind << std::right << std::setw(7)
               << fixed(i.db, 2) << std::setw(9) << fixed(i.cumulative_db, 2) << '\n';
        os << "total " << fixed(budget.total_db, 2) << " dB\n";
        emit(o.output, os.str(), out);
    }
    return ok;
}

inline std::pair<std::string, std::string> split_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw Error(Errc::invalid_argument, "--pair expects TX_SOURCE,TX_USER");
    return {s.substr(0, comma), s.substr(comma + 1)};
}

inline int cmd_plan(const std::string& topo_file, const std::string& pair, double budget_db, const Options& o,
                    std::ostream& out, std::ostream& err) {
    const auto topo = io::load_topology(topo_file, io::active_catalog());
    const auto [s, u] = split_pair(pair);
    const std::uint32_t q = o.field_q == 0 ? 3 : o.field_q;
    const auto plan = build_plan(topo, s, u, budget_db, q, o.cap_search);
    const json j = io::plan_to_json(plan);
    if (!o.output.empty()) io::write_text(o.output, j.dump(2) + "\n");
    if (o.as_json) {
        out << j.dump(2) << '\n';
    } else {
        out << "pair " << s << " -> " << u << " within " << fixed(budget_db, 1) << " dB, GF(" << q << ")\n";
        for (const auto& p : plan.mapping.paths) {
            out << "  path";
            for (const auto& n : p) out << ' ' << n;
            out << '\n';
        }
        const auto& r = plan.resilience;
        out << "disjoint paths: " << r.disjoint_path_count << ", byzantine t_max: "
            << (r.max_byzantine_t ? std::to_string(*r.max_byzantine_t) : "none")
            << ", authenticity vs single nodes: " << (r.authenticity.overall ? "feasible" : "infeasible") << '\n';
        if (plan.admissibility) print_report(*plan.admissibility, out);
    }
    if (plan.mapping.insufficient_paths) {
        err << "insufficient paths: found " << plan.mapping.paths.size() << " disjoint repeater path(s) between " << s
            << " and " << u << ", need 2\n";
        return negative;
    }
    if (!plan.code) {
        err << "no admissible code over GF(" << q << ")\n";
        return negative;
    }
    return plan.admissible() ? ok : negative;
}

inline int cmd_simulate(const std::string& plan_file, const std::string& scenario, std::vector<Symbol> message,
                        std::uint64_t seed, const std::string& mode, bool override, const Options& o,
                        std::ostream& out) {
    NetworkSpec net;
    std::optional<LinearNetworkCode> code;
    std::vector<NodePath> paths;
    if (!scenario.empty()) {
        Scenario s = scenario == "naive" ? naive_forwarding() : builtin_scenario(scenario);
        net = io::scenario_network(s);
        code = s.code;
    } else {
        auto pf = io::load_plan(plan_file);
        net = std::move(pf.network);
        code = std::move(pf.code);
        paths = std::move(pf.paths);
    }
    RelaySession session;
    if (mode == "trusted") {
        // Relay along the longest declared repeater path, or one repeater by default.
        std::size_t links = 2;
        for (const auto& p : paths) links = std::max(links, p.size() - 1);
        session = simulate_trusted_chain(links, net.sources.q(), message.empty() ? 0 : message.front(), seed);
    } else if (mode == "wtr") {
        if (!code) throw Error(Errc::not_admissible, "plan carries no code");
        if (message.empty()) message.assign(net.sources.message_dim(), 0);
        session = simulate_wtr_exchange(*code, net.users, net.patterns, message, seed, override);
    } else {
        throw Error(Errc::invalid_argument, "--mode must be trusted or wtr");
    }
    const json j = io::session_to_json(session);
    if (o.as_json || !o.output.empty()) emit(o.output, j.dump(2) + "\n", out);
    if (!o.as_json) {
        out << "mode " << to_string(session.mode) << ", seed " << seed << '\n';
        for (const auto& t : session.transmissions) out << "  " << t.label << " = " << t.symbol << '\n';
        for (const auto& d : session.delivered) {
            out << "delivered to " << d.user << ":";
            for (auto v : d.values) out << ' ' << v;
            out << (d.decoded ? "" : " (undecodable)") << '\n';
        }
        for (const auto& a : session.audit.entries)
            out << "audit " << a.pattern << ": " << a.posterior << "/" << a.prior << " " << to_string(a.verdict) << '\n';
    }
    return ok;
}

inline int cmd_search(const std::string& network_file, const Options& o, std::ostream& out, std::ostream& err) {
    const auto net = with_field(io::load_network(network_file), o.field_q);
    auto code = search_code(net.graph, net.sources, net.users, net.patterns, o.cap_search);
    if (!code) {
        err << "no admissible code over GF(" << net.sources.q() << ")\n";
        return negative;
    }
    emit(o.output, io::code_to_json(*code).dump(2) + "\n", out);
    return ok;
}

inline int cmd_build(const std::string& kind, const PrototypeConfig& cfg, const Options& o, std::ostream& out) {
    auto topo = build_prototype(parse_prototype_kind(kind), cfg);
    emit(o.output, io::topology_to_json(topo).dump(2) + "\n", out);
    return ok;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weakly trusted repeater network toolkit"};
    app.require_subcommand(1);
    detail::Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output", o.output, "Write the main result to this file");
        sub->add_flag("--json", o.as_json, "Emit JSON");
    };

    std::string network_file, code_file, scenario, topo_file, plan_file, preset_name = "clavis", tx, pair, mode = "wtr",
                                                                         ring = "open", kind;
    bool oracle = false, csv = false, override = false;
    double lo = 0.0, hi = 30.0, step = 0.5, budget_db = 20.0, freq = 0.0;
    std::optional<std::string> rx;
    std::optional<double> nm;
    std::uint64_t seed = 0;
    std::vector<Symbol> message;
    PrototypeConfig cfg;

    auto* check = app.add_subcommand("check", "Check a code against the secure and decodable conditions");
    check->add_option("network", network_file, "Network file");
    check->add_option("code", code_file, "Code file");
    check->add_option("--scenario", scenario, "Built-in scenario: two_path, multicast, crossed, naive");
    check->add_option("--field-q", o.field_q, "Override the field size");
    check->add_option("--cap-enum", o.cap_enum, "Brute-force enumeration cap");
    check->add_flag("--oracle", oracle, "Also run the brute-force entropy oracle");
    add_common(check);

    auto* rate = app.add_subcommand("rate", "Secret-key rate versus channel loss (CSV)");
    rate->add_option("--preset", preset_name, "gys, clavis, or a key=value file");
    rate->add_option("--min", lo, "First loss in dB");
    rate->add_option("--max", hi, "Last loss in dB");
    rate->add_option("--step", step, "Loss step in dB");
    rate->add_option("--frequency", freq, "Emitter clock in Hz, adds a bits/s column");
    add_common(rate);

    auto* budget = app.add_subcommand("budget", "Itemized loss budget of one route");
    budget->add_option("topology", topo_file, "Topology file")->required();
    budget->add_option("--tx", tx, "Emitter")->required();
    budget->add_option("--rx", rx, "Receiver (picks its channel)");
    budget->add_option("--wavelength", nm, "Wavelength in nm");
    budget->add_flag("--csv", csv, "Emit CSV");
    add_common(budget);

    auto* plan = app.add_subcommand("plan", "Map a pair onto repeaters, search a code, assess resilience");
    plan->add_option("topology", topo_file, "Topology file")->required();
    plan->add_option("--pair", pair, "TX_SOURCE,TX_USER")->required();
    plan->add_option("--budget-db", budget_db, "Per-link loss budget");
    plan->add_option("--field-q", o.field_q, "Field size (default 3)");
    plan->add_option("--cap-search", o.cap_search, "Code search cap");
    add_common(plan);

    auto* sim = app.add_subcommand("simulate", "Relay one message and audit what each node learns");
    sim->add_option("plan", plan_file, "Plan file");
    sim->add_option("--scenario", scenario, "Built-in scenario instead of a plan file");
    sim->add_option("--message", message, "Message symbols");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--mode", mode, "wtr or trusted")->check(CLI::IsMember({"wtr", "trusted"}));
    sim->add_flag("--override", override, "Run even if the code is not admissible");
    add_common(sim);

    auto* search = app.add_subcommand("search", "Exhaustive search for an admissible code");
    search->add_option("network", network_file, "Network file")->required();
    search->add_option("--field-q", o.field_q, "Override the field size");
    search->add_option("--cap-search", o.cap_search, "Search cap");
    add_common(search);

    auto* build = app.add_subcommand("build", "Export a prototype topology");
    build->add_option("kind", kind, "p1, p2 or p3")->required();
    build->add_option("--ring-mode", ring, "p2 ring: open, closed or dual");
    build->add_option("--branches", cfg.branches, "Backbone nodes");
    build->add_option("--tx-per-branch", cfg.tx_per_branch, "Emitters per access network");
    add_common(build);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return input_error;
    }

    try {
        if (*check) return detail::cmd_check(network_file, code_file, scenario, oracle, o, out);
        if (*rate) return detail::cmd_rate(preset_name, lo, hi, step, freq, o, out);
        if (*budget) return detail::cmd_budget(topo_file, tx, rx, nm, csv, o, out, err);
        if (*plan) return detail::cmd_plan(topo_file, pair, budget_db, o, out, err);
        if (*sim) {
            if (plan_file.empty() == scenario.empty())
                throw Error(Errc::invalid_argument, "simulate needs exactly one of PLAN or --scenario");
            return detail::cmd_simulate(plan_file, scenario, message, seed, mode, override, o, out);
        }
        if (*search) return detail::cmd_search(network_file, o, out, err);
        if (*build) {
            cfg.ring_mode = parse_ring_mode(ring);
            return detail::cmd_build(kind, cfg, o, out);
        }
    } catch (const Error& e) {
        err << e.what() << '\n';
        return is_analysis_negative(e.code()) ? negative : input_error;
    }
    return input_error;
}

}  // namespace wtrnet::cli
