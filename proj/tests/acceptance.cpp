// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"
#include "wtrnet/cli.hpp"

using namespace wtrnet;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && pass) detail = what;
        pass = pass && cond;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 2) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

// 1. Rank entropy equals enumerated entropy on random small codes.
Outcome oracle_equivalence() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    int checked = 0;
    for (int i = 0; i < 1200; ++i) {
        const std::uint32_t q = i % 2 ? 3 : 2;
        auto inst = test::random_instance(rng, q, 6, 6);
        const auto& g = inst.code.graph();
        o.require(g.edge_count() <= 6 && inst.code.dimension() <= 6, "instance out of bounds");
        const auto rank_h = conditional_entropy_rank(inst.code, inst.target, inst.observed);
        const double brute = brute_force_entropy(inst.code, inst.target, inst.observed);
        o.require(std::fabs(brute - std::round(brute)) < 1e-9, "oracle not integral");
        o.require(static_cast<long>(std::lround(brute)) == static_cast<long>(rank_h),
                  "mismatch at instance " + std::to_string(i));
        ++checked;
    }
    const double secs = seconds_since(t0);
    o.require(secs < 60.0, "too slow");
    if (o.pass) o.detail = std::to_string(checked) + " codes over GF(2)/GF(3), " + fmt(secs) + " s";
    return o;
}

// 2. Two-path scenario.
Outcome two_path() {
    Outcome o;
    auto sc = builtin_scenario("two_path");
    auto net = io::load_network(test::data_path("scenarios/two_path.network.json"));
    auto code = io::load_code(test::data_path("scenarios/two_path.code.json"), net);
    o.require(check_admissible(code, net.users, net.patterns).admissible, "bundled code not admissible");
    auto naive = naive_forwarding();
    auto nr = check_admissible(naive.code, naive.users, naive.patterns);
    o.require(nr.users[0].decodable, "naive code not decodable");
    for (const auto& p : nr.patterns) o.require(!p.secure, "naive pattern " + p.id + " secure");
    auto joint = check_admissible(sc.code, sc.users, {{"t1+t2", {"t1", "t2"}, {0}}});
    o.require(!joint.patterns[0].secure, "joint pattern secure");
    if (o.pass) o.detail = "admissible; naive leaks at t1 and t2; joint {t1,t2} pattern not secure";
    return o;
}

// 3. Multicast scenario.
Outcome multicast() {
    Outcome o;
    auto net = io::load_network(test::data_path("scenarios/multicast.network.json"));
    auto code = io::load_code(test::data_path("scenarios/multicast.code.json"), net);
    auto r = check_admissible(code, net.users, net.patterns);
    o.require(r.users.size() == 2, "expected two users");
    for (const auto& u : r.users) o.require(u.decodable, u.node + " not decodable");
    for (const auto& p : r.patterns) o.require(p.secure, p.id + " not secure");
    if (o.pass) o.detail = "u1, u2 decodable; t1, t2 secure";
    return o;
}

// 4. Crossed scenario.
Outcome crossed() {
    Outcome o;
    auto sc = builtin_scenario("crossed");
    const auto view = pattern_view(sc.code.graph(), {"t2", {"t2"}, {}});
    auto both = [&](const ComponentSet& target, std::size_t want, const std::string& label) {
        const auto r = conditional_entropy_rank(sc.code, target, view);
        const double b = brute_force_entropy(sc.code, target, view);
        o.require(r == want, label + " rank gives " + std::to_string(r));
        o.require(std::fabs(b - static_cast<double>(want)) < 1e-9, label + " oracle gives " + fmt(b, 6));
    };
    both({0}, 1, "H(M1|Y_t2)");
    both({1}, 1, "H(M2|Y_t2)");
    both({0, 1}, 1, "H(M1,M2|Y_t2)");
    o.require(conditional_entropy_rank(sc.code, {0, 1}, {}) == 2, "prior of (M1,M2) not 2");
    auto r = check_admissible(sc.code, sc.users, sc.patterns);
    for (const auto& u : r.users) o.require(u.decodable, u.node + " cannot decode");
    o.require(sc.users[0].node == "u1" && sc.users[0].wanted == ComponentSet{1}, "u1 should want m2");
    o.require(sc.users[1].node == "u2" && sc.users[1].wanted == ComponentSet{0}, "u2 should want m1");
    if (o.pass) o.detail = "H(M1|Y)=1, H(M2|Y)=1, H(M1,M2|Y)=1 of 2; u1 gets m2, u2 gets m1";
    return o;
}

// 5. Key-rate cutoff and monotone curves.
Outcome key_rate() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto cut = max_tolerable_loss(preset("clavis"));
    o.require(!cut.ceiling_capped && cut.loss_db >= 17.0 && cut.loss_db <= 23.0,
              "clavis cutoff " + fmt(cut.loss_db) + " dB");
    for (const char* name : {"gys", "clavis"}) {
        auto curve = rate_curve(preset(name), 0.0, 40.0, 0.1);
        o.require(curve.size() == 401, "curve size");
        for (std::size_t i = 1; i < curve.size(); ++i)
            o.require(curve[i].rate <= curve[i - 1].rate, std::string(name) + " rises at " + fmt(curve[i].loss, 1));
    }
    const double secs = seconds_since(t0);
    o.require(secs < 5.0, "too slow");
    if (o.pass) o.detail = "clavis cutoff " + fmt(cut.loss_db) + " dB; both curves non-increasing; " + fmt(secs, 3) + " s";
    return o;
}

// 6. Loss budgets on the bundled p1 reference topology.
Outcome loss_budgets() {
    Outcome o;
    auto t = io::load_topology(test::data_path("topologies/p1.json"), Catalog(default_catalog()));
    std::ostringstream got;
    auto check = [&](const std::string& tx, const std::string& rx, double want) {
        auto reach = reachable_receivers(t, tx, 1e9);
        auto it = reach.find(rx);
        if (it == reach.end()) {
            o.require(false, tx + " cannot reach " + rx);
            return;
        }
        auto r = route_wavelength(t, tx, it->second.wavelength_nm);
        o.require(r.ok() && r.path->receiver() == rx, tx + "->" + rx + " route");
        if (!r.ok()) return;
        auto b = path_loss(t, *r.path);
        double sum = 0.0;
        for (const auto& item : b.items) sum += item.db;
        o.require(std::fabs(sum - b.total_db) < 1e-3, tx + "->" + rx + " items do not sum");
        o.require(std::fabs(b.total_db - want) <= 0.05, tx + "->" + rx + " total " + fmt(b.total_db));
        got << tx << "->" << rx << " " << fmt(b.total_db) << " dB  ";
    };
    check("Tx1", "Rx1", 10.6);
    check("Tx2", "Rx2", 10.6);
    check("Tx1", "Rx2", 15.5);
    check("Tx2", "Rx1", 15.5);
    if (o.pass) o.detail = got.str();
    return o;
}

// 7. Reachability sets.
Outcome reachability() {
    Outcome o;
    const Catalog cat(default_catalog());
    auto p1 = io::load_topology(test::data_path("topologies/p1.json"), cat);
    std::set<std::string> got;
    for (const auto& [rx, _] : reachable_receivers(p1, "Tx2", 20.0)) got.insert(rx);
    o.require(got == std::set<std::string>{"Rx1", "Rx2", "Rx3"}, "p1 Tx2 reach set");

    auto p2 = io::load_topology(test::data_path("topologies/p2.json"), cat);
    for (const auto& tx : p2.emitters())
        o.require(reachable_receivers(p2, tx, 1e9).size() == 2, "p2 " + tx + " reach count");

    auto p3 = io::load_topology(test::data_path("topologies/p3.json"), cat);
    const auto tx3 = p3.emitters();
    const int n = static_cast<int>(tx3.size());
    for (int i = 1; i <= n; ++i)
        for (double budget : {20.0, 25.0, 30.0})
            for (const auto& [rx, _] : reachable_receivers(p3, "Tx" + std::to_string(i), budget))
                o.require(rx == "Rx" + std::to_string(i) || rx == "Rx" + std::to_string(i % n + 1),
                          "p3 Tx" + std::to_string(i) + " reaches " + rx);
    if (o.pass) o.detail = "p1 Tx2 -> {Rx1,Rx2,Rx3}; p2 open 2 per Tx; p3 nearest only up to 30 dB";
    return o;
}

// 8. Resilience bounds and flow against enumeration.
Outcome resilience() {
    Outcome o;
    o.require(byzantine_bound(4) == std::optional<std::size_t>(1), "byzantine_bound(4)");
    o.require(byzantine_bound(10) == std::optional<std::size_t>(3), "byzantine_bound(10)");
    for (std::size_t c = 0; c <= 12; ++c)
        for (std::size_t t = 0; t <= 12; ++t)
            o.require(secure_rate_bound(c, t) == (c > t ? c - t : 0), "secure_rate_bound");
    std::size_t pairs = 0, graphs = 0;
    for (const auto& [name, g] : test::bundled_graphs()) {
        if (g.node_count() > 8) continue;
        ++graphs;
        for (std::size_t s = 0; s < g.node_count(); ++s)
            for (std::size_t u = 0; u < g.node_count(); ++u) {
                if (s == u) continue;
                auto r = node_disjoint_paths(g, g.node(s).id, g.node(u).id);
                o.require(r.count == test::brute_disjoint_count(g, s, u), name + " flow vs enumeration");
                o.require(test::valid_witness(g, g.node(s).id, g.node(u).id, r.paths), name + " witness");
                ++pairs;
            }
    }
    if (o.pass)
        o.detail = "bounds exact; " + std::to_string(pairs) + " node pairs on " + std::to_string(graphs) +
                   " bundled graphs match enumeration";
    return o;
}

// 9. Trusted chain leaks, weakly trusted exchange does not.
Outcome relay_contrast() {
    Outcome o;
    const auto t0 = Clock::now();
    auto chain = simulate_trusted_chain(2, 3, 2, 1);
    o.require(chain.audit.entries.size() == 1 && chain.audit.entries[0].posterior == 0, "trusted repeater posterior");
    auto pf = io::load_plan(test::data_path("scenarios/two_path.plan.json"));
    o.require(pf.code.has_value(), "plan has no code");
    if (!pf.code) return o;
    std::vector<std::uint64_t> counts(3, 0);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto s = simulate_wtr_exchange(*pf.code, pf.network.users, pf.network.patterns, {2}, seed);
        for (const auto& e : s.audit.entries) o.require(e.posterior == e.prior, "repeater " + e.pattern + " learns m");
        o.require(s.delivered[0].values == std::vector<Symbol>{2}, "wrong delivery");
        ++counts[s.transmissions[0].symbol];
    }
    const double chi = chi_square_uniform(counts);
    o.require(chi < 9.210, "chi-square " + fmt(chi, 3));
    const double secs = seconds_since(t0);
    o.require(secs < 30.0, "too slow");
    if (o.pass) o.detail = "trusted posterior 0; WTR posterior = prior; chi2 " + fmt(chi, 3) + " < 9.210; " + fmt(secs) + " s";
    return o;
}

// 10. End-to-end plan through the CLI.
Outcome pipeline() {
    Outcome o;
    const std::vector<std::string> args{"plan",         test::data_path("topologies/p1.json"), "--pair", "Tx1,Tx2",
                                        "--budget-db", "20", "--field-q", "3", "--json"};
    std::ostringstream out1, err1, out2, err2;
    const int c1 = cli::run(args, out1, err1);
    const int c2 = cli::run(args, out2, err2);
    o.require(c1 == 0, "exit " + std::to_string(c1) + ": " + err1.str());
    o.require(c1 == c2 && out1.str() == out2.str(), "runs differ");
    if (c1 != 0) return o;
    auto j = io::json::parse(out1.str());
    o.require(j["admissibility"]["admissible"].get<bool>(), "plan not admissible");
    o.require(j["resilience"]["disjoint_path_count"] == 2, "disjoint path count");
    o.require(j["resilience"]["authenticity_feasible"].get<bool>(), "authenticity");
    std::size_t single = 0;
    for (const auto& p : j["network"]["patterns"]) single += p["tapped"].size() == 1;
    o.require(single == j["network"]["patterns"].size() && single > 0, "patterns are not single-node");
    if (o.pass) o.detail = "admissible, 2 disjoint repeater paths, authenticity feasible, identical reruns";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"entropy oracle equivalence", oracle_equivalence},
        {"two-path scenario", two_path},
        {"multicast scenario", multicast},
        {"crossed scenario", crossed},
        {"key-rate cutoff", key_rate},
        {"loss budgets", loss_budgets},
        {"reachability", reachability},
        {"resilience", resilience},
        {"relay contrast", relay_contrast},
        {"end-to-end pipeline", pipeline},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
                  << '\n';
        failed += !o.pass;
    }
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " of 10" : std::string("ALL 10 PASSED")) << '\n';
    return failed ? 1 : 0;
}
