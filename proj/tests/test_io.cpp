#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace wtrnet;
using io::json;

namespace {

Catalog table() { return Catalog(default_catalog()); }

std::string temp_file(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / ("wtrnet_io_" + name);
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST(RoundTrip, ScenarioFiles) {
    for (const char* name : {"two_path", "multicast", "crossed"}) {
        const auto base = test::data_path(std::string("scenarios/") + name);
        auto net = io::load_network(base + ".network.json");
        auto code = io::load_code(base + ".code.json", net);
        auto net2 = io::network_from_json(io::network_to_json(net));
        EXPECT_EQ(net, net2) << name;
        EXPECT_EQ(code, io::code_from_json(io::code_to_json(code), net2)) << name;
        // The files carry the built-in scenarios.
        auto sc = builtin_scenario(name);
        EXPECT_EQ(net, io::scenario_network(sc)) << name;
        EXPECT_EQ(code, sc.code) << name;
    }
    auto nokey = io::load_network(test::data_path("scenarios/two_path_nokey.network.json"));
    EXPECT_EQ(nokey, io::network_from_json(io::network_to_json(nokey)));
    EXPECT_EQ(nokey.sources.key_dim(), 0u);
}

TEST(RoundTrip, NaiveCode) {
    auto net = io::load_network(test::data_path("scenarios/two_path.network.json"));
    auto code = io::load_code(test::data_path("scenarios/naive.code.json"), net);
    EXPECT_EQ(code, naive_forwarding().code);
}

TEST(RoundTrip, PlanFiles) {
    for (const char* name : {"two_path", "p1_tx1_tx2"}) {
        const auto path = test::data_path(std::string("scenarios/") + name + ".plan.json");
        auto j = io::read_json_file(path);
        auto pf = io::plan_from_json(j);
        ASSERT_TRUE(pf.code) << name;
        EXPECT_TRUE(is_admissible(*pf.code, pf.network.users, pf.network.patterns)) << name;
        auto again = io::plan_from_json(j);
        EXPECT_EQ(pf.network, again.network);
        EXPECT_EQ(*pf.code, *again.code);
        EXPECT_EQ(pf.paths, again.paths);
        EXPECT_EQ(io::network_from_json(io::network_to_json(pf.network)), pf.network);
    }
}

TEST(RoundTrip, P1PlanMatchesFreshPlan) {
    auto topo = io::load_topology(test::data_path("topologies/p1.json"), table());
    auto plan = build_plan(topo, "Tx1", "Tx2", 20.0, 3);
    auto pf = io::plan_from_json(io::read_json_file(test::data_path("scenarios/p1_tx1_tx2.plan.json")));
    EXPECT_EQ(pf.network, plan.network);
    ASSERT_TRUE(plan.code);
    EXPECT_EQ(*pf.code, *plan.code);
}

TEST(RoundTrip, TopologyFiles) {
    for (const char* name : {"p1", "p2", "p2_closed", "p2_dual", "p3"}) {
        auto t = io::load_topology(test::data_path(std::string("topologies/") + name + ".json"), table());
        auto j = io::topology_to_json(t);
        auto t2 = io::topology_from_json(j, table());
        EXPECT_EQ(t, t2) << name;
        EXPECT_EQ(io::topology_to_json(t2), j) << name;
    }
}

TEST(RoundTrip, TopologyFilesMatchBuilders) {
    PrototypeConfig c;
    EXPECT_EQ(io::load_topology(test::data_path("topologies/p1.json"), table()), build_prototype(PrototypeKind::p1, c));
    EXPECT_EQ(io::load_topology(test::data_path("topologies/p2.json"), table()), build_prototype(PrototypeKind::p2, c));
    EXPECT_EQ(io::load_topology(test::data_path("topologies/p3.json"), table()), build_prototype(PrototypeKind::p3, c));
    c.ring_mode = RingMode::closed;
    EXPECT_EQ(io::load_topology(test::data_path("topologies/p2_closed.json"), table()),
              build_prototype(PrototypeKind::p2, c));
    c.ring_mode = RingMode::dual;
    EXPECT_EQ(io::load_topology(test::data_path("topologies/p2_dual.json"), table()),
              build_prototype(PrototypeKind::p2, c));
}

TEST(RoundTrip, Catalog) {
    auto c = io::load_catalog(test::data_path("catalog/table1.json"));
    EXPECT_EQ(c, table());
    EXPECT_EQ(io::catalog_from_json(io::catalog_to_json(c)), c);
}

TEST(Catalog, EnvironmentOverride) {
    auto j = io::catalog_to_json(table());
    for (auto& e : j["components"])
        if (e["kind"] == "splitter_1x4") e["insertion_loss_db"] = 6.0;
    const auto path = temp_file("catalog.json", j.dump());
    ::setenv("WTRNET_CATALOG", path.c_str(), 1);
    auto c = io::active_catalog();
    ::unsetenv("WTRNET_CATALOG");
    EXPECT_DOUBLE_EQ(c.loss(ComponentKind::splitter_1x4), 6.0);
    EXPECT_EQ(io::active_catalog(), table());
    auto t = io::load_topology(test::data_path("topologies/p1.json"), c);
    auto r = route_wavelength(t, "Tx1", 1540.0);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(path_loss(t, *r.path).total_db, 9.6, 1e-9);
}

TEST(Parse, Errors) {
    auto code = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::invalid_argument;
    };
    EXPECT_EQ(code([] { io::read_json_file(temp_file("bad.json", "{ not json")); }), Errc::parse_error);
    EXPECT_EQ(code([] { io::read_json_file("/nonexistent.json"); }), Errc::parse_error);
    EXPECT_EQ(code([] { io::network_from_json(json{{"schema", "wtrnet.code"}, {"version", 1}}); }), Errc::parse_error);
    EXPECT_EQ(code([] { io::network_from_json(json{{"schema", "wtrnet.network"}, {"version", 99}}); }),
              Errc::parse_error);
    auto j = io::network_to_json(io::scenario_network(builtin_scenario("two_path")));
    j.erase("nodes");
    EXPECT_EQ(code([&] { io::network_from_json(j); }), Errc::parse_error);
    auto cyc = io::network_to_json(io::scenario_network(builtin_scenario("two_path")));
    cyc["edges"].push_back({"u", "s"});
    EXPECT_EQ(code([&] { io::network_from_json(cyc); }), Errc::not_acyclic);
}

TEST(Reports, AdmissibilityJson) {
    auto sc = builtin_scenario("crossed");
    auto r = check_admissible(sc.code, sc.users, sc.patterns);
    auto j = io::admissibility_to_json(r);
    auto back = io::admissibility_from_json(j);
    EXPECT_EQ(back.admissible, r.admissible);
    ASSERT_EQ(back.patterns.size(), r.patterns.size());
    for (std::size_t i = 0; i < r.patterns.size(); ++i) {
        EXPECT_EQ(back.patterns[i].id, r.patterns[i].id);
        EXPECT_EQ(back.patterns[i].verdict, r.patterns[i].verdict);
        EXPECT_EQ(back.patterns[i].conditional_entropy, r.patterns[i].conditional_entropy);
    }
    EXPECT_TRUE(j["users"][0]["decodable"].get<bool>());
}

TEST(Reports, BudgetCsv) {
    auto t = build_prototype(PrototypeKind::p1);
    auto r = route_wavelength(t, "Tx1", 1540.0);
    ASSERT_TRUE(r.ok());
    auto csv = io::budget_to_csv(path_loss(t, *r.path));
    EXPECT_EQ(csv.rfind("item,kind,dB,cumulative_dB\n", 0), 0u);
    EXPECT_NE(csv.find(",10.6\n"), std::string::npos);
}

TEST(Reports, SessionJson) {
    auto sc = builtin_scenario("two_path");
    auto s = simulate_wtr_exchange(sc.code, sc.users, sc.patterns, {2}, 7);
    auto j = io::session_to_json(s);
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["delivered"][0]["values"][0], 2);
    EXPECT_EQ(j["audit"][0]["verdict"], "secure");
    EXPECT_EQ(j.dump(), io::session_to_json(simulate_wtr_exchange(sc.code, sc.users, sc.patterns, {2}, 7)).dump());
}
