#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "regionflow/error.hpp"
#include "regionflow/flow_ingest.hpp"
#include "regionflow/io.hpp"
#include "regionflow/network.hpp"

using namespace regionflow;

namespace {

HospitalRoster roster_abc() {
    return HospitalRoster({{"HA", "a", true, 0}, {"HB", "b", true, 0}, {"HC", "c", true, 0},
                           {"HX", "c", false, 0}});
}

FilterPolicy permissive() { return {false, false, false, false}; }

}  // namespace

TEST_CASE("ingest drops records with an empty patient zone") {
    std::vector<FlowRecord> recs{{"a", "HA", 1, ServiceClass::general},
                                 {"", "HA", 1, ServiceClass::general},
                                 {"b", "HA", 2, ServiceClass::general},
                                 {"c", "HB", 1, ServiceClass::specialized},
                                 {"a", "HC", 5, ServiceClass::general}};
    auto t = ingest_flows(recs, roster_abc(), FilterPolicy{});
    CHECK(t.rows().size() == 4);
    CHECK(t.stats().missing_zone == 1);
    CHECK(t.stats().records_total == 5);
    CHECK(t.stats().records_retained == 4);
    CHECK(t.stats().admissions_retained == 9);
}

TEST_CASE("empty stream gives an empty table with zero stats") {
    auto t = ingest_flows({}, roster_abc(), FilterPolicy{});
    CHECK(t.empty());
    CHECK(t.stats() == IngestStats{});
}

TEST_CASE("rows aggregate per (patient zone, hospital, service)") {
    std::vector<FlowRecord> recs{{"a", "HB", 1, ServiceClass::general},
                                 {"a", "HB", 1, ServiceClass::general},
                                 {"a", "HB", 3, ServiceClass::specialized}};
    auto t = ingest_flows(recs, roster_abc(), FilterPolicy{});
    REQUIRE(t.rows().size() == 2);
    CHECK(t.rows()[0].count == 2);
    CHECK(t.rows()[1].count == 3);
    CHECK(t.zone_name(t.rows()[0].hospital_zone) == "b");
}

TEST_CASE("exclusion buckets") {
    ZoneAttributes universe{{"a", {}}, {"b", {}}, {"c", {}}};
    std::vector<FlowRecord> recs{{"a", "HZ", 1, ServiceClass::general},   // unmatched
                                 {"a", "HX", 2, ServiceClass::general},   // non-general
                                 {"q", "HA", 3, ServiceClass::general},   // out of universe
                                 {"b", "HA", 4, ServiceClass::general}};  // kept
    auto t = ingest_flows(recs, roster_abc(), FilterPolicy{}, &universe);
    CHECK(t.stats().unmatched_hospital == 1);
    CHECK(t.stats().non_general_hospital == 1);
    CHECK(t.stats().out_of_universe == 1);
    CHECK(t.stats().records_retained == 1);
    CHECK(t.total_count() == 4);

    SUBCASE("without a universe the universe filter is inert") {
        auto u = ingest_flows(recs, roster_abc(), FilterPolicy{});
        CHECK(u.stats().out_of_universe == 0);
        CHECK(u.stats().records_retained == 2);
    }
    SUBCASE("permissive policy keeps unmatched hospitals with unknown zone") {
        auto u = ingest_flows(recs, roster_abc(), permissive(), &universe);
        CHECK(u.stats().records_retained == 4);
        auto hz = std::count_if(u.rows().begin(), u.rows().end(),
                                [](const FlowRow& r) { return r.hospital_zone == kUnknownZone; });
        CHECK(hz == 1);
    }
}

TEST_CASE("ingest errors") {
    SUBCASE("non-positive count names the record index") {
        std::vector<FlowRecord> recs{{"a", "HA", 1, ServiceClass::general}, {"a", "HA", 0, ServiceClass::general}};
        try {
            ingest_flows(recs, roster_abc(), FilterPolicy{});
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(e.code() == "malformed_record");
            CHECK(std::string(e.what()).find("record 1") != std::string::npos);
        }
    }
    SUBCASE("roster-dependent flag with an empty roster") {
        CHECK_THROWS_AS(FlowIngestor(HospitalRoster{}, FilterPolicy{}), InputError);
        CHECK_NOTHROW(FlowIngestor(HospitalRoster{}, permissive()));
    }
    SUBCASE("duplicate roster ids") {
        CHECK_THROWS_AS(HospitalRoster({{"H", "a", true, 0}, {"H", "b", true, 0}}), InputError);
    }
}

TEST_CASE("stats partition every input record (property)") {
    std::mt19937_64 gen(11);
    ZoneAttributes universe{{"a", {}}, {"b", {}}, {"c", {}}};
    const char* zones[] = {"a", "b", "c", "d", ""};
    const char* hospitals[] = {"HA", "HB", "HC", "HX", "HZ"};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<FlowRecord> recs;
        const int n = static_cast<int>(gen() % 60);
        std::int64_t admissions = 0;
        for (int i = 0; i < n; ++i) {
            FlowRecord r{zones[gen() % 5], hospitals[gen() % 5], static_cast<std::int64_t>(1 + gen() % 9),
                         gen() % 2 ? ServiceClass::general : ServiceClass::specialized};
            admissions += r.count;
            recs.push_back(r);
        }
        auto t = ingest_flows(recs, roster_abc(), FilterPolicy{}, &universe);
        const auto& s = t.stats();
        CHECK(s.records_total == n);
        CHECK(s.records_retained + s.records_excluded() == s.records_total);
        CHECK(s.admissions_total == admissions);
        CHECK(t.total_count() == s.admissions_retained);
    }
}

TEST_CASE("filter_specialized") {
    std::vector<FlowEntry> entries{{"a", "a", "HA", ServiceClass::specialized, 1},
                                   {"a", "b", "HB", ServiceClass::specialized, 2},
                                   {"b", "b", "HB", ServiceClass::specialized, 3},
                                   {"b", "a", "HA", ServiceClass::general, 4},
                                   {"c", "a", "HA", ServiceClass::general, 5}};
    FlowTable table(entries);
    auto s = filter_specialized(table);
    CHECK(s.rows().size() == 3);
    CHECK(s.total_count() == 6);

    std::vector<FlowEntry> general_only{{"a", "a", "HA", ServiceClass::general, 1}};
    CHECK(filter_specialized(FlowTable(general_only)).empty());
}

TEST_CASE("filter_specialized per-hospital totals equal a linear recount") {
    std::mt19937_64 gen(5);
    std::vector<FlowRecord> recs;
    const char* hospitals[] = {"HA", "HB", "HC"};
    const char* zones[] = {"a", "b", "c"};
    for (int i = 0; i < 500; ++i)
        recs.push_back({zones[gen() % 3], hospitals[gen() % 3], static_cast<std::int64_t>(1 + gen() % 4),
                        gen() % 3 == 0 ? ServiceClass::specialized : ServiceClass::general});
    auto table = filter_specialized(ingest_flows(recs, roster_abc(), FilterPolicy{}));

    std::map<std::string, std::int64_t> recount;
    for (const auto& r : recs)
        if (r.service == ServiceClass::specialized) recount[r.hospital] += r.count;
    std::map<std::string, std::int64_t> got;
    for (const auto& row : table.rows()) got[table.hospital_name(row.hospital)] += row.count;
    CHECK(got == recount);
}

TEST_CASE("build_network symmetrizes flows onto hospital home zones") {
    SUBCASE("opposite flows add up") {
        FlowTable t(std::vector<FlowEntry>{{"a", "b", "HB", ServiceClass::general, 3},
                                           {"b", "a", "HA", ServiceClass::general, 2}});
        auto net = build_network(t, roster_abc());
        auto a = *net.find("a"), b = *net.find("b");
        CHECK(net.weight(a, b) == 5.0);
        CHECK(net.degree(a) == 5.0);
        CHECK(net.degree(b) == 5.0);
        CHECK(net.total_weight() == 5.0);
    }
    SUBCASE("same-zone flow is a self-loop counted twice in the degree") {
        FlowTable t(std::vector<FlowEntry>{{"a", "a", "HA", ServiceClass::general, 4}});
        auto net = build_network(t, roster_abc());
        CHECK(net.self_loop(0) == 4.0);
        CHECK(net.degree(0) == 8.0);
        CHECK(net.total_weight() == 4.0);
    }
    SUBCASE("missing roster hospital is named") {
        FlowTable t(std::vector<FlowEntry>{{"a", "", "HQ", ServiceClass::general, 1}});
        try {
            build_network(t, roster_abc());
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(e.code() == "hospital_not_in_roster");
            CHECK(std::string(e.what()).find("HQ") != std::string::npos);
        }
    }
}

TEST_CASE("build_network matches a per-pair hand aggregation") {
    // 3 zones, 5 rows; HC lives in c.
    std::vector<FlowEntry> rows{{"a", "b", "HB", ServiceClass::general, 3},
                                {"b", "a", "HA", ServiceClass::general, 2},
                                {"c", "c", "HC", ServiceClass::general, 7},
                                {"a", "c", "HC", ServiceClass::specialized, 1},
                                {"c", "a", "HA", ServiceClass::general, 6}};
    FlowTable t(rows);
    auto net = build_network(t, roster_abc());

    std::map<std::pair<std::string, std::string>, double> oracle;
    for (const auto& r : rows) {
        auto key = std::minmax(r.patient_zone, r.hospital_zone);
        oracle[{key.first, key.second}] += double(r.count);
    }
    for (const auto& [pair, w] : oracle) CHECK(net.weight(*net.find(pair.first), *net.find(pair.second)) == w);
    CHECK(net.edges().size() == oracle.size());
    CHECK(net.total_weight() == 19.0);
}

TEST_CASE("network invariants on random tables (property)") {
    std::mt19937_64 gen(3);
    HospitalRoster roster({{"H0", "z0", true, 0}, {"H1", "z3", true, 0}, {"H2", "z5", true, 0}});
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<FlowRecord> recs;
        for (int i = 0; i < 40; ++i)
            recs.push_back({"z" + std::to_string(gen() % 7), "H" + std::to_string(gen() % 3),
                            static_cast<std::int64_t>(1 + gen() % 10), ServiceClass::general});
        auto table = ingest_flows(recs, roster, FilterPolicy{});
        auto net = build_network(table, roster);
        double sum_k = 0.0;
        for (NodeIndex i = 0; i < net.size(); ++i) sum_k += net.degree(i);
        CHECK(sum_k == 2.0 * net.total_weight());
        CHECK(net.total_weight() == double(table.total_count()));

        std::shuffle(recs.begin(), recs.end(), gen);
        auto net2 = build_network(ingest_flows(recs, roster, FilterPolicy{}), roster);
        REQUIRE(net2.size() == net.size());
        auto e1 = net.edges(), e2 = net2.edges();
        REQUIRE(e1.size() == e2.size());
        for (std::size_t i = 0; i < e1.size(); ++i) {
            CHECK(e1[i].u == e2[i].u);
            CHECK(e1[i].v == e2[i].v);
            CHECK(e1[i].weight == e2[i].weight);
        }
    }
}

TEST_CASE("flow CSV parsing") {
    auto dir = std::filesystem::temp_directory_path() / "regionflow_ingest_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "flows.csv").string();
    {
        std::ofstream out(path);
        out << "patient_zone,hospital_id,count,service_class\n"
               "a,HA,2,G\n"
               "b,HB,1,S\n"
               ",HA,4,G\n";
    }
    auto t = io::read_flows_csv(path, roster_abc(), FilterPolicy{});
    CHECK(t.rows().size() == 2);
    CHECK(t.stats().missing_zone == 1);

    {
        std::ofstream out(path);
        out << "patient_zone,hospital_id,count,service_class\na,HA,2,G\nb,HB,1,X\n";
    }
    try {
        io::read_flows_csv(path, roster_abc(), FilterPolicy{});
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(e.code() == "malformed_record");
        CHECK(std::string(e.what()).find("record 1") != std::string::npos);
    }

    {
        std::ofstream out(path);
        out << "patient_zone,hospital,count,service_class\n";
    }
    CHECK_THROWS_AS(io::read_flows_csv(path, roster_abc(), FilterPolicy{}), InputError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("an unmatched hospital takes precedence over a missing zone") {
    std::vector<FlowRecord> recs{{"", "HZ", 1, ServiceClass::general}};
    auto t = ingest_flows(recs, roster_abc(), FilterPolicy{});
    CHECK(t.stats().unmatched_hospital == 1);
    CHECK(t.stats().missing_zone == 0);
}
