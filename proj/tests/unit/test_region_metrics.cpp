#include "doctest.h"

#include <cmath>
#include <random>

#include "regionflow/error.hpp"
#include "regionflow/region_metrics.hpp"
#include "regionflow/synth.hpp"

using namespace regionflow;

namespace {

FlowEntry flow(std::string from, std::string to, std::int64_t n) {
    return {std::move(from), to, "H" + to, ServiceClass::general, n};
}

}  // namespace

TEST_CASE("flow indices") {
    SUBCASE("localization 80 of 100") {
        FlowTable t(std::vector<FlowEntry>{flow("a", "a", 80), flow("a", "b", 20)});
        auto li = localization_index(t, {{"a", 0}, {"b", 1}});
        CHECK(li.at(0).value == doctest::Approx(0.8));
        CHECK(li.at(1).status == ValueStatus::undefined);
    }
    SUBCASE("all internal") {
        FlowTable t(std::vector<FlowEntry>{flow("a", "a", 5), flow("b", "b", 2)});
        ZonePartition p{{"a", 0}, {"b", 1}};
        for (const auto& [r, v] : localization_index(t, p)) CHECK(v.value == 1.0);
        for (const auto& [r, v] : market_share_index(t, p)) CHECK(v.value == 0.0);
        for (const auto& [r, v] : net_patient_flow(t, p)) CHECK(v.status == ValueStatus::undefined);
    }
    SUBCASE("market share 25 of 100") {
        FlowTable t(std::vector<FlowEntry>{flow("a", "a", 75), flow("b", "a", 25)});
        CHECK(market_share_index(t, {{"a", 0}, {"b", 1}}).at(0).value == doctest::Approx(0.25));
    }
    SUBCASE("net patient flow") {
        FlowTable t(std::vector<FlowEntry>{flow("b", "a", 30), flow("a", "b", 20)});
        auto npf = net_patient_flow(t, {{"a", 0}, {"b", 1}});
        CHECK(npf.at(0).value == doctest::Approx(1.5));
        FlowTable even(std::vector<FlowEntry>{flow("b", "a", 4), flow("a", "b", 4)});
        CHECK(net_patient_flow(even, {{"a", 0}, {"b", 1}}).at(0).value == 1.0);
        FlowTable one_way(std::vector<FlowEntry>{flow("b", "a", 4)});
        CHECK(net_patient_flow(one_way, {{"a", 0}, {"b", 1}}).at(0).status == ValueStatus::infinite);
    }
    SUBCASE("uncovered zone is named") {
        FlowTable t(std::vector<FlowEntry>{flow("a", "b", 1)});
        try {
            localization_index(t, {{"a", 0}});
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(e.code() == "coverage_mismatch");
            CHECK(std::string(e.what()).find("b") != std::string::npos);
        }
    }
}

TEST_CASE("herfindahl") {
    HospitalRoster roster({{"Ha", "a", true, 0}, {"Hb", "b", true, 0}});
    FlowTable single(std::vector<FlowEntry>{flow("a", "a", 7)});
    CHECK(herfindahl(single, roster, {{"a", 0}}).at(0).hhi.value == 10000.0);
    FlowTable two(std::vector<FlowEntry>{flow("a", "a", 5), flow("a", "b", 5)});
    auto h = herfindahl(two, roster, {{"a", 0}, {"b", 0}});
    CHECK(h.at(0).hhi.value == 5000.0);
    CHECK(h.at(0).band == MarketConcentration::highly_concentrated);

    CHECK(classify_hhi(2500.01) == MarketConcentration::highly_concentrated);
    CHECK(classify_hhi(2500.0) == MarketConcentration::moderately_concentrated);
    CHECK(classify_hhi(1500.0) == MarketConcentration::moderately_concentrated);
    CHECK(classify_hhi(1499.9) == MarketConcentration::unconcentrated);
    CHECK(classify_hhi(100.0) == MarketConcentration::unconcentrated);
    CHECK(classify_hhi(99.9) == MarketConcentration::highly_competitive);

    // n equal hospitals: 10^4 / n.
    std::vector<FlowEntry> entries;
    std::vector<Hospital> hs;
    ZonePartition p;
    for (int i = 0; i < 8; ++i) {
        std::string z = "z" + std::to_string(i);
        entries.push_back(flow("z0", z, 3));
        hs.push_back({"H" + z, z, true, 0});
        p[z] = 0;
    }
    CHECK(herfindahl(FlowTable(entries), HospitalRoster(hs), p).at(0).hhi.value == doctest::Approx(1250.0));
}

TEST_CASE("size balance and summaries") {
    HospitalRoster roster({{"Ha", "a", true, 0}, {"Hc", "c", true, 0}, {"Hd", "d", true, 0}, {"He", "e", true, 0}});
    FlowTable t(std::vector<FlowEntry>{flow("a", "a", 1), flow("d", "d", 1)});
    ZonePartition p{{"a", 0}, {"b", 0}, {"c", 0}, {"d", 1}, {"e", 1}, {"f", 1}};
    auto s = size_balance(p, nullptr, roster, t);
    std::vector<double> zones, hospitals;
    for (const auto& [r, c] : s) {
        zones.push_back(double(c.zone_count));
        hospitals.push_back(double(c.hospital_count));
    }
    CHECK(summarize(zones).sd == 0.0);
    auto hstats = summarize(hospitals);
    CHECK(hstats.mean == 2.0);
    CHECK(hstats.sd == 0.0);  // {2, 2}

    std::vector<double> v{1, 3};
    CHECK(summarize(v).sd == 1.0);

    ZoneAttributes attrs{{"a", {10, {}}}};
    CHECK_THROWS_AS(size_balance(p, &attrs, roster, t), InputError);
}

TEST_CASE("hospital counts {1,3}") {
    HospitalRoster roster({{"H1", "a", true, 0}, {"H2", "b", true, 0}, {"H3", "b", true, 0}, {"H4", "b", true, 0}});
    FlowTable t(std::vector<FlowEntry>{flow("a", "a", 1)});
    auto s = size_balance({{"a", 0}, {"b", 1}}, nullptr, roster, t);
    CHECK(s.at(0).hospital_count == 1);
    CHECK(s.at(1).hospital_count == 3);
    std::vector<double> v{1, 3};
    CHECK(summarize(v).mean == 2.0);
}

TEST_CASE("evaluate") {
    SUBCASE("zero-leakage planted instance") {
        PlantedSpec spec;
        spec.leakage = 0.0;
        spec.seed = 2;
        auto d = generate_planted(spec);
        auto t = ingest_flows(d.flows, d.roster, FilterPolicy{}, &d.attributes);
        auto r = evaluate(t, d.truth, d.roster, d.geometry, &d.attributes);
        for (const auto& row : r.regions) {
            CHECK(row.li.value == 1.0);
            CHECK(row.msi.value == 0.0);
            CHECK(row.npf.status == ValueStatus::undefined);
            REQUIRE(row.pac.has_value());
        }
        CHECK_FALSE(r.pac_skipped);
        CHECK(r.global_localization == 1.0);
    }
    SUBCASE("single zone") {
        HospitalRoster roster({{"Ha", "a", true, 0}, {"Hb", "a", true, 0}});
        FlowTable t(std::vector<FlowEntry>{{"a", "a", "Ha", ServiceClass::general, 3},
                                           {"a", "a", "Hb", ServiceClass::general, 1}});
        auto r = evaluate(t, {{"a", 0}}, roster);
        REQUIRE(r.regions.size() == 1);
        CHECK(r.regions[0].hhi.hhi.value == doctest::Approx(1e4 * (9.0 + 1.0) / 16.0));
        CHECK(r.pac_skipped);
        CHECK_FALSE(r.regions[0].pac.has_value());
        CHECK(r.summary.count("PAC") == 0);
    }
}

TEST_CASE("evaluate matches a direct recount (property)") {
    std::mt19937_64 gen(31);
    for (int t = 0; t < 30; ++t) {
        std::vector<FlowEntry> entries;
        std::vector<Hospital> hs;
        ZonePartition p;
        for (int z = 0; z < 10; ++z) {
            p["z" + std::to_string(z)] = static_cast<int>(gen() % 3);
            if (z % 3 == 0) hs.push_back({"Hz" + std::to_string(z), "z" + std::to_string(z), true, 0});
        }
        for (int i = 0; i < 30; ++i) {
            const auto& h = hs[gen() % hs.size()];
            entries.push_back({"z" + std::to_string(gen() % 10), h.home_zone, h.id, ServiceClass::general,
                               static_cast<std::int64_t>(1 + gen() % 20)});
        }
        FlowTable table(entries);
        HospitalRoster roster(hs);
        auto report = evaluate(table, p, roster);

        for (const auto& row : report.regions) {
            const int r = row.region;
            double in = 0, out = 0, internal = 0;
            std::map<std::string, double> per_hospital;
            for (const auto& e : entries) {
                const bool from = p.at(e.patient_zone) == r, to = p.at(e.hospital_zone) == r;
                if (from && to) internal += double(e.count);
                if (from && !to) out += double(e.count);
                if (!from && to) in += double(e.count);
                if (to) per_hospital[e.hospital] += double(e.count);
            }
            if (internal + out > 0) CHECK(row.li.value == doctest::Approx(internal / (internal + out)));
            if (internal + in > 0) CHECK(row.msi.value == doctest::Approx(in / (internal + in)));
            if (out > 0) CHECK(row.npf.value == doctest::Approx(in / out));
            if (!per_hospital.empty()) {
                double total = 0, sq = 0;
                for (const auto& [h, a] : per_hospital) total += a;
                for (const auto& [h, a] : per_hospital) sq += (a / total) * (a / total);
                CHECK(row.hhi.hhi.value == doctest::Approx(1e4 * sq));
            }
        }
    }
}
