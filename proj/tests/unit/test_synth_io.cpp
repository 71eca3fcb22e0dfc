#include "doctest.h"

#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "regionflow/error.hpp"
#include "regionflow/io.hpp"
#include "regionflow/partition_compare.hpp"
#include "regionflow/synth.hpp"

using namespace regionflow;

namespace {

/// Pair-counting ARI straight from the definition, O(n^2).
double ari_oracle(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    std::map<std::pair<int, int>, double> nij;
    std::map<int, double> ai, bj;
    for (std::size_t i = 0; i < n; ++i) {
        nij[{a[i], b[i]}] += 1;
        ai[a[i]] += 1;
        bj[b[i]] += 1;
    }
    auto c2 = [](double x) { return x * (x - 1) / 2; };
    double sum_ij = 0, sum_a = 0, sum_b = 0;
    for (const auto& [k, v] : nij) sum_ij += c2(v);
    for (const auto& [k, v] : ai) sum_a += c2(v);
    for (const auto& [k, v] : bj) sum_b += c2(v);
    const double expected = sum_a * sum_b / c2(double(n));
    const double max_index = (sum_a + sum_b) / 2;
    return (sum_ij - expected) / (max_index - expected);
}

}  // namespace

TEST_CASE("adjusted rand index") {
    std::vector<int> a{0, 0, 1, 1}, b{5, 5, 2, 2};
    CHECK(adjusted_rand_index(a, b) == 1.0);
    std::vector<int> all(5, 0);
    CHECK(adjusted_rand_index(all, all) == 1.0);

    std::mt19937_64 gen(41);
    for (int t = 0; t < 100; ++t) {
        const int n = 3 + static_cast<int>(gen() % 40);
        std::vector<int> x(n), y(n);
        for (auto& v : x) v = static_cast<int>(gen() % 4);
        for (auto& v : y) v = static_cast<int>(gen() % 5);
        const double oracle = ari_oracle(x, y);
        if (std::isfinite(oracle)) CHECK(adjusted_rand_index(x, y) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("planted generator") {
    PlantedSpec spec;
    spec.seed = 9;
    auto a = generate_planted(spec), b = generate_planted(spec);
    REQUIRE(a.flows.size() == b.flows.size());
    for (std::size_t i = 0; i < a.flows.size(); ++i) {
        CHECK(a.flows[i].patient_zone == b.flows[i].patient_zone);
        CHECK(a.flows[i].hospital == b.flows[i].hospital);
        CHECK(a.flows[i].count == b.flows[i].count);
    }
    CHECK(a.truth.size() == spec.regions * spec.zones_per_region);
    CHECK(region_count(a.truth) == spec.regions);
    CHECK(a.roster.size() == spec.regions * spec.hospitals_per_region);

    spec.seed = 10;
    auto c = generate_planted(spec);
    bool differs = c.flows.size() != a.flows.size();
    for (std::size_t i = 0; !differs && i < a.flows.size(); ++i) differs = a.flows[i].count != c.flows[i].count;
    CHECK(differs);

    PlantedSpec bad;
    bad.leakage = 1.5;
    CHECK_THROWS_AS(generate_planted(bad), InputError);
}

TEST_CASE("file round trips") {
    auto dir = std::filesystem::temp_directory_path() / "regionflow_io_test";
    std::filesystem::create_directories(dir);

    PlantedSpec spec;
    spec.regions = 3;
    spec.zones_per_region = 4;
    spec.seed = 1;
    auto data = generate_planted(spec);

    auto part = (dir / "p.csv").string();
    io::write_file(part, io::partition_csv(data.truth));
    CHECK(io::read_partition_csv(part) == data.truth);

    auto roster = (dir / "r.csv").string();
    io::write_file(roster, io::roster_csv(data.roster));
    CHECK(io::read_roster_csv(roster).size() == data.roster.size());

    auto geo = (dir / "g.geojson").string();
    io::write_json(geo, io::geojson(data.geometry));
    auto geoms = io::read_geojson(geo);
    REQUIRE(geoms.size() == data.geometry.size());
    CHECK(geoms[0].zone_id == data.geometry[0].zone_id);

    auto table = ingest_flows(data.flows, data.roster, FilterPolicy{});
    auto net = build_network(table, data.roster);
    auto d = run_louvain(net);
    auto dj = (dir / "d.json").string();
    io::write_json(dj, io::dendrogram_json(d));
    auto loaded = io::read_dendrogram_json(dj);
    CHECK(loaded.zones == d.zones);
    REQUIRE(loaded.levels.size() == d.level_count());
    for (std::size_t l = 0; l < loaded.levels.size(); ++l) CHECK(loaded.levels[l] == to_zone_partition(net, d.levels[l].zone_partition));

    CHECK_THROWS_AS(io::parse_geojson(io::json::parse("{\"type\":\"FeatureCollection\"}")), InputError);
    CHECK_THROWS_AS(io::read_partition_csv((dir / "missing.csv").string()), InputError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "NA");
}
