#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "regionflow/error.hpp"
#include "regionflow/scale_selector.hpp"
#include "regionflow/synth.hpp"

using namespace regionflow;

TEST_CASE("cut_at_level") {
    auto net = fixtures::network(8, fixtures::two_k4());
    auto d = run_louvain(net);
    CHECK(cut_at_level(d, d.level_count() - 1).community_count() == 2);
    CHECK(cut_at_level(d, 0) == d.levels[0].zone_partition);
    CHECK_THROWS_AS(cut_at_level(d, 99), InputError);
}

TEST_CASE("cut_to_k reference values") {
    auto net = fixtures::network(6, fixtures::two_triangles());
    auto d = run_louvain(net);

    auto all = cut_to_k(net, d, 6);
    CHECK(all.partition == Partition::singletons(6));
    CHECK(all.modularity == doctest::Approx(oracle::direct_modularity(6, fixtures::two_triangles(), {0, 1, 2, 3, 4, 5})));

    auto one = cut_to_k(net, d, 1);
    CHECK(one.partition.community_count() == 1);
    CHECK(one.modularity == doctest::Approx(0.0).epsilon(1e-15));

    auto two = cut_to_k(net, d, 2);
    CHECK(fixtures::labels_of(two.partition) == std::vector<int>{0, 0, 0, 1, 1, 1});
    CHECK(two.modularity == doctest::Approx(5.0 / 14.0).epsilon(1e-14));

    CHECK_THROWS_AS(cut_to_k(net, d, 0), InputError);
    CHECK_THROWS_AS(cut_to_k(net, d, 7), InputError);
}

TEST_CASE("cut_to_k from singletons when no level is fine enough") {
    auto net = fixtures::network(8, fixtures::two_k4());
    auto d = run_louvain(net);
    auto c = cut_to_k(net, d, 5);
    CHECK(c.partition.community_count() == 5);
    CHECK(c.provenance == CutProvenance::greedy_merge);
    // Merges stay inside the cliques: no community spans both.
    for (int i = 0; i < 4; ++i)
        for (int j = 4; j < 8; ++j) CHECK(c.partition[i] != c.partition[j]);
}

TEST_CASE("modularity_curve") {
    SUBCASE("K4+K4 peaks at 2 and agrees with enumeration") {
        auto edges = fixtures::two_k4();
        auto net = fixtures::network(8, edges);
        auto d = run_louvain(net);
        auto curve = modularity_curve(net, d, 1, 8);
        CHECK(curve.points.size() == 8);
        CHECK(curve.best_k == 2);
        CHECK(curve.best_modularity == doctest::Approx(oracle::exhaustive_optimum(8, edges).q));
    }
    SUBCASE("single point at n") {
        auto net = fixtures::network(6, fixtures::two_triangles());
        auto curve = modularity_curve(net, run_louvain(net), 6, 6);
        REQUIRE(curve.points.size() == 1);
        CHECK(curve.points[0].modularity == doctest::Approx(modularity(net, Partition::singletons(6))));
    }
    SUBCASE("bad range") {
        auto net = fixtures::network(6, fixtures::two_triangles());
        auto d = run_louvain(net);
        CHECK_THROWS_AS(modularity_curve(net, d, 3, 2), InputError);
        CHECK_THROWS_AS(modularity_curve(net, d, 0, 2), InputError);
        CHECK_THROWS_AS(modularity_curve(net, d, 1, 7), InputError);
    }
}

TEST_CASE("curve agrees with cut_to_k pointwise (property)") {
    std::mt19937_64 gen(21);
    for (int t = 0; t < 20; ++t) {
        const int n = 4 + static_cast<int>(gen() % 25);
        auto edges = oracle::random_graph(n, 0.2, 6, gen);
        auto net = fixtures::network(n, edges);
        auto d = run_louvain(net);
        auto curve = modularity_curve(net, d, 1, std::size_t(n));
        for (const auto& pt : curve.points) {
            auto c = cut_to_k(net, d, pt.k);
            CHECK(c.partition.community_count() == pt.k);
            CHECK(c.modularity == doctest::Approx(pt.modularity).epsilon(1e-12));
            CHECK(std::abs(c.modularity - oracle::direct_modularity(n, edges, fixtures::labels_of(c.partition))) <=
                  1e-12);
        }
    }
}

TEST_CASE("planted five-region instance peaks at five") {
    PlantedSpec spec;
    spec.regions = 5;
    spec.zones_per_region = 10;
    spec.leakage = 0.05;
    spec.seed = 3;
    auto data = generate_planted(spec);
    auto table = ingest_flows(data.flows, data.roster, FilterPolicy{}, &data.attributes);
    auto net = build_network(table, data.roster);
    auto d = run_louvain(net);
    auto curve = modularity_curve(net, d, 1, 12);
    CHECK(curve.best_k == 5);
}
