#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "regionflow/flow_ingest.hpp"
#include "regionflow/geometry.hpp"
#include "regionflow/partition.hpp"
#include "regionflow/zones.hpp"

namespace regionflow {

/// Planted-region flow generator parameters.
struct PlantedSpec {
    std::size_t regions = 5;
    std::size_t zones_per_region = 10;
    double mean_flow = 40.0;  // Poisson mean admissions per zone
    double leakage = 0.1;     // probability an admission leaves its region
    std::size_t hospitals_per_region = 1;
    std::uint64_t seed = 0;

    /// Throws InputError("invalid_spec").
    void validate() const;
};

struct PlantedData {
    std::vector<FlowRecord> flows;  // aggregated per (zone, hospital), sorted
    HospitalRoster roster;
    ZoneAttributes attributes;
    ZonePartition truth;
    /// Region r is row r of unit squares; zone j of the region is column j.
    std::vector<ZoneGeometry> geometry;
    std::vector<std::pair<std::string, std::string>> adjacency;
};

/// Each zone draws Poisson(mean_flow) admissions; each one goes to a uniform
/// hospital of the zone's own region with probability 1 - leakage, otherwise to
/// a uniform hospital of a uniformly chosen other region. Fully determined by
/// the seed.
PlantedData generate_planted(const PlantedSpec& spec);

}  // namespace regionflow
