#pragma once

#include <map>
#include <string>
#include <vector>

#include "regionflow/flow_ingest.hpp"
#include "regionflow/partition.hpp"
#include "regionflow/zones.hpp"

namespace regionflow {

/// Plurality-rule assignment of zones to hospital home zones.
struct PluralityResult {
    ZonePartition assignment;
    /// Region label -> hospital home zone that seeds it.
    std::map<int, std::string> seeds;
    /// Zones whose maximal flow was shared by several hospital zones.
    std::vector<std::string> tied_zones;
    /// Zones without any flow, placed by nearest hospital-zone centroid.
    std::vector<std::string> no_flow_zones;
};

/// Assigns each zone to the hospital home zone receiving its largest total
/// flow (ties: smaller zone id, flagged). The zone universe is `zones` when
/// given, otherwise every zone referenced by the table. Zones with no flow go
/// to the hospital home zone with the nearest centroid and are flagged.
/// Regions are labelled densely in seed-zone order.
/// Throws InputError("empty_input") for an empty table and
/// InputError("missing_centroid") listing zero-flow zones that cannot be placed.
PluralityResult plurality_assign(const FlowTable& table, const HospitalRoster& roster,
                                 const ZoneAttributes* zones = nullptr);

struct EnclaveMove {
    std::string zone;
    int from = 0;
    int to = 0;
};

struct ContiguityResult {
    ZonePartition assignment;
    /// Zones with no neighbours; left in place and exempt from connectivity.
    std::vector<std::string> islands;
    /// Enclave zones that could not reach any other region's main component.
    std::vector<std::string> stranded;
    std::vector<EnclaveMove> moves;
    std::size_t passes = 0;
};

/// Repairs region contiguity. Each region keeps its largest connected
/// component (ties: more internal flow, then smallest zone id); other zones are
/// enclaves and move to the adjacent region whose main component receives the
/// largest share of the zone's flows (ties: smallest label). Repeats until no
/// enclave can move.
ContiguityResult enforce_contiguity(const ZonePartition& p, const AdjacencyMap& adj,
                                    const FlowTable& table);

/// Connected components of one region in the adjacency graph, islands excluded.
std::vector<std::vector<std::string>> region_components(const ZonePartition& p,
                                                        const AdjacencyMap& adj, int region);

}  // namespace regionflow
