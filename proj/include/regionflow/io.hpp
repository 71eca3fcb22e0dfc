#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "regionflow/flow_ingest.hpp"
#include "regionflow/geometry.hpp"
#include "regionflow/louvain.hpp"
#include "regionflow/partition.hpp"
#include "regionflow/region_metrics.hpp"
#include "regionflow/scale_selector.hpp"
#include "regionflow/synth.hpp"
#include "regionflow/zones.hpp"

namespace regionflow::io {

using nlohmann::json;

// -- readers -----------------------------------------------------------------

/// Streams `patient_zone,hospital_id,count,service_class` rows through a
/// FlowIngestor. Malformed rows raise InputError("malformed_record") with the
/// record index and line number.
FlowTable read_flows_csv(const std::string& path, const HospitalRoster& roster,
                         const FilterPolicy& policy, const ZoneAttributes* universe = nullptr);
/// Reads raw records without filtering (used by tests and bindings).
std::vector<FlowRecord> read_flow_records_csv(const std::string& path);

/// `hospital_id,home_zone,is_general,admissions`
HospitalRoster read_roster_csv(const std::string& path);
/// `zone_id,population[,centroid_x,centroid_y]`
ZoneAttributes read_attributes_csv(const std::string& path);
/// `zone_a,zone_b`, one undirected pair per row.
AdjacencyMap read_adjacency_csv(const std::string& path);
/// GeoJSON FeatureCollection of Polygon / MultiPolygon features carrying a
/// `zone_id` property.
std::vector<ZoneGeometry> read_geojson(const std::string& path);
std::vector<ZoneGeometry> parse_geojson(const json& doc);
/// `zone_id,region_id`
ZonePartition read_partition_csv(const std::string& path);

struct LoadedDendrogram {
    std::vector<std::string> zones;
    std::vector<ZonePartition> levels;
};
LoadedDendrogram read_dendrogram_json(const std::string& path);

// -- writers -----------------------------------------------------------------

/// Shortest round-trip decimal; "NA" for NaN, "inf"/"-inf" for infinities.
std::string format_double(double v);

std::string partition_csv(const ZonePartition& p);
json stats_json(const IngestStats& s);
json dendrogram_json(const Dendrogram& d);
std::string curve_csv(const ModularityCurve& c);
json curve_json(const ModularityCurve& c);
json report_json(const RegionReport& r);
std::string report_csv(const RegionReport& r);
/// Side-by-side summary table: one row per (index, statistic), one column per report.
std::string comparison_csv(const std::vector<std::string>& names, const std::vector<RegionReport>& reports);
json comparison_json(const std::vector<std::string>& names, const std::vector<RegionReport>& reports);

std::string flows_csv(const std::vector<FlowRecord>& flows);
std::string roster_csv(const HospitalRoster& roster);
std::string attributes_csv(const ZoneAttributes& attrs);
std::string adjacency_csv(const std::vector<std::pair<std::string, std::string>>& pairs);
json geojson(const std::vector<ZoneGeometry>& geoms);

/// Writes text exactly as given (binary mode, no newline translation).
void write_file(const std::filesystem::path& path, const std::string& content);
/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const json& doc);

}  // namespace regionflow::io
