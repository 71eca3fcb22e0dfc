#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "regionflow/zones.hpp"

namespace regionflow {

enum class ServiceClass : std::uint8_t { general, specialized };

/// One admission record, or a pre-aggregated bundle of identical admissions.
struct FlowRecord {
    std::string patient_zone;
    std::string hospital;
    std::int64_t count = 1;
    ServiceClass service = ServiceClass::general;
};

struct Hospital {
    std::string id;
    std::string home_zone;
    bool is_general = true;
    std::int64_t admissions = 0;
};

/// Hospitals keyed by id. Ids are unique; lookup is by binary search.
class HospitalRoster {
public:
    HospitalRoster() = default;
    /// Throws InputError("duplicate_hospital") on repeated ids.
    explicit HospitalRoster(std::vector<Hospital> hospitals);

    const Hospital* find(std::string_view id) const;
    std::span<const Hospital> hospitals() const { return hospitals_; }
    bool empty() const { return hospitals_.empty(); }
    std::size_t size() const { return hospitals_.size(); }

    /// Throws InputError("roster_zone_unknown") if a home zone is outside `zones`.
    void validate_against(const ZoneAttributes& zones) const;

private:
    std::vector<Hospital> hospitals_;
};

struct FilterPolicy {
    bool drop_missing_zone = true;
    bool require_roster_match = true;
    bool general_hospitals_only = true;
    bool in_universe_only = true;
};

/// Record and admission counts by exclusion reason. Each input record lands in
/// exactly one bucket: retained or the first exclusion reason that applies,
/// checked as unmatched hospital, missing zone, non-general, out of universe.
struct IngestStats {
    std::int64_t records_total = 0;
    std::int64_t records_retained = 0;
    std::int64_t missing_zone = 0;
    std::int64_t unmatched_hospital = 0;
    std::int64_t non_general_hospital = 0;
    std::int64_t out_of_universe = 0;
    std::int64_t admissions_total = 0;
    std::int64_t admissions_retained = 0;

    std::int64_t records_excluded() const {
        return missing_zone + unmatched_hospital + non_general_hospital + out_of_universe;
    }
    friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

using ZoneIndex = std::uint32_t;
using HospitalIndex = std::uint32_t;
inline constexpr ZoneIndex kUnknownZone = std::numeric_limits<ZoneIndex>::max();

struct FlowRow {
    ZoneIndex patient_zone = 0;
    /// kUnknownZone when the hospital was not matched against a roster.
    ZoneIndex hospital_zone = kUnknownZone;
    HospitalIndex hospital = 0;
    ServiceClass service = ServiceClass::general;
    std::int64_t count = 0;

    friend bool operator==(const FlowRow&, const FlowRow&) = default;
};

/// Directed flow entry with string ids; used to assemble tables directly.
struct FlowEntry {
    std::string patient_zone;
    std::string hospital_zone;  // empty when unknown
    std::string hospital;
    ServiceClass service = ServiceClass::general;
    std::int64_t count = 0;
};

/// Aggregated directed patient-zone -> hospital flows. Zone and hospital ids
/// are interned in sorted order; rows are unique per (patient_zone, hospital,
/// service) and sorted by that key. Immutable once built.
class FlowTable {
public:
    FlowTable() = default;
    /// Aggregates entries by (patient_zone, hospital, service). Counts must be >= 1.
    explicit FlowTable(std::span<const FlowEntry> entries, IngestStats stats = {});
    /// Canonicalizing constructor over interned ids: sorts names, drops
    /// unreferenced ones, merges duplicate keys, sorts rows.
    FlowTable(std::vector<std::string> zones, std::vector<std::string> hospitals,
              std::vector<FlowRow> rows, IngestStats stats);

    std::span<const std::string> zones() const { return zones_; }
    std::span<const std::string> hospitals() const { return hospitals_; }
    std::span<const FlowRow> rows() const { return rows_; }
    const IngestStats& stats() const { return stats_; }
    bool empty() const { return rows_.empty(); }

    const std::string& zone_name(ZoneIndex z) const { return zones_[z]; }
    const std::string& hospital_name(HospitalIndex h) const { return hospitals_[h]; }
    std::optional<ZoneIndex> find_zone(std::string_view name) const;

    std::int64_t total_count() const;
    std::vector<FlowEntry> entries() const;

private:
    std::vector<std::string> zones_;
    std::vector<std::string> hospitals_;
    std::vector<FlowRow> rows_;
    IngestStats stats_;
};

/// Streaming ingestion: feed records one at a time, then finish().
class FlowIngestor {
public:
    /// `universe` may be null, in which case in_universe_only has no effect.
    /// Throws InputError("config_error") when a roster-dependent flag is set
    /// and the roster is empty.
    FlowIngestor(const HospitalRoster& roster, FilterPolicy policy,
                 const ZoneAttributes* universe = nullptr);

    /// Throws InputError("malformed_record") naming the 0-based record index.
    void add(std::string_view patient_zone, std::string_view hospital, std::int64_t count,
             ServiceClass service);
    void add(const FlowRecord& r) { add(r.patient_zone, r.hospital, r.count, r.service); }

    std::int64_t records_seen() const { return stats_.records_total; }
    FlowTable finish() &&;

private:
    ZoneIndex intern_zone(std::string_view z);

    const HospitalRoster& roster_;
    FilterPolicy policy_;
    const ZoneAttributes* universe_;
    IngestStats stats_;
    std::unordered_map<std::string, ZoneIndex> zone_ids_;
    std::vector<std::string> zones_;
    std::unordered_map<std::string, HospitalIndex> hospital_ids_;
    std::vector<std::string> hospitals_;
    std::vector<ZoneIndex> hospital_zone_;
    std::unordered_map<std::uint64_t, std::int64_t> cells_;
};

FlowTable ingest_flows(std::span<const FlowRecord> records, const HospitalRoster& roster,
                       const FilterPolicy& policy, const ZoneAttributes* universe = nullptr);

/// Keeps only specialized-care rows (cardiovascular surgery / neurosurgery flag).
FlowTable filter_specialized(const FlowTable& table);

char service_code(ServiceClass s);
std::optional<ServiceClass> parse_service_code(std::string_view s);

}  // namespace regionflow
