#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regionflow/flow_ingest.hpp"
#include "regionflow/geometry.hpp"
#include "regionflow/partition.hpp"

namespace regionflow {

enum class ValueStatus { defined, undefined, infinite };

/// A per-region ratio. Zero denominators are flagged rather than reported as 0.
struct MetricValue {
    double value = 0.0;
    ValueStatus status = ValueStatus::undefined;

    bool defined() const { return status == ValueStatus::defined; }
    static MetricValue ratio(double num, double den);
};

/// The three admission counts every flow index is built from.
struct RegionFlowCounts {
    std::int64_t internal = 0;  // resident patients treated at region hospitals
    std::int64_t outgoing = 0;  // residents treated elsewhere
    std::int64_t incoming = 0;  // non-residents treated at region hospitals

    std::int64_t residents() const { return internal + outgoing; }
    std::int64_t at_hospitals() const { return internal + incoming; }
};

/// Every patient and hospital zone of the table must be in `p`, otherwise
/// InputError("coverage_mismatch") naming the zones. Rows with an unknown
/// hospital zone raise InputError("hospital_not_in_roster").
std::map<int, RegionFlowCounts> region_flow_counts(const FlowTable& table, const ZonePartition& p);

/// LI_r = internal / residents.
std::map<int, MetricValue> localization_index(const FlowTable& table, const ZonePartition& p);
/// MSI_r = incoming / admissions at region hospitals.
std::map<int, MetricValue> market_share_index(const FlowTable& table, const ZonePartition& p);
/// NPF_r = incoming / outgoing; infinite when only outgoing is zero.
std::map<int, MetricValue> net_patient_flow(const FlowTable& table, const ZonePartition& p);

enum class MarketConcentration { highly_competitive, unconcentrated, moderately_concentrated, highly_concentrated };

/// >2500 highly concentrated, 1500-2500 moderately, 100-1500 unconcentrated, <100 highly competitive.
MarketConcentration classify_hhi(double hhi);
const char* to_string(MarketConcentration c);

struct HerfindahlValue {
    MetricValue hhi;
    std::optional<MarketConcentration> band;
    std::size_t hospitals = 0;  // hospitals with admissions in the region
};

/// Sum of squared hospital shares of the region's hospital admissions, times 10^4.
/// Hospital location comes from the roster when present, else from the table join.
std::map<int, HerfindahlValue> herfindahl(const FlowTable& table, const HospitalRoster& roster,
                                          const ZonePartition& p);

struct SizeCounts {
    std::size_t zone_count = 0;
    std::size_t hospital_count = 0;
    std::int64_t inpatient_count = 0;  // admissions at region hospitals
    std::int64_t resident_count = 0;   // admissions of region residents
    std::optional<double> population;
};

struct SummaryStats {
    double mean = 0.0;
    double sd = 0.0;  // population standard deviation
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;     // defined values summarized
    std::size_t excluded = 0;  // undefined or infinite values left out
};

SummaryStats summarize(std::span<const double> values, std::size_t excluded = 0);
SummaryStats summarize(const std::vector<MetricValue>& values);

/// Per-region size counts. hospital_count counts roster hospitals whose home
/// zone lies in the region. With `attrs`, every zone of `p` must have a row,
/// otherwise InputError("missing_attributes") lists them.
std::map<int, SizeCounts> size_balance(const ZonePartition& p, const ZoneAttributes* attrs,
                                       const HospitalRoster& roster, const FlowTable& table);

struct RegionRow {
    int region = 0;
    MetricValue li, msi, npf;
    std::optional<MetricValue> pac;  // nullopt when geometry was not supplied
    HerfindahlValue hhi;
    SizeCounts size;
    RegionFlowCounts flows;
    std::optional<RegionShape> shape;
};

struct RegionReport {
    std::vector<RegionRow> regions;
    /// Keys: LI, MSI, NPF, PAC, HHI, zone_count, hospital_count,
    /// inpatient_count, resident_count, population.
    std::map<std::string, SummaryStats> summary;
    bool pac_skipped = true;
    bool population_skipped = true;
    /// Share of all admissions whose patient and hospital share a region.
    double global_localization = 0.0;
};

/// Assembles the full report. `geoms` and `attrs` are optional; missing ones
/// mark PAC / population as skipped.
RegionReport evaluate(const FlowTable& table, const ZonePartition& p, const HospitalRoster& roster,
                      std::span<const ZoneGeometry> geoms = {}, const ZoneAttributes* attrs = nullptr);

}  // namespace regionflow
