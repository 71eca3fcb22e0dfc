#include "regionflow/flow_ingest.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "regionflow/error.hpp"

namespace regionflow {

HospitalRoster::HospitalRoster(std::vector<Hospital> hospitals) : hospitals_(std::move(hospitals)) {
    std::sort(hospitals_.begin(), hospitals_.end(),
              [](const Hospital& a, const Hospital& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < hospitals_.size(); ++i) {
        if (hospitals_[i].id == hospitals_[i - 1].id)
            throw InputError("duplicate_hospital", "hospital id '" + hospitals_[i].id +
                                                       "' appears more than once in roster");
    }
    for (const auto& h : hospitals_) {
        if (h.id.empty()) throw InputError("malformed_record", "roster contains an empty hospital id");
        if (h.home_zone.empty())
            throw InputError("malformed_record", "hospital '" + h.id + "' has no home zone");
    }
}

const Hospital* HospitalRoster::find(std::string_view id) const {
    auto it = std::lower_bound(hospitals_.begin(), hospitals_.end(), id,
                               [](const Hospital& h, std::string_view v) { return h.id < v; });
    if (it == hospitals_.end() || it->id != id) return nullptr;
    return &*it;
}

void HospitalRoster::validate_against(const ZoneAttributes& zones) const {
    for (const auto& h : hospitals_) {
        if (!zones.contains(h.home_zone))
            throw InputError("roster_zone_unknown", "hospital '" + h.id + "' home zone '" +
                                                        h.home_zone + "' is not a declared zone");
    }
}

// ---------------------------------------------------------------------------
// FlowTable

FlowTable::FlowTable(std::span<const FlowEntry> entries, IngestStats stats) {
    std::unordered_map<std::string, ZoneIndex> zid;
    std::unordered_map<std::string, HospitalIndex> hid;
    std::vector<std::string> zones, hospitals;
    std::vector<FlowRow> rows;
    rows.reserve(entries.size());
    auto zone = [&](const std::string& z) -> ZoneIndex {
        auto [it, inserted] = zid.try_emplace(z, static_cast<ZoneIndex>(zones.size()));
        if (inserted) zones.push_back(z);
        return it->second;
    };
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.count < 1 || e.patient_zone.empty() || e.hospital.empty())
            throw InputError("malformed_record", "flow entry " + std::to_string(i) +
                                                     " needs nonempty ids and count >= 1");
        FlowRow r;
        r.patient_zone = zone(e.patient_zone);
        r.hospital_zone = e.hospital_zone.empty() ? kUnknownZone : zone(e.hospital_zone);
        auto [it, inserted] = hid.try_emplace(e.hospital, static_cast<HospitalIndex>(hospitals.size()));
        if (inserted) hospitals.push_back(e.hospital);
        r.hospital = it->second;
        r.service = e.service;
        r.count = e.count;
        rows.push_back(r);
    }
    if (stats.records_total == 0) {
        stats.records_total = stats.records_retained = static_cast<std::int64_t>(entries.size());
        for (const auto& r : rows) stats.admissions_total += r.count;
        stats.admissions_retained = stats.admissions_total;
    }
    *this = FlowTable(std::move(zones), std::move(hospitals), std::move(rows), stats);
}

FlowTable::FlowTable(std::vector<std::string> zones, std::vector<std::string> hospitals,
                     std::vector<FlowRow> rows, IngestStats stats)
    : stats_(stats) {
    std::vector<char> zone_used(zones.size(), 0), hospital_used(hospitals.size(), 0);
    for (const auto& r : rows) {
        zone_used[r.patient_zone] = 1;
        if (r.hospital_zone != kUnknownZone) zone_used[r.hospital_zone] = 1;
        hospital_used[r.hospital] = 1;
    }

    auto canonical = [](std::vector<std::string>& names, const std::vector<char>& used,
                        std::vector<std::string>& out) {
        std::vector<std::uint32_t> order;
        for (std::uint32_t i = 0; i < names.size(); ++i)
            if (used[i]) order.push_back(i);
        std::sort(order.begin(), order.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return names[a] < names[b]; });
        std::vector<std::uint32_t> remap(names.size(), kUnknownZone);
        out.reserve(order.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) {
            remap[order[i]] = i;
            out.push_back(std::move(names[order[i]]));
        }
        return remap;
    };
    auto zmap = canonical(zones, zone_used, zones_);
    auto hmap = canonical(hospitals, hospital_used, hospitals_);

    for (auto& r : rows) {
        r.patient_zone = zmap[r.patient_zone];
        if (r.hospital_zone != kUnknownZone) r.hospital_zone = zmap[r.hospital_zone];
        r.hospital = hmap[r.hospital];
    }
    auto key = [](const FlowRow& r) { return std::tie(r.patient_zone, r.hospital, r.service); };
    std::sort(rows.begin(), rows.end(), [&](const FlowRow& a, const FlowRow& b) { return key(a) < key(b); });
    for (const auto& r : rows) {
        if (!rows_.empty() && key(rows_.back()) == key(r)) {
            rows_.back().count += r.count;
        } else {
            rows_.push_back(r);
        }
    }
}

std::optional<ZoneIndex> FlowTable::find_zone(std::string_view name) const {
    auto it = std::lower_bound(zones_.begin(), zones_.end(), name);
    if (it == zones_.end() || *it != name) return std::nullopt;
    return static_cast<ZoneIndex>(it - zones_.begin());
}

std::int64_t FlowTable::total_count() const {
    return std::accumulate(rows_.begin(), rows_.end(), std::int64_t{0},
                           [](std::int64_t s, const FlowRow& r) { return s + r.count; });
}

std::vector<FlowEntry> FlowTable::entries() const {
    std::vector<FlowEntry> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) {
        out.push_back({zones_[r.patient_zone],
                       r.hospital_zone == kUnknownZone ? std::string() : zones_[r.hospital_zone],
                       hospitals_[r.hospital], r.service, r.count});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ingestion

FlowIngestor::FlowIngestor(const HospitalRoster& roster, FilterPolicy policy,
                           const ZoneAttributes* universe)
    : roster_(roster), policy_(policy), universe_(universe) {
    if ((policy.require_roster_match || policy.general_hospitals_only) && roster.empty())
        throw InputError("config_error",
                         "roster-dependent filter enabled but the hospital roster is empty");
}

ZoneIndex FlowIngestor::intern_zone(std::string_view z) {
    auto it = zone_ids_.find(std::string(z));
    if (it != zone_ids_.end()) return it->second;
    auto id = static_cast<ZoneIndex>(zones_.size());
    zones_.emplace_back(z);
    zone_ids_.emplace(zones_.back(), id);
    return id;
}

void FlowIngestor::add(std::string_view patient_zone, std::string_view hospital, std::int64_t count,
                       ServiceClass service) {
    const auto index = stats_.records_total;
    if (count < 1)
        throw InputError("malformed_record",
                         "record " + std::to_string(index) + ": count must be a positive integer");
    if (hospital.empty())
        throw InputError("malformed_record",
                         "record " + std::to_string(index) + ": empty hospital id");
    if (patient_zone.empty() && !policy_.drop_missing_zone)
        throw InputError("malformed_record",
                         "record " + std::to_string(index) + ": empty patient zone");

    ++stats_.records_total;
    stats_.admissions_total += count;

    // Reasons are checked in the order the exclusions are itemized.
    const Hospital* h = roster_.find(hospital);
    if (!h && policy_.require_roster_match) {
        ++stats_.unmatched_hospital;
        return;
    }
    if (patient_zone.empty()) {
        ++stats_.missing_zone;
        return;
    }
    if (h && policy_.general_hospitals_only && !h->is_general) {
        ++stats_.non_general_hospital;
        return;
    }
    if (policy_.in_universe_only && universe_ && !universe_->contains(std::string(patient_zone))) {
        ++stats_.out_of_universe;
        return;
    }

    ++stats_.records_retained;
    stats_.admissions_retained += count;

    ZoneIndex pz = intern_zone(patient_zone);
    HospitalIndex hi;
    if (auto it = hospital_ids_.find(std::string(hospital)); it != hospital_ids_.end()) {
        hi = it->second;
    } else {
        hi = static_cast<HospitalIndex>(hospitals_.size());
        hospitals_.emplace_back(hospital);
        hospital_ids_.emplace(hospitals_.back(), hi);
        hospital_zone_.push_back(h ? intern_zone(h->home_zone) : kUnknownZone);
    }
    std::uint64_t key = (std::uint64_t{pz} << 32) | (std::uint64_t{hi} << 1) |
                        (service == ServiceClass::specialized ? 1u : 0u);
    cells_[key] += count;
}

FlowTable FlowIngestor::finish() && {
    std::vector<FlowRow> rows;
    rows.reserve(cells_.size());
    for (const auto& [key, count] : cells_) {
        FlowRow r;
        r.patient_zone = static_cast<ZoneIndex>(key >> 32);
        r.hospital = static_cast<HospitalIndex>((key & 0xffffffffu) >> 1);
        r.service = (key & 1u) ? ServiceClass::specialized : ServiceClass::general;
        r.hospital_zone = hospital_zone_[r.hospital];
        r.count = count;
        rows.push_back(r);
    }
    return FlowTable(std::move(zones_), std::move(hospitals_), std::move(rows), stats_);
}

FlowTable ingest_flows(std::span<const FlowRecord> records, const HospitalRoster& roster,
                       const FilterPolicy& policy, const ZoneAttributes* universe) {
    FlowIngestor ingestor(roster, policy, universe);
    for (const auto& r : records) ingestor.add(r);
    return std::move(ingestor).finish();
}

FlowTable filter_specialized(const FlowTable& table) {
    std::vector<std::string> zones(table.zones().begin(), table.zones().end());
    std::vector<std::string> hospitals(table.hospitals().begin(), table.hospitals().end());
    std::vector<FlowRow> rows;
    for (const auto& r : table.rows())
        if (r.service == ServiceClass::specialized) rows.push_back(r);
    return FlowTable(std::move(zones), std::move(hospitals), std::move(rows), table.stats());
}

char service_code(ServiceClass s) { return s == ServiceClass::specialized ? 'S' : 'G'; }

std::optional<ServiceClass> parse_service_code(std::string_view s) {
    if (s == "G" || s == "g") return ServiceClass::general;
    if (s == "S" || s == "s") return ServiceClass::specialized;
    return std::nullopt;
}

}  // namespace regionflow
