#include "regionflow/region_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "regionflow/error.hpp"

namespace regionflow {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size() && i < 20; ++i) s += (i ? ", " : "") + v[i];
    if (v.size() > 20) s += ", ...";
    return s;
}

/// Region label per table zone index.
std::vector<int> zone_regions(const FlowTable& table, const ZonePartition& p) {
    std::vector<int> out(table.zones().size());
    std::vector<std::string> missing;
    for (ZoneIndex z = 0; z < out.size(); ++z) {
        auto it = p.find(table.zone_name(z));
        if (it == p.end()) {
            missing.push_back(table.zone_name(z));
            continue;
        }
        out[z] = it->second;
    }
    if (!missing.empty())
        throw InputError("coverage_mismatch", std::to_string(missing.size()) +
                                                  " zone(s) missing from partition: " + join(missing));
    return out;
}

std::set<int> labels_of(const ZonePartition& p) {
    std::set<int> out;
    for (const auto& [z, l] : p) out.insert(l);
    return out;
}

template <typename F>
std::map<int, MetricValue> per_region(const FlowTable& table, const ZonePartition& p, F&& f) {
    std::map<int, MetricValue> out;
    for (const auto& [region, c] : region_flow_counts(table, p)) out.emplace(region, f(c));
    return out;
}

}  // namespace

MetricValue MetricValue::ratio(double num, double den) {
    if (den != 0.0) return {num / den, ValueStatus::defined};
    if (num > 0.0) return {std::numeric_limits<double>::infinity(), ValueStatus::infinite};
    return {std::numeric_limits<double>::quiet_NaN(), ValueStatus::undefined};
}

std::map<int, RegionFlowCounts> region_flow_counts(const FlowTable& table, const ZonePartition& p) {
    const auto region = zone_regions(table, p);
    std::map<int, RegionFlowCounts> out;
    for (int r : labels_of(p)) out.emplace(r, RegionFlowCounts{});
    for (const auto& row : table.rows()) {
        if (row.hospital_zone == kUnknownZone)
            throw InputError("hospital_not_in_roster",
                             "hospital '" + table.hospital_name(row.hospital) + "' has no known home zone");
        const int from = region[row.patient_zone];
        const int to = region[row.hospital_zone];
        if (from == to) {
            out[from].internal += row.count;
        } else {
            out[from].outgoing += row.count;
            out[to].incoming += row.count;
        }
    }
    return out;
}

std::map<int, MetricValue> localization_index(const FlowTable& table, const ZonePartition& p) {
    return per_region(table, p, [](const RegionFlowCounts& c) {
        return c.residents() > 0 ? MetricValue::ratio(double(c.internal), double(c.residents()))
                                 : MetricValue{};
    });
}

std::map<int, MetricValue> market_share_index(const FlowTable& table, const ZonePartition& p) {
    return per_region(table, p, [](const RegionFlowCounts& c) {
        return c.at_hospitals() > 0 ? MetricValue::ratio(double(c.incoming), double(c.at_hospitals()))
                                    : MetricValue{};
    });
}

std::map<int, MetricValue> net_patient_flow(const FlowTable& table, const ZonePartition& p) {
    return per_region(table, p, [](const RegionFlowCounts& c) {
        return MetricValue::ratio(double(c.incoming), double(c.outgoing));
    });
}

MarketConcentration classify_hhi(double hhi) {
    if (hhi > 2500.0) return MarketConcentration::highly_concentrated;
    if (hhi >= 1500.0) return MarketConcentration::moderately_concentrated;
    if (hhi >= 100.0) return MarketConcentration::unconcentrated;
    return MarketConcentration::highly_competitive;
}

const char* to_string(MarketConcentration c) {
    switch (c) {
        case MarketConcentration::highly_competitive: return "highly_competitive";
        case MarketConcentration::unconcentrated: return "unconcentrated";
        case MarketConcentration::moderately_concentrated: return "moderately_concentrated";
        case MarketConcentration::highly_concentrated: return "highly_concentrated";
    }
    return "unknown";
}

std::map<int, HerfindahlValue> herfindahl(const FlowTable& table, const HospitalRoster& roster,
                                          const ZonePartition& p) {
    std::vector<std::int64_t> admissions(table.hospitals().size(), 0);
    std::vector<std::string> home(table.hospitals().size());
    for (const auto& row : table.rows()) {
        admissions[row.hospital] += row.count;
        if (!home[row.hospital].empty()) continue;
        if (const Hospital* h = roster.find(table.hospital_name(row.hospital)))
            home[row.hospital] = h->home_zone;
        else if (row.hospital_zone != kUnknownZone)
            home[row.hospital] = table.zone_name(row.hospital_zone);
        else
            throw InputError("hospital_not_in_roster",
                             "hospital '" + table.hospital_name(row.hospital) + "' has no known home zone");
    }

    struct Acc {
        double sum_sq = 0.0;  // exact while below 2^53
        std::int64_t total = 0;
        std::size_t hospitals = 0;
    };
    std::map<int, Acc> acc;
    for (int r : labels_of(p)) acc.emplace(r, Acc{});
    std::vector<std::string> missing;
    for (HospitalIndex h = 0; h < admissions.size(); ++h) {
        if (admissions[h] == 0) continue;
        auto it = p.find(home[h]);
        if (it == p.end()) {
            missing.push_back(home[h]);
            continue;
        }
        auto& a = acc[it->second];
        a.sum_sq += double(admissions[h]) * double(admissions[h]);
        a.total += admissions[h];
        ++a.hospitals;
    }
    if (!missing.empty())
        throw InputError("coverage_mismatch", "hospital zone(s) missing from partition: " + join(missing));

    std::map<int, HerfindahlValue> out;
    for (const auto& [region, a] : acc) {
        HerfindahlValue v;
        v.hospitals = a.hospitals;
        if (a.total > 0) {
            // 10^4 * sum(a_h^2) / (sum a_h)^2; one rounding for integer-valued operands.
            const double num = 10000.0 * a.sum_sq;
            const double den = double(a.total) * double(a.total);
            v.hhi = {num / den, ValueStatus::defined};
            v.band = classify_hhi(v.hhi.value);
        }
        out.emplace(region, v);
    }
    return out;
}

SummaryStats summarize(std::span<const double> values, std::size_t excluded) {
    SummaryStats s;
    s.excluded = excluded;
    s.count = values.size();
    if (values.empty()) {
        s.mean = s.sd = s.min = s.max = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size()));
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

SummaryStats summarize(const std::vector<MetricValue>& values) {
    std::vector<double> defined;
    std::size_t excluded = 0;
    for (const auto& v : values) {
        if (v.defined())
            defined.push_back(v.value);
        else
            ++excluded;
    }
    return summarize(defined, excluded);
}

std::map<int, SizeCounts> size_balance(const ZonePartition& p, const ZoneAttributes* attrs,
                                       const HospitalRoster& roster, const FlowTable& table) {
    std::map<int, SizeCounts> out;
    std::vector<std::string> missing;
    for (const auto& [zone, region] : p) {
        auto& s = out[region];
        ++s.zone_count;
        if (!attrs) continue;
        auto it = attrs->find(zone);
        if (it == attrs->end()) {
            missing.push_back(zone);
            continue;
        }
        s.population = s.population.value_or(0.0) + it->second.population;
    }
    if (!missing.empty())
        throw InputError("missing_attributes", "zone(s) without attribute rows: " + join(missing));
    for (const auto& h : roster.hospitals()) {
        auto it = p.find(h.home_zone);
        if (it != p.end()) ++out[it->second].hospital_count;
    }
    for (const auto& [region, c] : region_flow_counts(table, p)) {
        out[region].inpatient_count = c.at_hospitals();
        out[region].resident_count = c.residents();
    }
    return out;
}

RegionReport evaluate(const FlowTable& table, const ZonePartition& p, const HospitalRoster& roster,
                      std::span<const ZoneGeometry> geoms, const ZoneAttributes* attrs) {
    RegionReport report;
    const auto counts = region_flow_counts(table, p);
    const auto hhi = herfindahl(table, roster, p);
    const auto sizes = size_balance(p, attrs, roster, table);

    std::map<int, RegionShape> shapes;
    report.pac_skipped = geoms.empty();
    report.population_skipped = attrs == nullptr;
    if (!geoms.empty()) {
        std::set<std::string> have;
        for (const auto& g : geoms) have.insert(g.zone_id);
        std::vector<std::string> missing;
        for (const auto& [zone, region] : p)
            if (!have.contains(zone)) missing.push_back(zone);
        if (!missing.empty())
            throw InputError("missing_geometry", "zone(s) without geometry: " + join(missing));
        shapes = dissolve(geoms, p);
    }

    std::int64_t internal = 0, residents = 0;
    std::vector<MetricValue> li, msi, npf, pac, hh;
    std::vector<double> zone_count, hospital_count, inpatients, resident_count, population;
    for (const auto& [region, c] : counts) {
        RegionRow row;
        row.region = region;
        row.flows = c;
        row.li = c.residents() > 0 ? MetricValue::ratio(double(c.internal), double(c.residents())) : MetricValue{};
        row.msi = c.at_hospitals() > 0 ? MetricValue::ratio(double(c.incoming), double(c.at_hospitals()))
                                       : MetricValue{};
        row.npf = MetricValue::ratio(double(c.incoming), double(c.outgoing));
        row.hhi = hhi.at(region);
        row.size = sizes.at(region);
        if (!geoms.empty()) {
            row.shape = shapes.at(region);
            row.pac = MetricValue{compactness(row.shape->perimeter, row.shape->area), ValueStatus::defined};
            pac.push_back(*row.pac);
        }
        internal += c.internal;
        residents += c.residents();

        li.push_back(row.li);
        msi.push_back(row.msi);
        npf.push_back(row.npf);
        hh.push_back(row.hhi.hhi);
        zone_count.push_back(double(row.size.zone_count));
        hospital_count.push_back(double(row.size.hospital_count));
        inpatients.push_back(double(row.size.inpatient_count));
        resident_count.push_back(double(row.size.resident_count));
        if (row.size.population) population.push_back(*row.size.population);
        report.regions.push_back(std::move(row));
    }

    report.summary["LI"] = summarize(li);
    report.summary["MSI"] = summarize(msi);
    report.summary["NPF"] = summarize(npf);
    report.summary["HHI"] = summarize(hh);
    if (!report.pac_skipped) report.summary["PAC"] = summarize(pac);
    report.summary["zone_count"] = summarize(zone_count);
    report.summary["hospital_count"] = summarize(hospital_count);
    report.summary["inpatient_count"] = summarize(inpatients);
    report.summary["resident_count"] = summarize(resident_count);
    if (!report.population_skipped) report.summary["population"] = summarize(population);
    report.global_localization =
        residents > 0 ? double(internal) / double(residents) : std::numeric_limits<double>::quiet_NaN();
    return report;
}

}  // namespace regionflow
