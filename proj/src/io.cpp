#include "regionflow/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "regionflow/csv.hpp"
#include "regionflow/error.hpp"

namespace regionflow::io {

namespace {

std::string where(const csv::Reader& r) {
    return "record " + std::to_string(r.row_index()) + " (" + r.path() + ":" +
           std::to_string(r.line_number()) + ")";
}

[[noreturn]] void malformed(const csv::Reader& r, const std::string& what) {
    throw InputError("malformed_record", where(r) + ": " + what);
}

const std::string& field(const csv::Reader& r, const std::vector<std::string>& f, std::size_t col) {
    if (col >= f.size()) malformed(r, "expected at least " + std::to_string(col + 1) + " fields");
    return f[col];
}

json metric_json(const MetricValue& v) {
    switch (v.status) {
        case ValueStatus::defined: return v.value;
        case ValueStatus::infinite: return "infinite";
        case ValueStatus::undefined: break;
    }
    return "undefined";
}

std::string metric_csv(const MetricValue& v) {
    switch (v.status) {
        case ValueStatus::defined: return format_double(v.value);
        case ValueStatus::infinite: return "inf";
        case ValueStatus::undefined: break;
    }
    return "NA";
}

json summary_json(const SummaryStats& s) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return {{"mean", num(s.mean)}, {"sd", num(s.sd)},   {"min", num(s.min)},
            {"max", num(s.max)},   {"count", s.count}, {"excluded", s.excluded}};
}

const std::vector<std::string>& summary_keys() {
    static const std::vector<std::string> keys{"LI",         "MSI",           "NPF",
                                               "PAC",        "HHI",           "zone_count",
                                               "hospital_count", "inpatient_count", "resident_count",
                                               "population"};
    return keys;
}

Ring parse_ring(const json& coords, const std::string& zone) {
    Ring ring;
    for (const auto& pt : coords) {
        if (!pt.is_array() || pt.size() < 2)
            throw InputError("invalid_geometry", "zone '" + zone + "' has a malformed coordinate");
        ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    return ring;
}

Polygon parse_polygon(const json& rings, const std::string& zone) {
    if (!rings.is_array() || rings.empty())
        throw InputError("invalid_geometry", "zone '" + zone + "' has an empty polygon");
    Polygon poly;
    poly.outer = parse_ring(rings[0], zone);
    for (std::size_t i = 1; i < rings.size(); ++i) poly.holes.push_back(parse_ring(rings[i], zone));
    return poly;
}

json ring_json(const Ring& ring) {
    json out = json::array();
    for (const auto& p : ring) out.push_back({p.x, p.y});
    return out;
}

}  // namespace

// -- readers -----------------------------------------------------------------

namespace {

template <typename Sink>
void scan_flows(const std::string& path, Sink&& sink) {
    csv::Reader reader(path);
    const auto c_zone = reader.require_column("patient_zone");
    const auto c_hosp = reader.require_column("hospital_id");
    const auto c_count = reader.require_column("count");
    const auto c_class = reader.require_column("service_class");
    std::vector<std::string> f;
    while (reader.next(f)) {
        auto count = csv::parse_int(field(reader, f, c_count));
        if (!count || *count < 1) malformed(reader, "count must be a positive integer");
        auto service = parse_service_code(field(reader, f, c_class));
        if (!service) malformed(reader, "service_class must be G or S");
        const auto& hospital = field(reader, f, c_hosp);
        if (hospital.empty()) malformed(reader, "empty hospital_id");
        sink(field(reader, f, c_zone), hospital, *count, *service);
    }
}

}  // namespace

FlowTable read_flows_csv(const std::string& path, const HospitalRoster& roster,
                         const FilterPolicy& policy, const ZoneAttributes* universe) {
    FlowIngestor ingestor(roster, policy, universe);
    scan_flows(path, [&](const std::string& zone, const std::string& hospital, long long count,
                         ServiceClass service) { ingestor.add(zone, hospital, count, service); });
    return std::move(ingestor).finish();
}

std::vector<FlowRecord> read_flow_records_csv(const std::string& path) {
    std::vector<FlowRecord> out;
    scan_flows(path, [&](const std::string& zone, const std::string& hospital, long long count,
                         ServiceClass service) { out.push_back({zone, hospital, count, service}); });
    return out;
}

HospitalRoster read_roster_csv(const std::string& path) {
    csv::Reader reader(path);
    const auto c_id = reader.require_column("hospital_id");
    const auto c_zone = reader.require_column("home_zone");
    const auto c_general = reader.require_column("is_general");
    const auto c_adm = reader.require_column("admissions");
    std::vector<Hospital> hospitals;
    std::vector<std::string> f;
    while (reader.next(f)) {
        Hospital h;
        h.id = field(reader, f, c_id);
        h.home_zone = field(reader, f, c_zone);
        if (h.id.empty() || h.home_zone.empty()) malformed(reader, "empty hospital_id or home_zone");
        auto general = csv::parse_bool(field(reader, f, c_general));
        if (!general) malformed(reader, "is_general must be a boolean");
        h.is_general = *general;
        const auto& adm = field(reader, f, c_adm);
        if (!adm.empty()) {
            auto v = csv::parse_int(adm);
            if (!v || *v < 0) malformed(reader, "admissions must be a nonnegative integer");
            h.admissions = *v;
        }
        hospitals.push_back(std::move(h));
    }
    return HospitalRoster(std::move(hospitals));
}

ZoneAttributes read_attributes_csv(const std::string& path) {
    csv::Reader reader(path);
    const auto c_zone = reader.require_column("zone_id");
    const auto c_pop = reader.require_column("population");
    const auto c_x = reader.column("centroid_x");
    const auto c_y = reader.column("centroid_y");
    ZoneAttributes attrs;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const auto& zone = field(reader, f, c_zone);
        if (zone.empty()) malformed(reader, "empty zone_id");
        auto pop = csv::parse_double(field(reader, f, c_pop));
        if (!pop || *pop < 0) malformed(reader, "population must be a nonnegative number");
        ZoneAttribute a{*pop, std::nullopt};
        if (c_x && c_y && *c_x < f.size() && *c_y < f.size() && !f[*c_x].empty() && !f[*c_y].empty()) {
            auto x = csv::parse_double(f[*c_x]);
            auto y = csv::parse_double(f[*c_y]);
            if (!x || !y) malformed(reader, "centroid coordinates must be numbers");
            a.centroid = Point{*x, *y};
        }
        if (!attrs.emplace(zone, a).second) malformed(reader, "duplicate zone_id '" + zone + "'");
    }
    return attrs;
}

AdjacencyMap read_adjacency_csv(const std::string& path) {
    csv::Reader reader(path);
    const auto c_a = reader.require_column("zone_a");
    const auto c_b = reader.require_column("zone_b");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> f;
    while (reader.next(f)) pairs.emplace_back(field(reader, f, c_a), field(reader, f, c_b));
    return make_adjacency(pairs);
}

std::vector<ZoneGeometry> parse_geojson(const json& doc) {
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features"))
        throw InputError("invalid_geometry", "expected a GeoJSON FeatureCollection");
    std::vector<ZoneGeometry> out;
    for (const auto& feature : doc["features"]) {
        const auto& props = feature.at("properties");
        if (!props.contains("zone_id"))
            throw InputError("invalid_geometry", "feature without a zone_id property");
        const auto& id = props["zone_id"];
        ZoneGeometry g;
        g.zone_id = id.is_string() ? id.get<std::string>() : id.dump();
        const auto& geom = feature.at("geometry");
        const std::string type = geom.at("type").get<std::string>();
        if (type == "Polygon") {
            g.polygons.push_back(parse_polygon(geom.at("coordinates"), g.zone_id));
        } else if (type == "MultiPolygon") {
            for (const auto& poly : geom.at("coordinates")) g.polygons.push_back(parse_polygon(poly, g.zone_id));
        } else {
            throw InputError("invalid_geometry", "zone '" + g.zone_id + "' has unsupported type " + type);
        }
        validate(g);
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<ZoneGeometry> read_geojson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("missing_file", "cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("invalid_geometry", "'" + path + "': " + e.what());
    }
    try {
        return parse_geojson(doc);
    } catch (const json::exception& e) {
        throw InputError("invalid_geometry", "'" + path + "': " + e.what());
    }
}

ZonePartition read_partition_csv(const std::string& path) {
    csv::Reader reader(path);
    const auto c_zone = reader.require_column("zone_id");
    const auto c_region = reader.require_column("region_id");
    ZonePartition p;
    std::vector<std::string> f;
    while (reader.next(f)) {
        auto region = csv::parse_int(field(reader, f, c_region));
        if (!region || *region < 0) malformed(reader, "region_id must be a nonnegative integer");
        const auto& zone = field(reader, f, c_zone);
        if (zone.empty()) malformed(reader, "empty zone_id");
        if (!p.emplace(zone, static_cast<int>(*region)).second)
            malformed(reader, "zone '" + zone + "' assigned twice");
    }
    if (p.empty()) throw InputError("empty_input", "'" + path + "' contains no assignments");
    return p;
}

LoadedDendrogram read_dendrogram_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("missing_file", "cannot open '" + path + "'");
    try {
        json doc = json::parse(in);
        LoadedDendrogram d;
        for (const auto& level : doc.at("levels")) {
            ZonePartition p;
            for (const auto& [zone, label] : level.at("zone_assignment").items()) p.emplace(zone, label.get<int>());
            d.levels.push_back(std::move(p));
        }
        if (doc.contains("zones")) {
            d.zones = doc["zones"].get<std::vector<std::string>>();
        } else if (!d.levels.empty()) {
            for (const auto& [zone, label] : d.levels.front()) d.zones.push_back(zone);
        }
        return d;
    } catch (const json::exception& e) {
        throw InputError("malformed_record", "'" + path + "': " + e.what());
    }
}

// -- writers -----------------------------------------------------------------

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string partition_csv(const ZonePartition& p) {
    std::string out = "zone_id,region_id\n";
    for (const auto& [zone, region] : p) out += csv::escape(zone) + "," + std::to_string(region) + "\n";
    return out;
}

json stats_json(const IngestStats& s) {
    return {{"records_total", s.records_total},
            {"records_retained", s.records_retained},
            {"missing_zone", s.missing_zone},
            {"unmatched_hospital", s.unmatched_hospital},
            {"non_general_hospital", s.non_general_hospital},
            {"out_of_universe", s.out_of_universe},
            {"admissions_total", s.admissions_total},
            {"admissions_retained", s.admissions_retained}};
}

json dendrogram_json(const Dendrogram& d) {
    json levels = json::array();
    for (std::size_t i = 0; i < d.levels.size(); ++i) {
        const auto& l = d.levels[i];
        json assignment = json::object();
        for (std::size_t z = 0; z < d.zones.size(); ++z) assignment[d.zones[z]] = l.zone_partition[z];
        levels.push_back({{"level", i},
                          {"community_count", l.zone_partition.community_count()},
                          {"Q", l.modularity},
                          {"zone_assignment", std::move(assignment)}});
    }
    return {{"zone_count", d.zones.size()}, {"singleton_Q", d.singleton_modularity}, {"levels", std::move(levels)}};
}

std::string curve_csv(const ModularityCurve& c) {
    std::string out = "k,Q\n";
    for (const auto& pt : c.points) out += std::to_string(pt.k) + "," + format_double(pt.modularity) + "\n";
    return out;
}

json curve_json(const ModularityCurve& c) {
    json points = json::array();
    for (const auto& pt : c.points)
        points.push_back({{"k", pt.k}, {"Q", pt.modularity}, {"provenance", to_string(pt.provenance)}});
    return {{"points", std::move(points)}, {"best_k", c.best_k}, {"best_Q", c.best_modularity}};
}

json report_json(const RegionReport& r) {
    json regions = json::array();
    for (const auto& row : r.regions) {
        json j{{"region_id", row.region},
               {"LI", metric_json(row.li)},
               {"MSI", metric_json(row.msi)},
               {"NPF", metric_json(row.npf)},
               {"PAC", row.pac ? metric_json(*row.pac) : json("skipped")},
               {"HHI", metric_json(row.hhi.hhi)},
               {"HHI_band", row.hhi.band ? json(to_string(*row.hhi.band)) : json(nullptr)},
               {"zone_count", row.size.zone_count},
               {"hospital_count", row.size.hospital_count},
               {"inpatient_count", row.size.inpatient_count},
               {"resident_count", row.size.resident_count},
               {"population", row.size.population ? json(*row.size.population) : json("skipped")},
               {"internal", row.flows.internal},
               {"outgoing", row.flows.outgoing},
               {"incoming", row.flows.incoming}};
        if (row.shape) {
            j["perimeter"] = row.shape->perimeter;
            j["area"] = row.shape->area;
        }
        regions.push_back(std::move(j));
    }
    json summary = json::object();
    json skipped = json::array();
    for (const auto& key : summary_keys()) {
        auto it = r.summary.find(key);
        if (it == r.summary.end()) {
            skipped.push_back(key);
            summary[key] = "skipped";
        } else {
            summary[key] = summary_json(it->second);
        }
    }
    return {{"region_count", r.regions.size()},
            {"regions", std::move(regions)},
            {"summary", std::move(summary)},
            {"skipped", std::move(skipped)},
            {"global_localization", std::isfinite(r.global_localization) ? json(r.global_localization)
                                                                         : json(nullptr)}};
}

std::string report_csv(const RegionReport& r) {
    std::ostringstream out;
    out << "region_id,LI,MSI,NPF,PAC,HHI,HHI_band,zone_count,hospital_count,inpatient_count,"
           "resident_count,population\n";
    for (const auto& row : r.regions) {
        out << row.region << ',' << metric_csv(row.li) << ',' << metric_csv(row.msi) << ','
            << metric_csv(row.npf) << ',' << (row.pac ? metric_csv(*row.pac) : "skipped") << ','
            << metric_csv(row.hhi.hhi) << ',' << (row.hhi.band ? to_string(*row.hhi.band) : "NA") << ','
            << row.size.zone_count << ',' << row.size.hospital_count << ',' << row.size.inpatient_count
            << ',' << row.size.resident_count << ','
            << (row.size.population ? format_double(*row.size.population) : "skipped") << '\n';
    }
    return out.str();
}

std::string comparison_csv(const std::vector<std::string>& names, const std::vector<RegionReport>& reports) {
    std::ostringstream out;
    out << "index,statistic";
    for (const auto& n : names) out << ',' << csv::escape(n);
    out << '\n';
    out << "regions,count";
    for (const auto& r : reports) out << ',' << r.regions.size();
    out << '\n';
    static const char* stats[] = {"mean", "sd", "min", "max", "count", "excluded"};
    for (const auto& key : summary_keys()) {
        for (const char* stat : stats) {
            out << key << ',' << stat;
            for (const auto& r : reports) {
                auto it = r.summary.find(key);
                if (it == r.summary.end()) {
                    out << ",skipped";
                    continue;
                }
                const auto& s = it->second;
                const std::string_view st(stat);
                if (st == "count") out << ',' << s.count;
                else if (st == "excluded") out << ',' << s.excluded;
                else out << ',' << format_double(st == "mean" ? s.mean : st == "sd" ? s.sd : st == "min" ? s.min : s.max);
            }
            out << '\n';
        }
    }
    return out.str();
}

json comparison_json(const std::vector<std::string>& names, const std::vector<RegionReport>& reports) {
    json out = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        json j = report_json(reports[i]);
        out[names[i]] = {{"region_count", j["region_count"]}, {"summary", j["summary"]},
                         {"global_localization", j["global_localization"]}};
    }
    return out;
}

std::string flows_csv(const std::vector<FlowRecord>& flows) {
    std::string out = "patient_zone,hospital_id,count,service_class\n";
    for (const auto& f : flows)
        out += csv::escape(f.patient_zone) + "," + csv::escape(f.hospital) + "," + std::to_string(f.count) +
               "," + service_code(f.service) + "\n";
    return out;
}

std::string roster_csv(const HospitalRoster& roster) {
    std::string out = "hospital_id,home_zone,is_general,admissions\n";
    for (const auto& h : roster.hospitals())
        out += csv::escape(h.id) + "," + csv::escape(h.home_zone) + "," + (h.is_general ? "1" : "0") + "," +
               std::to_string(h.admissions) + "\n";
    return out;
}

std::string attributes_csv(const ZoneAttributes& attrs) {
    std::string out = "zone_id,population,centroid_x,centroid_y\n";
    for (const auto& [zone, a] : attrs) {
        out += csv::escape(zone) + "," + format_double(a.population) + ",";
        if (a.centroid) out += format_double(a.centroid->x) + "," + format_double(a.centroid->y);
        else out += ",";
        out += "\n";
    }
    return out;
}

std::string adjacency_csv(const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::string out = "zone_a,zone_b\n";
    for (const auto& [a, b] : pairs) out += csv::escape(a) + "," + csv::escape(b) + "\n";
    return out;
}

json geojson(const std::vector<ZoneGeometry>& geoms) {
    json features = json::array();
    for (const auto& g : geoms) {
        json polys = json::array();
        for (const auto& poly : g.polygons) {
            json rings = json::array();
            rings.push_back(ring_json(poly.outer));
            for (const auto& h : poly.holes) rings.push_back(ring_json(h));
            polys.push_back(std::move(rings));
        }
        json geometry = g.polygons.size() == 1
                            ? json{{"type", "Polygon"}, {"coordinates", polys[0]}}
                            : json{{"type", "MultiPolygon"}, {"coordinates", polys}};
        features.push_back({{"type", "Feature"},
                            {"properties", {{"zone_id", g.zone_id}}},
                            {"geometry", std::move(geometry)}});
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& doc) { write_file(path, doc.dump(2) + "\n"); }

}  // namespace regionflow::io
