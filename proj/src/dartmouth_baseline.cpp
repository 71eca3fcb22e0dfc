#include "regionflow/dartmouth_baseline.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "regionflow/error.hpp"

namespace regionflow {

namespace {

/// Hospital home zone per table hospital; the ingest-time join wins, the
/// roster fills the gaps.
std::vector<std::string> hospital_zones(const FlowTable& table, const HospitalRoster& roster) {
    std::vector<std::string> out(table.hospitals().size());
    for (const auto& r : table.rows()) {
        if (!out[r.hospital].empty()) continue;
        if (r.hospital_zone != kUnknownZone) {
            out[r.hospital] = table.zone_name(r.hospital_zone);
        } else if (const Hospital* h = roster.find(table.hospital_name(r.hospital))) {
            out[r.hospital] = h->home_zone;
        } else {
            throw InputError("hospital_not_in_roster",
                             "hospital '" + table.hospital_name(r.hospital) + "' is missing from the roster");
        }
    }
    return out;
}

/// patient zone -> hospital zone -> admissions
using FlowMatrix = std::map<std::string, std::map<std::string, std::int64_t>>;

FlowMatrix zone_flows(const FlowTable& table, const std::vector<std::string>& hzone) {
    FlowMatrix flows;
    for (const auto& r : table.rows()) flows[table.zone_name(r.patient_zone)][hzone[r.hospital]] += r.count;
    return flows;
}

bool is_island(const AdjacencyMap& adj, const std::string& z) {
    auto it = adj.find(z);
    return it == adj.end() || it->second.empty();
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size() && i < 20; ++i) s += (i ? ", " : "") + v[i];
    if (v.size() > 20) s += ", ...";
    return s;
}

}  // namespace

PluralityResult plurality_assign(const FlowTable& table, const HospitalRoster& roster,
                                 const ZoneAttributes* zones) {
    if (table.empty()) throw InputError("empty_input", "plurality assignment needs a nonempty flow table");
    const auto hzone = hospital_zones(table, roster);
    const FlowMatrix flows = zone_flows(table, hzone);

    std::set<std::string> universe;
    if (zones) {
        for (const auto& [z, attr] : *zones) universe.insert(z);
    } else {
        for (const auto& z : table.zones()) universe.insert(z);
    }
    for (const auto& [z, dest] : flows) universe.insert(z);

    std::set<std::string> candidates(hzone.begin(), hzone.end());
    for (const auto& h : roster.hospitals()) candidates.insert(h.home_zone);
    candidates.erase(std::string());

    PluralityResult result;
    std::map<std::string, std::string> seed_of;
    std::vector<std::string> missing;
    for (const auto& z : universe) {
        auto it = flows.find(z);
        if (it != flows.end()) {
            std::int64_t best = -1;
            std::string best_zone;
            bool tie = false;
            for (const auto& [dest, count] : it->second) {  // ascending dest id
                if (count > best) {
                    best = count;
                    best_zone = dest;
                    tie = false;
                } else if (count == best) {
                    tie = true;
                }
            }
            seed_of[z] = best_zone;
            if (tie) result.tied_zones.push_back(z);
            continue;
        }

        // A hospital zone without resident admissions anchors its own region.
        if (candidates.contains(z)) {
            seed_of[z] = z;
            result.no_flow_zones.push_back(z);
            continue;
        }

        auto centroid = [&](const std::string& id) -> const Point* {
            if (!zones) return nullptr;
            auto a = zones->find(id);
            return (a != zones->end() && a->second.centroid) ? &*a->second.centroid : nullptr;
        };
        const Point* here = centroid(z);
        std::string nearest;
        double best_d = std::numeric_limits<double>::infinity();
        if (here) {
            for (const auto& c : candidates) {
                const Point* there = centroid(c);
                if (!there) continue;
                const double dx = there->x - here->x, dy = there->y - here->y;
                const double d = dx * dx + dy * dy;
                if (d < best_d) {
                    best_d = d;
                    nearest = c;
                }
            }
        }
        if (nearest.empty()) {
            missing.push_back(z);
            continue;
        }
        seed_of[z] = nearest;
        result.no_flow_zones.push_back(z);
    }
    if (!missing.empty())
        throw InputError("missing_centroid",
                         "zero-flow zone(s) without centroid data: " + join(missing));

    std::map<std::string, int> label_of_seed;
    for (const auto& [z, seed] : seed_of) label_of_seed.emplace(seed, 0);
    int next = 0;
    for (auto& [seed, label] : label_of_seed) {
        label = next++;
        result.seeds.emplace(label, seed);
    }
    for (const auto& [z, seed] : seed_of) result.assignment.emplace(z, label_of_seed.at(seed));
    return result;
}

std::vector<std::vector<std::string>> region_components(const ZonePartition& p,
                                                        const AdjacencyMap& adj, int region) {
    std::vector<std::vector<std::string>> comps;
    std::set<std::string> visited;
    for (const auto& [zone, label] : p) {
        if (label != region || visited.contains(zone) || is_island(adj, zone)) continue;
        std::vector<std::string> comp;
        std::deque<std::string> queue{zone};
        visited.insert(zone);
        while (!queue.empty()) {
            std::string z = std::move(queue.front());
            queue.pop_front();
            for (const auto& nb : adj.at(z)) {
                auto it = p.find(nb);
                if (it == p.end() || it->second != region || visited.contains(nb)) continue;
                visited.insert(nb);
                queue.push_back(nb);
            }
            comp.push_back(std::move(z));
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

ContiguityResult enforce_contiguity(const ZonePartition& p, const AdjacencyMap& adj,
                                    const FlowTable& table) {
    ContiguityResult result;
    result.assignment = p;
    for (const auto& [zone, label] : p)
        if (is_island(adj, zone)) result.islands.push_back(zone);

    // Hospital zones of the table, without requiring a roster: unknown hospital
    // zones simply do not contribute to shares.
    std::map<std::string, std::map<std::string, std::int64_t>> flows;
    for (const auto& r : table.rows()) {
        if (r.hospital_zone == kUnknownZone) continue;
        flows[table.zone_name(r.patient_zone)][table.zone_name(r.hospital_zone)] += r.count;
    }
    auto internal_flow = [&](const std::vector<std::string>& comp) {
        std::set<std::string> members(comp.begin(), comp.end());
        std::int64_t total = 0;
        for (const auto& z : comp) {
            auto it = flows.find(z);
            if (it == flows.end()) continue;
            for (const auto& [dest, count] : it->second)
                if (members.contains(dest)) total += count;
        }
        return total;
    };

    while (true) {
        auto& assignment = result.assignment;
        std::set<int> regions;
        for (const auto& [zone, label] : assignment) regions.insert(label);

        std::set<std::string> in_main;
        std::vector<std::string> enclaves;
        for (int r : regions) {
            auto comps = region_components(assignment, adj, r);
            if (comps.empty()) continue;
            std::size_t keep = 0;
            std::int64_t keep_flow = internal_flow(comps[0]);
            for (std::size_t i = 1; i < comps.size(); ++i) {
                const std::int64_t f = internal_flow(comps[i]);
                if (comps[i].size() > comps[keep].size() ||
                    (comps[i].size() == comps[keep].size() && f > keep_flow)) {
                    keep = i;
                    keep_flow = f;
                }
            }
            for (std::size_t i = 0; i < comps.size(); ++i) {
                if (i == keep)
                    in_main.insert(comps[i].begin(), comps[i].end());
                else
                    enclaves.insert(enclaves.end(), comps[i].begin(), comps[i].end());
            }
        }
        if (enclaves.empty()) break;
        std::sort(enclaves.begin(), enclaves.end());

        std::vector<EnclaveMove> moves;
        std::vector<std::string> stuck;
        for (const auto& z : enclaves) {
            const int from = assignment.at(z);
            std::map<int, std::int64_t> share;
            for (const auto& nb : adj.at(z)) {
                auto it = assignment.find(nb);
                if (it == assignment.end() || it->second == from || !in_main.contains(nb)) continue;
                share.emplace(it->second, 0);
            }
            if (share.empty()) {
                stuck.push_back(z);
                continue;
            }
            if (auto f = flows.find(z); f != flows.end()) {
                for (const auto& [dest, count] : f->second) {
                    auto d = assignment.find(dest);
                    if (d == assignment.end()) continue;
                    if (auto s = share.find(d->second); s != share.end()) s->second += count;
                }
            }
            int best = share.begin()->first;
            for (const auto& [label, total] : share)
                if (total > share.at(best)) best = label;
            moves.push_back({z, from, best});
        }
        if (moves.empty()) {
            result.stranded = std::move(stuck);
            break;
        }
        for (const auto& mv : moves) assignment[mv.zone] = mv.to;
        result.moves.insert(result.moves.end(), moves.begin(), moves.end());
        ++result.passes;
    }
    return result;
}

}  // namespace regionflow
