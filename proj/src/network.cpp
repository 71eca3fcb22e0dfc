#include "regionflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "regionflow/error.hpp"

namespace regionflow {

FlowNetwork::FlowNetwork(std::vector<std::string> node_ids, std::span<const WeightedEdge> edges)
    : ids_(std::move(node_ids)) {
    const std::size_t n = ids_.size();
    self_.assign(n, 0.0);
    degree_.assign(n, 0.0);
    sorted_ids_ = std::is_sorted(ids_.begin(), ids_.end());

    std::vector<WeightedEdge> half;
    half.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n)
            throw InputError("malformed_record", "edge endpoint outside node range");
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
            throw InputError("malformed_record", "edge weight must be finite and nonnegative");
        if (e.u == e.v) {
            self_[e.u] += e.weight;
        } else {
            half.push_back({e.u, e.v, e.weight});
            half.push_back({e.v, e.u, e.weight});
        }
    }
    // Stable so parallel-edge sums are accumulated in input order on both sides.
    std::stable_sort(half.begin(), half.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    offsets_.assign(n + 1, 0);
    adj_.reserve(half.size());
    for (std::size_t a = 0; a < half.size();) {
        const NodeIndex u = half[a].u, v = half[a].v;
        double w = 0.0;
        while (a < half.size() && half[a].u == u && half[a].v == v) w += half[a++].weight;
        adj_.push_back({v, w});
        offsets_[u + 1] = adj_.size();
    }
    for (std::size_t i = 1; i <= n; ++i) offsets_[i] = std::max(offsets_[i], offsets_[i - 1]);

    double pair_sum = 0.0, loop_sum = 0.0;
    for (NodeIndex i = 0; i < n; ++i) {
        double k = 2.0 * self_[i];
        for (const auto& nb : neighbors(i)) {
            k += nb.weight;
            if (nb.node > i) pair_sum += nb.weight;
        }
        degree_[i] = k;
        loop_sum += self_[i];
    }
    m_ = pair_sum + loop_sum;
}

std::optional<NodeIndex> FlowNetwork::find(std::string_view id) const {
    if (sorted_ids_) {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
        if (it != ids_.end() && *it == id) return static_cast<NodeIndex>(it - ids_.begin());
        return std::nullopt;
    }
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) return std::nullopt;
    return static_cast<NodeIndex>(it - ids_.begin());
}

double FlowNetwork::weight(NodeIndex i, NodeIndex j) const {
    if (i == j) return self_[i];
    auto nb = neighbors(i);
    auto it = std::lower_bound(nb.begin(), nb.end(), j,
                               [](const Neighbor& a, NodeIndex v) { return a.node < v; });
    return (it != nb.end() && it->node == j) ? it->weight : 0.0;
}

std::vector<WeightedEdge> FlowNetwork::edges() const {
    std::vector<WeightedEdge> out;
    for (NodeIndex i = 0; i < size(); ++i) {
        if (self_[i] > 0.0) out.push_back({i, i, self_[i]});
        for (const auto& nb : neighbors(i))
            if (nb.node > i) out.push_back({i, nb.node, nb.weight});
    }
    return out;
}

FlowNetwork build_network(const FlowTable& table, const HospitalRoster& roster) {
    std::vector<std::string> names(table.zones().begin(), table.zones().end());
    std::map<std::string, NodeIndex> extra;

    // Hospital home zones come from the roster, not from ingestion-time joins.
    std::vector<std::string> hospital_zone(table.hospitals().size());
    for (HospitalIndex h = 0; h < table.hospitals().size(); ++h) {
        const Hospital* entry = roster.find(table.hospital_name(h));
        if (!entry)
            throw InputError("hospital_not_in_roster",
                             "hospital '" + table.hospital_name(h) + "' is missing from the roster");
        hospital_zone[h] = entry->home_zone;
        if (!table.find_zone(entry->home_zone)) extra.emplace(entry->home_zone, 0);
    }
    for (auto& [name, idx] : extra) names.push_back(name);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    auto index_of = [&](const std::string& z) {
        return static_cast<NodeIndex>(std::lower_bound(names.begin(), names.end(), z) - names.begin());
    };
    // Table zones are a sorted subset of names; precompute their node index.
    std::vector<NodeIndex> zone_node(table.zones().size());
    for (ZoneIndex z = 0; z < zone_node.size(); ++z) zone_node[z] = index_of(table.zone_name(z));
    std::vector<NodeIndex> hospital_node(hospital_zone.size());
    for (std::size_t h = 0; h < hospital_zone.size(); ++h) hospital_node[h] = index_of(hospital_zone[h]);

    std::vector<WeightedEdge> edges;
    edges.reserve(table.rows().size());
    for (const auto& r : table.rows()) {
        edges.push_back({zone_node[r.patient_zone], hospital_node[r.hospital],
                         static_cast<double>(r.count)});
    }
    return FlowNetwork(std::move(names), edges);
}

}  // namespace regionflow
