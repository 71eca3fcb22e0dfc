#include "regionflow/partition.hpp"

#include <set>

#include "regionflow/error.hpp"
#include "regionflow/network.hpp"

namespace regionflow {

Partition::Partition(std::vector<int> labels) : labels_(std::move(labels)) {
    std::map<int, int> remap;
    for (auto& l : labels_) {
        if (l < 0) throw InputError("invalid_partition", "community labels must be nonnegative");
        auto [it, inserted] = remap.try_emplace(l, static_cast<int>(remap.size()));
        l = it->second;
    }
    count_ = remap.size();
}

Partition Partition::singletons(std::size_t n) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);
    return Partition(std::move(labels));
}

Partition Partition::whole(std::size_t n) { return Partition(std::vector<int>(n, 0)); }

std::vector<std::vector<std::size_t>> Partition::members() const {
    std::vector<std::vector<std::size_t>> out(count_);
    for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
    return out;
}

ZonePartition densify(const ZonePartition& p) {
    std::map<int, int> remap;
    ZonePartition out;
    for (const auto& [zone, label] : p) {
        auto [it, inserted] = remap.try_emplace(label, static_cast<int>(remap.size()));
        out.emplace_hint(out.end(), zone, it->second);
    }
    return out;
}

std::size_t region_count(const ZonePartition& p) {
    std::set<int> labels;
    for (const auto& [zone, label] : p) labels.insert(label);
    return labels.size();
}

ZonePartition to_zone_partition(const FlowNetwork& net, const Partition& p) {
    ZonePartition out;
    for (NodeIndex i = 0; i < net.size(); ++i) out.emplace(net.node_id(i), p[i]);
    return out;
}

Partition to_node_partition(const FlowNetwork& net, const ZonePartition& p) {
    std::vector<int> labels(net.size());
    std::vector<std::string> missing;
    for (NodeIndex i = 0; i < net.size(); ++i) {
        auto it = p.find(net.node_id(i));
        if (it == p.end()) {
            missing.push_back(net.node_id(i));
            continue;
        }
        labels[i] = it->second;
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
        if (missing.size() > 20) list += ", ...";
        throw InputError("coverage_mismatch",
                         std::to_string(missing.size()) + " zone(s) missing from partition: " + list);
    }
    return Partition(std::move(labels));
}

}  // namespace regionflow
