#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace regionflow {

class FlowNetwork;

/// Node -> community assignment with dense labels 0..C-1, every label used.
/// Labels are renumbered in order of first appearance by node index.
class Partition {
public:
    Partition() = default;
    /// Throws InputError("invalid_partition") on negative labels.
    explicit Partition(std::vector<int> labels);

    static Partition singletons(std::size_t n);
    static Partition whole(std::size_t n);

    std::size_t size() const { return labels_.size(); }
    std::size_t community_count() const { return count_; }
    int operator[](std::size_t node) const { return labels_[node]; }
    std::span<const int> labels() const { return labels_; }

    /// Member node lists per community, each sorted ascending.
    std::vector<std::vector<std::size_t>> members() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> labels_;
    std::size_t count_ = 0;
};

/// Zone id -> region label; the exchange format between modules and files.
using ZonePartition = std::map<std::string, int>;

/// Renumbers labels densely by first appearance in zone-id order.
ZonePartition densify(const ZonePartition& p);
std::size_t region_count(const ZonePartition& p);

ZonePartition to_zone_partition(const FlowNetwork& net, const Partition& p);
/// Throws InputError("coverage_mismatch") if a node of `net` is missing from `p`.
Partition to_node_partition(const FlowNetwork& net, const ZonePartition& p);

}  // namespace regionflow
