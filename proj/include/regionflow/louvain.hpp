#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regionflow/network.hpp"
#include "regionflow/partition.hpp"

namespace regionflow {

/// Modularity of `p` on `net`, computed from per-community sums:
///   Q = sum_c [ sigma_in(c) / 2m - (sigma_tot(c) / 2m)^2 ]
/// where sigma_in counts each internal pair edge twice and each self-loop twice.
/// Throws InputError("empty_network") when m == 0 and
/// InputError("coverage_mismatch") when p does not cover the nodes.
double modularity(const FlowNetwork& net, const Partition& p);

/// Incremental community bookkeeping for local moves.
///
/// sigma_in(c): sum of A_ij over i, j in c (pair edges twice, self-loops twice).
/// sigma_tot(c): sum of member degrees.
/// Labels range over [0, node count); unused labels are empty communities.
class CommunityState {
public:
    CommunityState(const FlowNetwork& net, const Partition& p);

    const FlowNetwork& network() const { return *net_; }
    std::size_t capacity() const { return sigma_tot_.size(); }
    int community_of(NodeIndex node) const { return label_[node]; }
    bool attached(NodeIndex node) const { return attached_[node] != 0; }
    double sigma_in(int c) const { return sigma_in_.at(static_cast<std::size_t>(c)); }
    double sigma_tot(int c) const { return sigma_tot_.at(static_cast<std::size_t>(c)); }

    /// Total weight of pair edges from `node` to current members of `c`
    /// (the node itself and its self-loop excluded).
    double weight_to(NodeIndex node, int c) const;

    /// Gain of inserting a detached node into `c` given its weight to `c`:
    ///   2 k_i,in / 2m - 2 sigma_tot(c) k_i / (2m)^2
    /// The node's own singleton contribution cancels out of every move.
    double insertion_gain(NodeIndex node, int c, double k_i_in) const;

    /// Exact change in Q from moving `node` out of its community into `target`.
    /// Works for attached and detached nodes. Throws std::out_of_range for an
    /// unknown label.
    double move_gain(NodeIndex node, int target) const;

    void remove(NodeIndex node);
    void insert(NodeIndex node, int c);
    void move(NodeIndex node, int target);

    /// Q from the maintained sums.
    double modularity() const;
    /// Current assignment, densified. All nodes must be attached.
    Partition partition() const;

private:
    void check_label(int c) const;

    const FlowNetwork* net_;
    double two_m_;
    std::vector<int> label_;
    std::vector<char> attached_;
    std::vector<double> sigma_in_;
    std::vector<double> sigma_tot_;
};

enum class NodeOrder { sorted_id, seeded_shuffle };

struct LouvainOptions {
    NodeOrder order = NodeOrder::sorted_id;
    /// Required iff order == seeded_shuffle.
    std::optional<std::uint64_t> seed;
    /// A level is recorded only if it raises Q by at least this much.
    double min_gain = 1e-9;
    std::optional<std::size_t> max_levels;

    /// Throws InputError("config_error") on inconsistent fields.
    void validate() const;
};

/// Local-moving phase from singletons. Nodes are visited in the configured
/// order; each moves to the neighbouring community with the largest strictly
/// positive gain (ties: smallest label). Sweeps repeat until one makes no move.
Partition phase_one(const FlowNetwork& net, const LouvainOptions& options);

/// Collapses each community into a super-node. Crossing weights are summed,
/// internal weight (old self-loops included) becomes the super-node self-loop.
/// Super-node i corresponds to label i; ids are the decimal labels.
FlowNetwork aggregate(const FlowNetwork& net, const Partition& p);

struct DendrogramLevel {
    /// Network this level's local moving ran on (level 0: the zone network).
    FlowNetwork network;
    /// Partition of `network`'s nodes.
    Partition partition;
    /// Composed partition of the original zones.
    Partition zone_partition;
    double modularity = 0.0;
};

struct Dendrogram {
    std::vector<std::string> zones;
    /// Q of the all-singletons partition, the baseline the first level must beat.
    double singleton_modularity = 0.0;
    std::vector<DendrogramLevel> levels;

    std::size_t level_count() const { return levels.size(); }
    std::vector<Partition> zone_partitions() const;
};

/// Alternates phase_one and aggregate, recording each level that changes the
/// partition and improves Q by at least min_gain.
/// Throws InputError("empty_network") for an empty or weightless network.
Dendrogram run_louvain(const FlowNetwork& net, const LouvainOptions& options = {});

}  // namespace regionflow
