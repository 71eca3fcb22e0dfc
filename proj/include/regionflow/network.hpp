#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regionflow/flow_ingest.hpp"

namespace regionflow {

using NodeIndex = std::uint32_t;

struct WeightedEdge {
    NodeIndex u = 0;
    NodeIndex v = 0;
    double weight = 0.0;
};

struct Neighbor {
    NodeIndex node = 0;
    double weight = 0.0;
};

/// Undirected weighted graph with self-loops, stored as compressed adjacency.
///
/// Degree convention: a self-loop of weight w adds 2w to the node degree
/// (matrix convention A_ii = 2w), so sum of degrees = 2m where m is the sum of
/// distinct-pair edge weights plus self-loop weights.
class FlowNetwork {
public:
    FlowNetwork() = default;
    /// Parallel edges are summed; u == v edges become self-loops.
    /// Throws InputError on out-of-range endpoints or negative weights.
    FlowNetwork(std::vector<std::string> node_ids, std::span<const WeightedEdge> edges);

    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    const std::string& node_id(NodeIndex i) const { return ids_[i]; }
    std::span<const std::string> node_ids() const { return ids_; }
    std::optional<NodeIndex> find(std::string_view id) const;

    /// Distinct neighbours of i (self excluded), sorted by index.
    std::span<const Neighbor> neighbors(NodeIndex i) const {
        return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
    }
    double self_loop(NodeIndex i) const { return self_[i]; }
    double degree(NodeIndex i) const { return degree_[i]; }
    /// m: distinct-pair weights plus self-loop weights.
    double total_weight() const { return m_; }
    /// Number of distinct non-loop edges.
    std::size_t edge_count() const { return adj_.size() / 2; }

    /// Weight between i and j (self-loop weight when i == j); 0 when absent.
    double weight(NodeIndex i, NodeIndex j) const;
    /// Distinct edges (u <= v) in canonical order, self-loops included.
    std::vector<WeightedEdge> edges() const;

private:
    std::vector<std::string> ids_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adj_;
    std::vector<double> self_;
    std::vector<double> degree_;
    double m_ = 0.0;
    bool sorted_ids_ = false;
};

/// Maps each directed flow to the hospital's home zone (via the roster) and
/// symmetrizes: the undirected weight of {a, b} is the sum of flows in both
/// directions. Nodes are all zones referenced by the table, sorted by id.
/// Throws InputError("hospital_not_in_roster") naming the hospital.
FlowNetwork build_network(const FlowTable& table, const HospitalRoster& roster);

}  // namespace regionflow
