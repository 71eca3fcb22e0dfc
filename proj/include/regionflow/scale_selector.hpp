#pragma once

#include <span>
#include <vector>

#include "regionflow/louvain.hpp"

namespace regionflow {

enum class CutProvenance { dendrogram_level, greedy_merge };

struct ScaleCut {
    std::size_t k = 0;
    Partition partition;  // over the zone network's nodes
    double modularity = 0.0;
    CutProvenance provenance = CutProvenance::dendrogram_level;
};

struct CurvePoint {
    std::size_t k = 0;
    double modularity = 0.0;
    CutProvenance provenance = CutProvenance::dendrogram_level;
};

struct ModularityCurve {
    std::vector<CurvePoint> points;  // ascending k
    std::size_t best_k = 0;          // argmax Q; ties go to the smaller k
    double best_modularity = 0.0;
};

/// Zone-level partition at `level`. Throws InputError("out_of_range").
Partition cut_at_level(const Dendrogram& d, std::size_t level);

/// Partition with exactly k regions. Starts from the recorded level whose
/// community count is the smallest one still >= k (all singletons if none is),
/// then greedily merges the connected community pair with the largest merge
/// gain until k remain. With no connected pair left, the pair with the least
/// negative gain merges. Ties: smallest (label_a, label_b).
/// Throws InputError("out_of_range") unless 1 <= k <= zone count.
ScaleCut cut_to_k(const FlowNetwork& net, const Dendrogram& d, std::size_t k);
ScaleCut cut_to_k(const FlowNetwork& net, std::span<const Partition> levels, std::size_t k);

/// Q for every k in [k_min, k_max]; equal to cut_to_k pointwise, with each
/// run of k values that share a starting level served by one merge sequence.
ModularityCurve modularity_curve(const FlowNetwork& net, const Dendrogram& d, std::size_t k_min,
                                 std::size_t k_max);
ModularityCurve modularity_curve(const FlowNetwork& net, std::span<const Partition> levels,
                                 std::size_t k_min, std::size_t k_max);

const char* to_string(CutProvenance p);

}  // namespace regionflow
