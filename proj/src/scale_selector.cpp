#include "regionflow/scale_selector.hpp"

#include <functional>
#include <limits>
#include <map>
#include <optional>

#include "regionflow/error.hpp"

namespace regionflow {

namespace {

void check_levels(const FlowNetwork& net, std::span<const Partition> levels) {
    for (const auto& l : levels)
        if (l.size() != net.size())
            throw InputError("coverage_mismatch", "dendrogram level does not cover the network zones");
}

void check_k(const FlowNetwork& net, std::size_t k, const char* what) {
    if (k < 1 || k > net.size())
        throw InputError("out_of_range", std::string(what) + " = " + std::to_string(k) +
                                             " outside [1, " + std::to_string(net.size()) + "]");
}

/// Index of the coarsest level still having >= k communities; nullopt means
/// start from singletons.
std::optional<std::size_t> start_level(std::span<const Partition> levels, std::size_t k) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto c = levels[i].community_count();
        if (c >= k && (!best || c < levels[*best].community_count())) best = i;
    }
    return best;
}

using Snapshot = std::function<void(std::size_t k, Partition p, CutProvenance how)>;

/// Greedy agglomeration from `start`, reporting every community count in
/// [k_low, k_high] (including the start itself when it falls in range).
void merge_down(const FlowNetwork& net, const Partition& start, bool start_is_level,
                std::size_t k_low, std::size_t k_high, const Snapshot& snapshot) {
    const std::size_t c0 = start.community_count();
    if (c0 >= k_low && c0 <= k_high)
        snapshot(c0, start, start_is_level ? CutProvenance::dendrogram_level : CutProvenance::greedy_merge);
    if (c0 <= k_low) return;

    const FlowNetwork super = aggregate(net, start);
    const double m = net.total_weight();
    const double two_m_sq = 2.0 * m * m;

    std::vector<char> alive(c0, 1);
    std::vector<double> tot(c0);
    std::vector<std::map<int, double>> links(c0);
    std::vector<int> owner(c0);
    for (NodeIndex c = 0; c < c0; ++c) {
        tot[c] = super.degree(c);
        owner[c] = static_cast<int>(c);
        for (const auto& nb : super.neighbors(c))
            if (nb.weight > 0.0) links[c].emplace(static_cast<int>(nb.node), nb.weight);
    }
    auto find = [&](int c) {
        while (owner[c] != c) c = owner[c] = owner[owner[c]];
        return c;
    };

    for (std::size_t count = c0; count > k_low; --count) {
        int best_a = -1, best_b = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        // Scanning a and b ascending makes the first maximum the lexicographically smallest pair.
        for (int a = 0; a < static_cast<int>(c0); ++a) {
            if (!alive[a]) continue;
            for (auto it = links[a].upper_bound(a); it != links[a].end(); ++it) {
                const double gain = it->second / m - tot[a] * tot[it->first] / two_m_sq;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_a = a;
                    best_b = it->first;
                }
            }
        }
        if (best_a < 0) {
            for (int a = 0; a < static_cast<int>(c0); ++a) {
                if (!alive[a]) continue;
                for (int b = a + 1; b < static_cast<int>(c0); ++b) {
                    if (!alive[b]) continue;
                    const double gain = -tot[a] * tot[b] / two_m_sq;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_a = a;
                        best_b = b;
                    }
                }
            }
        }

        // Merge b into a; the merged community keeps the smaller label a.
        alive[best_b] = 0;
        owner[best_b] = best_a;
        tot[best_a] += tot[best_b];
        for (const auto& [c, w] : links[best_b]) {
            if (c == best_a) continue;
            links[best_a][c] += w;
            links[c].erase(best_b);
            links[c][best_a] += w;
        }
        links[best_a].erase(best_b);
        links[best_b].clear();

        const std::size_t remaining = count - 1;
        if (remaining <= k_high) {
            std::vector<int> labels(net.size());
            for (std::size_t z = 0; z < net.size(); ++z) labels[z] = find(start[z]);
            snapshot(remaining, Partition(std::move(labels)), CutProvenance::greedy_merge);
        }
    }
}

}  // namespace

const char* to_string(CutProvenance p) {
    return p == CutProvenance::dendrogram_level ? "dendrogram-level" : "greedy-merge";
}

Partition cut_at_level(const Dendrogram& d, std::size_t level) {
    if (level >= d.level_count())
        throw InputError("out_of_range", "level " + std::to_string(level) + " outside [0, " +
                                             std::to_string(d.level_count()) + ")");
    return d.levels[level].zone_partition;
}

ScaleCut cut_to_k(const FlowNetwork& net, const Dendrogram& d, std::size_t k) {
    const auto levels = d.zone_partitions();
    return cut_to_k(net, levels, k);
}

ScaleCut cut_to_k(const FlowNetwork& net, std::span<const Partition> levels, std::size_t k) {
    check_levels(net, levels);
    check_k(net, k, "k");
    ScaleCut cut;
    cut.k = k;
    auto start = start_level(levels, k);
    const Partition origin = start ? levels[*start] : Partition::singletons(net.size());
    merge_down(net, origin, start.has_value(), k, k, [&](std::size_t, Partition p, CutProvenance how) {
        cut.partition = std::move(p);
        cut.provenance = how;
    });
    cut.modularity = modularity(net, cut.partition);
    return cut;
}

ModularityCurve modularity_curve(const FlowNetwork& net, const Dendrogram& d, std::size_t k_min,
                                 std::size_t k_max) {
    const auto levels = d.zone_partitions();
    return modularity_curve(net, levels, k_min, k_max);
}

ModularityCurve modularity_curve(const FlowNetwork& net, std::span<const Partition> levels,
                                 std::size_t k_min, std::size_t k_max) {
    check_levels(net, levels);
    check_k(net, k_min, "k_min");
    check_k(net, k_max, "k_max");
    if (k_min > k_max) throw InputError("out_of_range", "k_min exceeds k_max");

    // Group k values by starting level; -1 stands for the singleton start.
    std::map<long, std::pair<std::size_t, std::size_t>> groups;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        auto s = start_level(levels, k);
        const long key = s ? static_cast<long>(*s) : -1;
        auto [it, inserted] = groups.try_emplace(key, k, k);
        if (!inserted) {
            it->second.first = std::min(it->second.first, k);
            it->second.second = std::max(it->second.second, k);
        }
    }

    std::map<std::size_t, CurvePoint> points;
    for (const auto& [key, range] : groups) {
        const Partition origin = key >= 0 ? levels[key] : Partition::singletons(net.size());
        merge_down(net, origin, key >= 0, range.first, range.second,
                   [&](std::size_t k, Partition p, CutProvenance how) {
                       points[k] = {k, modularity(net, p), how};
                   });
    }

    ModularityCurve curve;
    for (const auto& [k, pt] : points) {
        curve.points.push_back(pt);
        if (curve.points.size() == 1 || pt.modularity > curve.best_modularity) {
            curve.best_k = k;
            curve.best_modularity = pt.modularity;
        }
    }
    return curve;
}

}  // namespace regionflow
