#include "regionflow/louvain.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

#include "regionflow/error.hpp"
#include "regionflow/rng.hpp"

namespace regionflow {

namespace {

constexpr std::size_t kMaxSweeps = 10000;

void require_weight(const FlowNetwork& net) {
    if (net.empty() || !(net.total_weight() > 0.0))
        throw InputError("empty_network", "network has no nodes or zero total weight");
}

}  // namespace

double modularity(const FlowNetwork& net, const Partition& p) {
    require_weight(net);
    if (p.size() != net.size())
        throw InputError("coverage_mismatch", "partition covers " + std::to_string(p.size()) +
                                                  " nodes, network has " + std::to_string(net.size()));
    const std::size_t c = p.community_count();
    std::vector<double> in(c, 0.0), tot(c, 0.0);
    for (NodeIndex i = 0; i < net.size(); ++i) {
        const int ci = p[i];
        tot[ci] += net.degree(i);
        in[ci] += 2.0 * net.self_loop(i);
        for (const auto& nb : net.neighbors(i))
            if (p[nb.node] == ci) in[ci] += nb.weight;
    }
    const double two_m = 2.0 * net.total_weight();
    double q = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
        const double frac = tot[k] / two_m;
        q += in[k] / two_m - frac * frac;
    }
    return q;
}

// ---------------------------------------------------------------------------
// CommunityState

CommunityState::CommunityState(const FlowNetwork& net, const Partition& p)
    : net_(&net), two_m_(2.0 * net.total_weight()) {
    require_weight(net);
    if (p.size() != net.size())
        throw InputError("coverage_mismatch", "partition does not match network size");
    const std::size_t n = net.size();
    label_.assign(p.labels().begin(), p.labels().end());
    attached_.assign(n, 1);
    sigma_in_.assign(n, 0.0);
    sigma_tot_.assign(n, 0.0);
    for (NodeIndex i = 0; i < n; ++i) {
        const int c = label_[i];
        sigma_tot_[c] += net.degree(i);
        sigma_in_[c] += 2.0 * net.self_loop(i);
        for (const auto& nb : net.neighbors(i))
            if (label_[nb.node] == c) sigma_in_[c] += nb.weight;
    }
}

void CommunityState::check_label(int c) const {
    if (c < 0 || static_cast<std::size_t>(c) >= capacity())
        throw std::out_of_range("unknown community label " + std::to_string(c));
}

double CommunityState::weight_to(NodeIndex node, int c) const {
    check_label(c);
    double w = 0.0;
    for (const auto& nb : net_->neighbors(node))
        if (attached_[nb.node] && label_[nb.node] == c) w += nb.weight;
    return w;
}

double CommunityState::insertion_gain(NodeIndex node, int c, double k_i_in) const {
    check_label(c);
    const double k_i = net_->degree(node);
    return 2.0 * k_i_in / two_m_ - 2.0 * sigma_tot_[c] * k_i / (two_m_ * two_m_);
}

double CommunityState::move_gain(NodeIndex node, int target) const {
    check_label(target);
    const int source = label_[node];
    if (target == source) return 0.0;
    const double k_i = net_->degree(node);
    const double to_target = weight_to(node, target);
    const double to_source = weight_to(node, source);
    // Source sums as if the node were already detached.
    const double source_tot = sigma_tot_[source] - (attached_[node] ? k_i : 0.0);
    const double back = 2.0 * to_source / two_m_ - 2.0 * source_tot * k_i / (two_m_ * two_m_);
    return insertion_gain(node, target, to_target) - back;
}

void CommunityState::remove(NodeIndex node) {
    if (!attached_[node]) return;
    const int c = label_[node];
    const double k_in = weight_to(node, c);
    sigma_in_[c] -= 2.0 * k_in + 2.0 * net_->self_loop(node);
    sigma_tot_[c] -= net_->degree(node);
    attached_[node] = 0;
}

void CommunityState::insert(NodeIndex node, int c) {
    check_label(c);
    if (attached_[node]) remove(node);
    const double k_in = weight_to(node, c);
    sigma_in_[c] += 2.0 * k_in + 2.0 * net_->self_loop(node);
    sigma_tot_[c] += net_->degree(node);
    label_[node] = c;
    attached_[node] = 1;
}

void CommunityState::move(NodeIndex node, int target) {
    check_label(target);
    remove(node);
    insert(node, target);
}

double CommunityState::modularity() const {
    double q = 0.0;
    for (std::size_t c = 0; c < capacity(); ++c) {
        if (sigma_tot_[c] == 0.0 && sigma_in_[c] == 0.0) continue;
        const double frac = sigma_tot_[c] / two_m_;
        q += sigma_in_[c] / two_m_ - frac * frac;
    }
    return q;
}

Partition CommunityState::partition() const {
    for (auto a : attached_)
        if (!a) throw std::logic_error("partition() with a detached node");
    return Partition(label_);
}

// ---------------------------------------------------------------------------
// Louvain phases

void LouvainOptions::validate() const {
    if (order == NodeOrder::seeded_shuffle && !seed)
        throw InputError("config_error", "seeded-shuffle node order requires a seed");
    if (order == NodeOrder::sorted_id && seed)
        throw InputError("config_error", "a seed is only meaningful with seeded-shuffle order");
    if (!(min_gain >= 0.0)) throw InputError("config_error", "min_gain must be nonnegative");
    if (max_levels && *max_levels == 0) throw InputError("config_error", "max_levels must be >= 1");
}

Partition phase_one(const FlowNetwork& net, const LouvainOptions& options) {
    options.validate();
    const std::size_t n = net.size();
    CommunityState state(net, Partition::singletons(n));

    std::vector<NodeIndex> order(n);
    std::iota(order.begin(), order.end(), NodeIndex{0});
    if (options.order == NodeOrder::seeded_shuffle) {
        std::mt19937_64 gen(*options.seed);
        rng::shuffle(std::span<NodeIndex>(order), gen);
    }

    std::vector<double> weight(n, 0.0);
    std::vector<char> seen(n, 0);
    std::vector<int> touched;

    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        std::size_t moves = 0;
        for (NodeIndex node : order) {
            const int source = state.community_of(node);
            touched.clear();
            for (const auto& nb : net.neighbors(node)) {
                const int c = state.community_of(nb.node);
                if (!seen[c]) {
                    seen[c] = 1;
                    touched.push_back(c);
                }
                weight[c] += nb.weight;
            }

            state.remove(node);
            const double back = state.insertion_gain(node, source, weight[source]);
            int best = source;
            double best_gain = 0.0;
            for (int c : touched) {
                if (c == source) continue;
                const double gain = state.insertion_gain(node, c, weight[c]) - back;
                if (gain > best_gain || (gain == best_gain && best != source && c < best)) {
                    best = c;
                    best_gain = gain;
                }
            }
            state.insert(node, best);
            if (best != source) ++moves;

            for (int c : touched) {
                seen[c] = 0;
                weight[c] = 0.0;
            }
        }
        if (moves == 0) break;
    }
    return state.partition();
}

FlowNetwork aggregate(const FlowNetwork& net, const Partition& p) {
    if (p.size() != net.size())
        throw InputError("coverage_mismatch", "partition does not match network size");
    std::vector<WeightedEdge> edges;
    for (const auto& e : net.edges())
        edges.push_back({static_cast<NodeIndex>(p[e.u]), static_cast<NodeIndex>(p[e.v]), e.weight});
    std::vector<std::string> ids;
    ids.reserve(p.community_count());
    for (std::size_t c = 0; c < p.community_count(); ++c) ids.push_back(std::to_string(c));
    return FlowNetwork(std::move(ids), edges);
}

std::vector<Partition> Dendrogram::zone_partitions() const {
    std::vector<Partition> out;
    out.reserve(levels.size());
    for (const auto& l : levels) out.push_back(l.zone_partition);
    return out;
}

Dendrogram run_louvain(const FlowNetwork& net, const LouvainOptions& options) {
    options.validate();
    require_weight(net);

    Dendrogram d;
    d.zones.assign(net.node_ids().begin(), net.node_ids().end());
    d.singleton_modularity = modularity(net, Partition::singletons(net.size()));

    // zone -> node of the current (aggregated) network
    std::vector<int> zone_node(net.size());
    std::iota(zone_node.begin(), zone_node.end(), 0);

    FlowNetwork current = net;
    double previous_q = d.singleton_modularity;
    for (std::size_t level = 0; !options.max_levels || level < *options.max_levels; ++level) {
        LouvainOptions level_options = options;
        if (options.seed) level_options.seed = rng::mix(*options.seed + level);
        Partition p = phase_one(current, level_options);
        if (p.community_count() == current.size()) break;

        std::vector<int> composed(zone_node.size());
        for (std::size_t z = 0; z < zone_node.size(); ++z) composed[z] = p[zone_node[z]];
        Partition zone_partition(composed);
        const double q = modularity(net, zone_partition);
        if (q - previous_q < options.min_gain) break;

        zone_node = std::move(composed);
        previous_q = q;
        const bool single = p.community_count() == 1;
        FlowNetwork next = single ? FlowNetwork() : aggregate(current, p);
        d.levels.push_back({std::move(current), std::move(p), std::move(zone_partition), q});
        if (single) break;
        current = std::move(next);
    }
    return d;
}

}  // namespace regionflow
