#include "regionflow/zones.hpp"

#include "regionflow/error.hpp"

namespace regionflow {

AdjacencyMap make_adjacency(const std::vector<std::pair<std::string, std::string>>& pairs) {
    AdjacencyMap adj;
    for (const auto& [a, b] : pairs) {
        if (a.empty() || b.empty())
            throw InputError("malformed_record", "adjacency pair with an empty zone id");
        if (a == b) throw InputError("malformed_record", "zone '" + a + "' listed as its own neighbor");
        adj[a].insert(b);
        adj[b].insert(a);
    }
    return adj;
}

bool is_symmetric(const AdjacencyMap& adj) {
    for (const auto& [zone, neighbors] : adj) {
        for (const auto& n : neighbors) {
            if (n == zone) return false;
            auto it = adj.find(n);
            if (it == adj.end() || !it->second.contains(zone)) return false;
        }
    }
    return true;
}

}  // namespace regionflow
