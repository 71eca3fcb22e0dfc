#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "regionflow/network.hpp"
#include "regionflow/partition.hpp"

namespace fixtures {

/// Zero-padded ids so sorted id order equals index order.
inline std::string node_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "n%03d", i);
    return buf;
}

inline regionflow::FlowNetwork network(int n, const std::vector<oracle::Edge>& edges) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(node_name(i));
    std::vector<regionflow::WeightedEdge> we;
    for (const auto& e : edges)
        we.push_back({static_cast<regionflow::NodeIndex>(e.u), static_cast<regionflow::NodeIndex>(e.v), e.w});
    return regionflow::FlowNetwork(std::move(ids), we);
}

/// Two unit triangles {0,1,2}, {3,4,5} joined by the bridge 2-3.
inline std::vector<oracle::Edge> two_triangles() {
    return {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}};
}

/// Two disconnected unit-weight K4 cliques {0..3}, {4..7}.
inline std::vector<oracle::Edge> two_k4() {
    std::vector<oracle::Edge> e;
    for (int base : {0, 4})
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) e.push_back({base + a, base + b, 1.0});
    return e;
}

inline std::vector<oracle::Edge> k3() { return {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}; }

inline std::vector<int> labels_of(const regionflow::Partition& p) {
    return {p.labels().begin(), p.labels().end()};
}

}  // namespace fixtures
