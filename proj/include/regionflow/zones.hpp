#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace regionflow {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

struct ZoneAttribute {
    double population = 0.0;
    std::optional<Point> centroid;
};

/// Declared zone universe: zone id -> population and optional centroid.
using ZoneAttributes = std::map<std::string, ZoneAttribute>;

/// Symmetric zone adjacency (rook contiguity). No zone lists itself.
using AdjacencyMap = std::map<std::string, std::set<std::string>>;

/// Builds a symmetric adjacency map from undirected pairs. Self pairs are
/// rejected with InputError("malformed_record").
AdjacencyMap make_adjacency(const std::vector<std::pair<std::string, std::string>>& pairs);

/// True when b in adj(a) <=> a in adj(b) and no zone is its own neighbor.
bool is_symmetric(const AdjacencyMap& adj);

}  // namespace regionflow
