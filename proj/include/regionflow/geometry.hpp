#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "regionflow/partition.hpp"
#include "regionflow/zones.hpp"

namespace regionflow {

/// Closed ring: first vertex equals last.
using Ring = std::vector<Point>;

struct Polygon {
    Ring outer;
    std::vector<Ring> holes;
};

/// Planar zone geometry in a projected CRS. Shared borders between zones must
/// be represented by exactly coincident vertex sequences.
struct ZoneGeometry {
    std::string zone_id;
    std::vector<Polygon> polygons;
};

struct BlockPoint {
    Point location;
    double population = 0.0;
};

struct RegionShape {
    double perimeter = 0.0;
    double area = 0.0;
};

/// Shoelace signed area (counter-clockwise positive).
double signed_area(const Ring& ring);
/// Outer areas minus hole areas, in absolute terms.
double zone_area(const ZoneGeometry& g);
/// Throws InputError("invalid_geometry") naming the zone for open rings,
/// rings with fewer than four vertices, or zero-area outer rings.
void validate(const ZoneGeometry& g);

/// Region perimeter and area. Area sums member areas; perimeter sums every
/// boundary segment (keyed by its unordered endpoint pair) that occurs exactly
/// once among the region's rings. Zones absent from `p` are ignored.
std::map<int, RegionShape> dissolve(std::span<const ZoneGeometry> geoms, const ZonePartition& p);

/// Perimeter-area corrected compactness P / (3.54 sqrt(A)).
/// Throws InputError("invalid_geometry") unless P > 0 and A > 0.
double compactness(double perimeter, double area);

/// Rook contiguity: zones sharing at least one boundary segment. Zones with no
/// neighbor still appear, with an empty set.
AdjacencyMap zone_adjacency(std::span<const ZoneGeometry> geoms);

/// Population-weighted mean location. Throws InputError("zero_population").
Point weighted_centroid(std::span<const BlockPoint> points);
/// Unweighted mean of the outer ring vertices (closing vertex excluded).
Point vertex_centroid(const ZoneGeometry& g);

}  // namespace regionflow
