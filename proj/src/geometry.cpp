#include "regionflow/geometry.hpp"

#include <cmath>
#include <utility>

#include "regionflow/error.hpp"

namespace regionflow {

namespace {

using Segment = std::pair<Point, Point>;

Segment segment_key(Point a, Point b) { return a < b ? Segment{a, b} : Segment{b, a}; }

double length(const Segment& s) { return std::hypot(s.second.x - s.first.x, s.second.y - s.first.y); }

template <typename F>
void for_each_ring(const ZoneGeometry& g, F&& f) {
    for (const auto& poly : g.polygons) {
        f(poly.outer);
        for (const auto& h : poly.holes) f(h);
    }
}

template <typename F>
void for_each_segment(const ZoneGeometry& g, F&& f) {
    for_each_ring(g, [&](const Ring& r) {
        for (std::size_t i = 0; i + 1 < r.size(); ++i)
            if (!(r[i] == r[i + 1])) f(segment_key(r[i], r[i + 1]));
    });
}

}  // namespace

double signed_area(const Ring& ring) {
    double twice = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        twice += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    return 0.5 * twice;
}

double zone_area(const ZoneGeometry& g) {
    double a = 0.0;
    for (const auto& poly : g.polygons) {
        a += std::abs(signed_area(poly.outer));
        for (const auto& h : poly.holes) a -= std::abs(signed_area(h));
    }
    return a;
}

void validate(const ZoneGeometry& g) {
    if (g.polygons.empty()) throw InputError("invalid_geometry", "zone '" + g.zone_id + "' has no polygon");
    for_each_ring(g, [&](const Ring& r) {
        if (r.size() < 4 || !(r.front() == r.back()))
            throw InputError("invalid_geometry", "zone '" + g.zone_id + "' has an open or degenerate ring");
    });
    for (const auto& poly : g.polygons)
        if (signed_area(poly.outer) == 0.0)
            throw InputError("invalid_geometry", "zone '" + g.zone_id + "' has a zero-area ring");
}

std::map<int, RegionShape> dissolve(std::span<const ZoneGeometry> geoms, const ZonePartition& p) {
    std::map<int, std::map<Segment, int>> segments;
    std::map<int, RegionShape> out;
    for (const auto& g : geoms) {
        auto it = p.find(g.zone_id);
        if (it == p.end()) continue;
        validate(g);
        out[it->second].area += zone_area(g);
        auto& counts = segments[it->second];
        for_each_segment(g, [&](const Segment& s) { ++counts[s]; });
    }
    for (const auto& [region, counts] : segments) {
        double perimeter = 0.0;
        for (const auto& [seg, n] : counts)
            if (n == 1) perimeter += length(seg);
        out[region].perimeter = perimeter;
    }
    return out;
}

double compactness(double perimeter, double area) {
    if (!(perimeter > 0.0) || !(area > 0.0))
        throw InputError("invalid_geometry", "compactness needs positive perimeter and area");
    return perimeter / (3.54 * std::sqrt(area));
}

AdjacencyMap zone_adjacency(std::span<const ZoneGeometry> geoms) {
    std::map<Segment, std::vector<std::size_t>> owners;
    AdjacencyMap adj;
    for (std::size_t i = 0; i < geoms.size(); ++i) {
        validate(geoms[i]);
        adj[geoms[i].zone_id];
        for_each_segment(geoms[i], [&](const Segment& s) {
            auto& o = owners[s];
            if (o.empty() || o.back() != i) o.push_back(i);
        });
    }
    for (const auto& [seg, zones] : owners) {
        for (std::size_t a = 0; a < zones.size(); ++a)
            for (std::size_t b = a + 1; b < zones.size(); ++b) {
                const auto& za = geoms[zones[a]].zone_id;
                const auto& zb = geoms[zones[b]].zone_id;
                if (za == zb) continue;
                adj[za].insert(zb);
                adj[zb].insert(za);
            }
    }
    return adj;
}

Point weighted_centroid(std::span<const BlockPoint> points) {
    double total = 0.0, x = 0.0, y = 0.0;
    for (const auto& p : points) {
        if (p.population < 0.0) throw InputError("malformed_record", "negative block population");
        total += p.population;
        x += p.population * p.location.x;
        y += p.population * p.location.y;
    }
    if (!(total > 0.0)) throw InputError("zero_population", "block points carry no population");
    return {x / total, y / total};
}

Point vertex_centroid(const ZoneGeometry& g) {
    double x = 0.0, y = 0.0;
    std::size_t n = 0;
    for (const auto& poly : g.polygons) {
        for (std::size_t i = 0; i + 1 < poly.outer.size(); ++i) {
            x += poly.outer[i].x;
            y += poly.outer[i].y;
            ++n;
        }
    }
    if (n == 0) throw InputError("invalid_geometry", "zone '" + g.zone_id + "' has no vertices");
    return {x / static_cast<double>(n), y / static_cast<double>(n)};
}

}  // namespace regionflow
