#pragma once
// Geodesic primitives: great-circle distance and point-to-polygon distance
// over (lat, lon) polygons. Containment is decided by ray casting in plain
// lat/lon space; exterior distance is the minimum haversine distance to 64
// sample points per polygon edge, which is within about a kilometre of the
// true geodesic for country-scale polygons.

#include <cmath>
#include <vector>

#include "laser/common.hpp"

namespace laser {

// Mean radius chosen so the half circumference lands on the 20015.09 km
// missing-distance sentinel used by the feature extractor.
constexpr double kEarthRadiusKm = 6371.0;
constexpr double kHalfCircumferenceKm = kEarthRadiusKm * 3.14159265358979323846;
constexpr int kEdgeSamples = 64;

struct Coord {
    double lat = 0.0;
    double lon = 0.0;

    bool operator==(const Coord&) const = default;
};

inline void check_coord(const Coord& c) {
    if (c.lat < -90.0 || c.lat > 90.0 || c.lon < -180.0 || c.lon > 180.0)
        throw DataError("coordinate out of range: (" + format_double(c.lat) + ", " +
                        format_double(c.lon) + ")");
}

// Ordered vertex list, implicitly closed (last connects back to first).
using Polygon = std::vector<Coord>;

inline double deg2rad(double d) { return d * (3.14159265358979323846 / 180.0); }

inline double haversine_km(const Coord& a, const Coord& b) {
    double phi1 = deg2rad(a.lat), phi2 = deg2rad(b.lat);
    double dphi = deg2rad(b.lat - a.lat);
    double dlambda = deg2rad(b.lon - a.lon);
    double s1 = std::sin(dphi / 2.0), s2 = std::sin(dlambda / 2.0);
    double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    h = std::min(1.0, std::max(0.0, h));
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

namespace detail {

// Point-on-segment test in lat/lon space, used for boundary containment.
inline bool on_segment(const Coord& p, const Coord& a, const Coord& b) {
    const double eps = 1e-12;
    double cross = (b.lat - a.lat) * (p.lon - a.lon) - (b.lon - a.lon) * (p.lat - a.lat);
    if (std::fabs(cross) > eps) return false;
    double dot = (p.lat - a.lat) * (b.lat - a.lat) + (p.lon - a.lon) * (b.lon - a.lon);
    if (dot < -eps) return false;
    double len2 = (b.lat - a.lat) * (b.lat - a.lat) + (b.lon - a.lon) * (b.lon - a.lon);
    return dot <= len2 + eps;
}

}  // namespace detail

// True if c is strictly inside or on the boundary of poly.
inline bool point_in_polygon(const Coord& c, const Polygon& poly) {
    if (poly.size() < 3) throw UsageError("polygon needs at least 3 vertices");
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        if (detail::on_segment(c, poly[i], poly[(i + 1) % n])) return true;
    }
    // Ray cast along +lon.
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Coord& a = poly[i];
        const Coord& b = poly[j];
        bool straddles = (a.lat > c.lat) != (b.lat > c.lat);
        if (straddles) {
            double x = (b.lon - a.lon) * (c.lat - a.lat) / (b.lat - a.lat) + a.lon;
            if (c.lon < x) inside = !inside;
        }
    }
    return inside;
}

// 0 if c is inside or on the boundary; otherwise the minimum haversine
// distance from c to the sampled polygon outline.
inline double point_to_polygon_km(const Coord& c, const Polygon& poly) {
    if (poly.size() < 3) throw UsageError("polygon needs at least 3 vertices");
    if (point_in_polygon(c, poly)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Coord& a = poly[i];
        const Coord& b = poly[(i + 1) % n];
        for (int s = 0; s < kEdgeSamples; ++s) {
            double t = static_cast<double>(s) / (kEdgeSamples - 1);
            Coord p{a.lat + t * (b.lat - a.lat), a.lon + t * (b.lon - a.lon)};
            best = std::min(best, haversine_km(c, p));
        }
    }
    return best;
}

}  // namespace laser
