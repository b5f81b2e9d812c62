#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bikelab/errors.hpp"

// Polygon data model and the closed-form functionals used everywhere else:
// side data, perimeter, algebraic multi-area (odd n), shoelace area,
// alternating-sum vector (even n), and the midpoint-parent reconstruction.
//
// Conventions, fixed once for the whole project:
//   * vertices are stored 0-based; all index arithmetic is cyclic mod n;
//   * side i runs from vertex i-1 to vertex i, so lengths[i] = |v[i] - v[i-1]|
//     and units[i] is the unit vector from v[i-1] to v[i];
//   * det(u, v) = u.x * v.y - u.y * v.x, so counterclockwise simple polygons
//     have positive signed area.

namespace bikelab {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {}

    Point2& operator+=(const Point2& p) { x += p.x; y += p.y; return *this; }
    Point2& operator-=(const Point2& p) { x -= p.x; y -= p.y; return *this; }
    Point2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Point2 operator+(Point2 a, const Point2& b) { return a += b; }
inline Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
inline Point2 operator*(double s, Point2 p) { return p *= s; }
inline Point2 operator*(Point2 p, double s) { return p *= s; }
inline Point2 operator/(Point2 p, double s) { return p *= 1.0 / s; }
inline Point2 operator-(const Point2& p) { return {-p.x, -p.y}; }

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double det(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
inline bool finite(const Point2& a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Quarter-turn counterclockwise.
inline Point2 rot90(const Point2& a) { return {-a.y, a.x}; }

// Cyclically ordered vertex list. Self-intersections and non-consecutive
// coincidences are allowed; the polygons here are arbitrary closed polylines.
class Polygon {
public:
    explicit Polygon(std::vector<Point2> vertices);

    int size() const { return static_cast<int>(vertices_.size()); }
    const std::vector<Point2>& vertices() const { return vertices_; }

    // Plain 0-based access.
    const Point2& operator[](int i) const { return vertices_[static_cast<std::size_t>(i)]; }

    // Cyclic access: any integer index is reduced mod n.
    const Point2& vertex(int i) const {
        const int n = size();
        int k = i % n;
        if (k < 0) k += n;
        return vertices_[static_cast<std::size_t>(k)];
    }

    Point2 centroid() const;

    // Bounding-box diagonal; the length scale used for relative tolerances.
    double diameter() const;

    double min_side() const;

    // New polygon with the vertex order reversed (orientation flip).
    Polygon reversed() const;

    Polygon translated(const Point2& v) const;

private:
    std::vector<Point2> vertices_;
};

// Per-side lengths and unit directions; every other module consumes these
// instead of re-deriving edge vectors.
struct EdgeData {
    std::vector<double> lengths;  // lengths[i] = |v[i] - v[i-1]| > 0
    std::vector<Point2> units;    // units[i] = (v[i] - v[i-1]) / lengths[i]
};

// Sides below 1e-13 * diameter are treated as degenerate.
EdgeData edge_data(const Polygon& p);

double perimeter(const Polygon& p);

// Shoelace signed area, any n. Flips sign under vertex-order reversal.
double signed_area(const Polygon& p);

// Algebraic multi-area, odd n only. Translation invariant; for triangles it
// equals -2 * signed_area under the det convention above.
double multi_area(const Polygon& p);

// Alternating vertex sum v0 - v1 + v2 - ..., even n only. Origin independent.
Point2 alternating_sum(const Polygon& p);

// The unique polygon (odd n) whose side midpoints are p's vertices.
Polygon midpoint_parent(const Polygon& p);

// Midpoints of consecutive sides: result[i] = (v[i] + v[i+1]) / 2.
Polygon midpoints(const Polygon& p);

}  // namespace bikelab
