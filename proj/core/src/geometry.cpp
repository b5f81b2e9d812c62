#include "bikelab/geometry.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace bikelab {

namespace {
constexpr double kSideDegeneracyRel = 1e-13;
}

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
        throw Error("polygon needs at least 3 vertices, got " + std::to_string(vertices_.size()));
    }
    for (const Point2& v : vertices_) {
        if (!finite(v)) throw Error("polygon vertex is not finite");
    }
}

Point2 Polygon::centroid() const {
    Point2 c;
    for (const Point2& v : vertices_) c += v;
    return c / static_cast<double>(size());
}

double Polygon::diameter() const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = xmax;
    for (const Point2& v : vertices_) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

double Polygon::min_side() const {
    const int n = size();
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        m = std::min(m, distance(vertices_[static_cast<std::size_t>(i)], vertex(i - 1)));
    }
    return m;
}

Polygon Polygon::reversed() const {
    std::vector<Point2> rev(vertices_.rbegin(), vertices_.rend());
    return Polygon(std::move(rev));
}

Polygon Polygon::translated(const Point2& v) const {
    std::vector<Point2> out = vertices_;
    for (Point2& p : out) p += v;
    return Polygon(std::move(out));
}

EdgeData edge_data(const Polygon& p) {
    const int n = p.size();
    const double floor_len = kSideDegeneracyRel * p.diameter();
    EdgeData e;
    e.lengths.resize(static_cast<std::size_t>(n));
    e.units.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Point2 d = p[i] - p.vertex(i - 1);
        const double len = norm(d);
        if (len <= floor_len) {
            throw DegenerateSide("side " + std::to_string(i) + " has length " +
                                 std::to_string(len) + " below threshold");
        }
        e.lengths[static_cast<std::size_t>(i)] = len;
        e.units[static_cast<std::size_t>(i)] = d / len;
    }
    return e;
}

double perimeter(const Polygon& p) {
    const int n = p.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += distance(p[i], p.vertex(i - 1));
    return s;
}

double signed_area(const Polygon& p) {
    const int n = p.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += det(p[i], p.vertex(i + 1));
    return 0.5 * s;
}

double multi_area(const Polygon& p) {
    const int n = p.size();
    if (n % 2 == 0) throw EvenGon("multi_area requires an odd-gon, got n = " + std::to_string(n));
    // Single-sum form: sum over diagonal offsets k = 1 .. (n-1)/2 of
    // (-1)^k * sum_i det(v_i, v_{i+k}).
    double total = 0.0;
    for (int k = 1; k <= (n - 1) / 2; ++k) {
        double ring = 0.0;
        for (int i = 0; i < n; ++i) ring += det(p[i], p.vertex(i + k));
        total += (k % 2 == 0) ? ring : -ring;
    }
    return total;
}

Point2 alternating_sum(const Polygon& p) {
    const int n = p.size();
    if (n % 2 != 0) throw OddGon("alternating_sum requires an even-gon, got n = " + std::to_string(n));
    Point2 s;
    for (int i = 0; i < n; ++i) {
        s += (i % 2 == 0) ? p[i] : -p[i];
    }
    return s;
}

Polygon midpoint_parent(const Polygon& p) {
    const int n = p.size();
    if (n % 2 == 0) throw EvenGon("midpoint_parent requires an odd-gon, got n = " + std::to_string(n));
    // Unique solution of (s_i + s_{i+1}) / 2 = v_i for odd n:
    // s_i = sum_{j=0}^{n-1} (-1)^j v_{i+j}.
    std::vector<Point2> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Point2 s;
        for (int j = 0; j < n; ++j) {
            const Point2& v = p.vertex(i + j);
            s += (j % 2 == 0) ? v : -v;
        }
        parent[static_cast<std::size_t>(i)] = s;
    }
    return Polygon(std::move(parent));
}

Polygon midpoints(const Polygon& p) {
    const int n = p.size();
    std::vector<Point2> mid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        mid[static_cast<std::size_t>(i)] = 0.5 * (p[i] + p.vertex(i + 1));
    }
    return Polygon(std::move(mid));
}

}  // namespace bikelab
