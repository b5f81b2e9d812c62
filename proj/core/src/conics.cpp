#include "bikelab/conics.hpp"

#include <algorithm>
#include <cmath>

#include "bikelab/numerics.hpp"

namespace bikelab {

namespace {

std::array<double, 6> point_row(const Point2& p) {
    return {p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, 1.0};
}

std::array<double, 6> line_row(const Line& l) {
    const double u = l.h[0], v = l.h[1], w = l.h[2];
    return {u * u, u * v, v * v, u * w, v * w, w * w};
}

void normalize_conic(std::array<double, 6>& c) {
    double s = 0.0;
    for (double x : c) s += x * x;
    s = std::sqrt(s);
    if (s == 0.0) throw DegenerateConfiguration("zero conic");
    double lead = 0.0;
    for (double x : c) {
        if (x != 0.0) {
            lead = x;
            break;
        }
    }
    const double f = (lead < 0.0 ? -1.0 : 1.0) / s;
    for (double& x : c) x *= f;
}

Conic fit_from_rows(const std::array<std::array<double, 6>, 5>& rows, Conic::Kind kind) {
    std::vector<Vec> sys;
    sys.reserve(5);
    for (const auto& r : rows) sys.emplace_back(r.begin(), r.end());
    const Vec ns = nullspace_vector(sys, 6);
    Conic conic;
    conic.kind = kind;
    std::copy(ns.begin(), ns.end(), conic.coefficients.begin());
    normalize_conic(conic.coefficients);
    return conic;
}

double row_residual(const std::array<double, 6>& coeffs, std::array<double, 6> row) {
    double n = 0.0;
    for (double x : row) n += x * x;
    n = std::sqrt(n);
    if (n == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += coeffs[static_cast<std::size_t>(i)] * row[static_cast<std::size_t>(i)];
    return std::abs(s) / n;
}

}  // namespace

Line line_through(const Point2& a, const Point2& b) {
    // Cross product of the homogeneous points (a, 1) x (b, 1).
    Line l;
    l.h = {a.y - b.y, b.x - a.x, det(a, b)};
    const double n = std::sqrt(l.h[0] * l.h[0] + l.h[1] * l.h[1] + l.h[2] * l.h[2]);
    if (n == 0.0) throw DegenerateConfiguration("line through coincident points");
    for (double& x : l.h) x /= n;
    return l;
}

std::optional<Point2> intersect(const Line& a, const Line& b) {
    const double x = a.h[1] * b.h[2] - a.h[2] * b.h[1];
    const double y = a.h[2] * b.h[0] - a.h[0] * b.h[2];
    const double z = a.h[0] * b.h[1] - a.h[1] * b.h[0];
    if (std::abs(z) <= 1e-12 * std::hypot(x, y) || z == 0.0) return std::nullopt;
    return Point2{x / z, y / z};
}

Conic fit_point_conic(const std::array<Point2, 5>& pts) {
    std::array<std::array<double, 6>, 5> rows;
    for (int i = 0; i < 5; ++i) rows[static_cast<std::size_t>(i)] = point_row(pts[static_cast<std::size_t>(i)]);
    return fit_from_rows(rows, Conic::Kind::Point);
}

Conic fit_dual_conic(const std::array<Line, 5>& lines) {
    std::array<std::array<double, 6>, 5> rows;
    for (int i = 0; i < 5; ++i) rows[static_cast<std::size_t>(i)] = line_row(lines[static_cast<std::size_t>(i)]);
    return fit_from_rows(rows, Conic::Kind::Dual);
}

double point_residual(const Conic& conic, const Point2& p) {
    return row_residual(conic.coefficients, point_row(p));
}

double line_residual(const Conic& dual, const Line& line) {
    return row_residual(dual.coefficients, line_row(line));
}

double coconic_residual(const std::array<Point2, 6>& pts) {
    std::array<std::array<double, 6>, 6> rows;
    for (int i = 0; i < 6; ++i) rows[static_cast<std::size_t>(i)] = point_row(pts[static_cast<std::size_t>(i)]);
    return std::abs(det6_normalized(rows));
}

double coconic_residual(const Polygon& tri, FrameLength t) {
    if (tri.size() != 3) throw DegenerateTriangle("coconic check needs a 3-gon");
    const Polygon q = map_one_sided(tri, t, Side::Forward);
    const Polygon r = map_one_sided(tri, t, Side::Backward);
    return coconic_residual({q[0], q[1], q[2], r[0], r[1], r[2]});
}

CarnotReport carnot_factors(const Polygon& tri, FrameLength t) {
    if (tri.size() != 3) throw DegenerateTriangle("carnot check needs a 3-gon");
    const Polygon q = map_one_sided(tri, t, Side::Forward);
    const Polygon r = map_one_sided(tri, t, Side::Backward);

    CarnotReport rep;
    rep.product = 1.0;
    for (int i = 0; i < 3; ++i) {
        // Signed coordinates along the side from P_i to P_{i+1}; the quadruple
        // on this line is (R_i, P_i, P_{i+1}, Q_{i+1}).
        const Point2 origin = tri[i];
        const Point2 dir_raw = tri.vertex(i + 1) - origin;
        const Point2 dir = dir_raw / norm(dir_raw);
        const double xr = dot(r[i] - origin, dir);
        const double xp0 = 0.0;
        const double xp1 = dot(tri.vertex(i + 1) - origin, dir);
        const double xq = dot(q.vertex(i + 1) - origin, dir);
        const double cr = cross_ratio(xr, xp0, xp1, xq);
        rep.factors[static_cast<std::size_t>(i)] = cr;
        rep.product *= cr;
    }
    return rep;
}

double carnot_product(const Polygon& tri, FrameLength t) {
    return carnot_factors(tri, t).product;
}

InscribedConicReport fit_inscribed_conic(const Polygon& tri, FrameLength t, int hold_out) {
    if (tri.size() != 3) throw DegenerateTriangle("inscribed-conic check needs a 3-gon");
    if (hold_out < 0 || hold_out > 5) throw Error("hold_out must be in 0..5");
    const Polygon q = map_one_sided(tri, t, Side::Forward);
    const Polygon r = map_one_sided(tri, t, Side::Backward);

    const std::array<Line, 6> lines = {
        line_through(q[0], q[1]), line_through(q[1], q[2]), line_through(q[2], q[0]),
        line_through(r[0], r[1]), line_through(r[1], r[2]), line_through(r[2], r[0]),
    };

    std::array<Line, 5> fit_lines;
    int k = 0;
    for (int i = 0; i < 6; ++i) {
        if (i == hold_out) continue;
        fit_lines[static_cast<std::size_t>(k++)] = lines[static_cast<std::size_t>(i)];
    }
    InscribedConicReport rep;
    rep.dual = fit_dual_conic(fit_lines);
    rep.sixth_line_residual = line_residual(rep.dual, lines[static_cast<std::size_t>(hold_out)]);
    return rep;
}

double inscribed_conic_check(const Polygon& tri, FrameLength t) {
    return fit_inscribed_conic(tri, t).sixth_line_residual;
}

namespace {

// Sine of the angle at p between directions to a and b; 0 iff collinear.
double collinearity_residual(const Point2& a, const Point2& p, const Point2& b) {
    const Point2 u = a - p;
    const Point2 v = b - p;
    const double nu = norm(u), nv = norm(v);
    if (nu == 0.0 || nv == 0.0) return 1.0;
    return std::abs(det(u, v)) / (nu * nv);
}

}  // namespace

IncidenceReport incidence_check(const Polygon& tri, FrameLength t) {
    if (tri.size() != 3) throw DegenerateTriangle("incidence check needs a 3-gon");
    const Polygon q = map_one_sided(tri, t, Side::Forward);
    const Polygon r = map_one_sided(tri, t, Side::Backward);

    IncidenceReport rep;
    rep.coconic = coconic_residual({q[0], q[1], q[2], r[0], r[1], r[2]});

    std::array<Line, 3> q_lines, r_lines;
    for (int i = 0; i < 3; ++i) {
        q_lines[static_cast<std::size_t>(i)] = line_through(q[i], q.vertex(i + 1));
        r_lines[static_cast<std::size_t>(i)] = line_through(r[i], r.vertex(i + 1));
    }

    // The nine Q-line x R-line intersections.
    struct Node {
        Point2 pt;
        bool valid = false;
    };
    std::array<std::array<Node, 3>, 3> nodes;
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            const auto pt = intersect(q_lines[static_cast<std::size_t>(j)], r_lines[static_cast<std::size_t>(k)]);
            if (pt) {
                nodes[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = {*pt, true};
            } else {
                ++rep.degenerate_intersections;
            }
        }
    }

    const double scale = tri.diameter();
    constexpr double kCollinearTol = 1e-8;

    // Candidate (first, second) intersection pairs collinear with each vertex.
    struct Pair {
        int a;  // flattened 3*j + k
        int b;
        double residual;
    };
    std::array<std::vector<Pair>, 3> candidates;
    for (int vi = 0; vi < 3; ++vi) {
        const Point2& pv = tri[vi];
        for (int a = 0; a < 9; ++a) {
            const Node& na = nodes[static_cast<std::size_t>(a / 3)][static_cast<std::size_t>(a % 3)];
            if (!na.valid || distance(na.pt, pv) < 1e-9 * scale) continue;
            for (int b = a + 1; b < 9; ++b) {
                const Node& nb = nodes[static_cast<std::size_t>(b / 3)][static_cast<std::size_t>(b % 3)];
                if (!nb.valid || distance(nb.pt, pv) < 1e-9 * scale) continue;
                if (distance(na.pt, nb.pt) < 1e-9 * scale) continue;
                const double res = collinearity_residual(na.pt, pv, nb.pt);
                if (res < kCollinearTol) {
                    candidates[static_cast<std::size_t>(vi)].push_back({a, b, res});
                }
            }
        }
        std::sort(candidates[static_cast<std::size_t>(vi)].begin(), candidates[static_cast<std::size_t>(vi)].end(),
                  [](const Pair& x, const Pair& y) { return x.residual < y.residual; });
    }

    // Search assignments: six distinct points and concurrent connecting lines.
    constexpr double kConcurrencyTol = 1e-8;
    for (const Pair& p0 : candidates[0]) {
        for (const Pair& p1 : candidates[1]) {
            for (const Pair& p2 : candidates[2]) {
                const std::array<int, 6> used{p0.a, p0.b, p1.a, p1.b, p2.a, p2.b};
                bool distinct = true;
                for (int i = 0; i < 6 && distinct; ++i) {
                    for (int j = i + 1; j < 6; ++j) {
                        if (used[static_cast<std::size_t>(i)] == used[static_cast<std::size_t>(j)]) {
                            distinct = false;
                            break;
                        }
                    }
                }
                if (!distinct) continue;

                const auto node_pt = [&](int idx) {
                    return nodes[static_cast<std::size_t>(idx / 3)][static_cast<std::size_t>(idx % 3)].pt;
                };
                std::array<Line, 3> connect;
                connect[0] = line_through(tri[0], node_pt(p0.a));
                connect[1] = line_through(tri[1], node_pt(p1.a));
                connect[2] = line_through(tri[2], node_pt(p2.a));
                const double conc = std::abs(
                    connect[0].h[0] * (connect[1].h[1] * connect[2].h[2] - connect[1].h[2] * connect[2].h[1]) -
                    connect[0].h[1] * (connect[1].h[0] * connect[2].h[2] - connect[1].h[2] * connect[2].h[0]) +
                    connect[0].h[2] * (connect[1].h[0] * connect[2].h[1] - connect[1].h[1] * connect[2].h[0]));
                if (conc < kConcurrencyTol) {
                    rep.labeling_found = true;
                    rep.first_pick = {std::array<int, 2>{p0.a / 3, p0.a % 3},
                                      std::array<int, 2>{p1.a / 3, p1.a % 3},
                                      std::array<int, 2>{p2.a / 3, p2.a % 3}};
                    rep.second_pick = {std::array<int, 2>{p0.b / 3, p0.b % 3},
                                       std::array<int, 2>{p1.b / 3, p1.b % 3},
                                       std::array<int, 2>{p2.b / 3, p2.b % 3}};
                    rep.collinearity_residual = std::max({p0.residual, p1.residual, p2.residual});
                    rep.concurrency_residual = conc;
                    return rep;
                }
            }
        }
    }
    return rep;
}

}  // namespace bikelab
