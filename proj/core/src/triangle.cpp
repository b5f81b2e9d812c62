#include "bikelab/triangle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace bikelab {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<double, 3> canonical_rotation(std::array<double, 3> a) {
    const std::array<double, 3> r1{a[1], a[2], a[0]};
    const std::array<double, 3> r2{a[2], a[0], a[1]};
    if (r1 < a) a = r1;
    if (r2 < a) a = r2;
    return a;
}

std::array<double, 3> sorted3(std::array<double, 3> a) {
    std::sort(a.begin(), a.end());
    return a;
}

}  // namespace

TriangleShape::TriangleShape(const std::array<double, 3>& angles)
    : angles_(canonical_rotation(angles)) {
    for (double a : angles_) {
        if (!(a > 0.0) || !(a < kPi) || !std::isfinite(a)) {
            throw DegenerateTriangle("shape angle out of (0, pi)");
        }
    }
    const double sum = angles_[0] + angles_[1] + angles_[2];
    if (std::abs(sum - kPi) > 1e-12) {
        throw DegenerateTriangle("shape angles sum to " + std::to_string(sum) + ", not pi");
    }
}

double TriangleShape::distance(const TriangleShape& other) const {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(angles_[static_cast<std::size_t>(i)] - other.angles_[static_cast<std::size_t>(i)]));
    return d;
}

std::array<double, 3> triangle_angles(const Polygon& p) {
    if (p.size() != 3) throw DegenerateTriangle("triangle_angles needs a 3-gon");
    std::array<double, 3> angles{};
    for (int i = 0; i < 3; ++i) {
        const Point2 u = p.vertex(i - 1) - p[i];
        const Point2 w = p.vertex(i + 1) - p[i];
        const double nu = norm(u), nw = norm(w);
        if (nu == 0.0 || nw == 0.0) throw DegenerateTriangle("coincident triangle vertices");
        const double c = std::clamp(dot(u, w) / (nu * nw), -1.0, 1.0);
        angles[static_cast<std::size_t>(i)] = std::acos(c);
    }
    return angles;
}

TriangleShape shape_of(const Polygon& p) {
    if (p.size() != 3) throw DegenerateTriangle("shape_of needs a 3-gon");
    const double diam = p.diameter();
    if (std::abs(signed_area(p)) <= 1e-14 * diam * diam) {
        throw DegenerateTriangle("triangle is (near-)collinear");
    }
    return TriangleShape(triangle_angles(p));
}

Polygon embed_unit_area(double alpha, double beta, double gamma) {
    if (!(alpha > 0.0 && beta > 0.0 && gamma > 0.0)) {
        throw DegenerateTriangle("embedding needs positive angles");
    }
    const double sa = std::sin(alpha), sb = std::sin(beta), sg = std::sin(gamma);
    // Unit area: scale^2 * sin(alpha) sin(beta) sin(gamma) = 2.
    const double scale = std::sqrt(2.0 / (sa * sb * sg));
    const double a = scale * sb;  // |v0 - v2|, opposite beta
    const double b = scale * sa;  // |v2 - v1|, opposite alpha
    // v2 at origin, v1 on the +x axis, v0 below it so the order is CCW.
    std::vector<Point2> v(3);
    v[0] = {a * std::cos(gamma), -a * std::sin(gamma)};
    v[1] = {b, 0.0};
    v[2] = {0.0, 0.0};
    return Polygon(std::move(v));
}

Polygon embed_unit_area(const TriangleShape& s) {
    return embed_unit_area(s.alpha(), s.beta(), s.gamma());
}

SideTriple::SideTriple(const std::array<double, 3>& sides) : a(sides) {
    for (double s : a) {
        if (!(s > 0.0) || !std::isfinite(s)) throw DegenerateTriangle("side lengths must be positive");
    }
    if (a[0] + a[1] <= a[2] || a[1] + a[2] <= a[0] || a[2] + a[0] <= a[1]) {
        throw DegenerateTriangle("triangle inequality violated");
    }
}

SideTriple sides_of(const Polygon& tri) {
    if (tri.size() != 3) throw DegenerateTriangle("sides_of needs a 3-gon");
    const EdgeData e = edge_data(tri);
    return SideTriple({e.lengths[0], e.lengths[1], e.lengths[2]});
}

Polygon triangle_from_sides(const SideTriple& s) {
    const double a0 = s.a[0], a1 = s.a[1], a2 = s.a[2];
    const double x = (a0 * a0 + a2 * a2 - a1 * a1) / (2.0 * a2);
    const double y2 = a0 * a0 - x * x;
    if (!(y2 > 0.0)) throw DegenerateTriangle("side triple is numerically degenerate");
    std::vector<Point2> v(3);
    v[0] = {x, -std::sqrt(y2)};
    v[1] = {a2, 0.0};
    v[2] = {0.0, 0.0};
    return Polygon(std::move(v));
}

double integral_I(const TriangleShape& s) {
    double sum = 0.0;
    for (double a : s.angles()) sum += 1.0 / std::tan(0.5 * a);
    return sum;
}

double integral_I_product(const TriangleShape& s) {
    double prod = 1.0;
    for (double a : s.angles()) prod *= 1.0 / std::tan(0.5 * a);
    return prod;
}

double reduced_form_density(const TriangleShape& s) {
    return 1.0 / (2.0 * std::sin(s.alpha()) * std::sin(s.beta()) * std::sin(s.gamma()));
}

namespace {

// Squared side i of the Forward image (first printed form).
double forward_sq(const std::array<double, 3>& a, double t, int i) {
    const double ai = a[static_cast<std::size_t>(i)];
    const double a1 = a[static_cast<std::size_t>((i + 1) % 3)];
    const double a2 = a[static_cast<std::size_t>((i + 2) % 3)];
    return (ai + t) * (ai + t) + t * t +
           t * (ai + t) * (ai * ai + a2 * a2 - a1 * a1) / (ai * a2);
}

double backward_sq(const std::array<double, 3>& a, double t, int i) {
    const double ai = a[static_cast<std::size_t>(i)];
    const double a1 = a[static_cast<std::size_t>((i + 1) % 3)];
    const double a2 = a[static_cast<std::size_t>((i + 2) % 3)];
    return (ai + t) * (ai + t) + t * t +
           t * (ai + t) * (ai * ai + a1 * a1 - a2 * a2) / (ai * a1);
}

// Second printed forms.
double forward_sq_alt(const std::array<double, 3>& a, double t, int i) {
    const double ai = a[static_cast<std::size_t>(i)];
    const double a1 = a[static_cast<std::size_t>((i + 1) % 3)];
    const double a2 = a[static_cast<std::size_t>((i + 2) % 3)];
    return ai * ai + t * (ai + t) * ((ai + a2) * (ai + a2) - a1 * a1) / (ai * a2);
}

double backward_sq_alt(const std::array<double, 3>& a, double t, int i) {
    const double ai = a[static_cast<std::size_t>(i)];
    const double a1 = a[static_cast<std::size_t>((i + 1) % 3)];
    const double a2 = a[static_cast<std::size_t>((i + 2) % 3)];
    return ai * ai + t * (ai + t) * ((ai + a1) * (ai + a1) - a2 * a2) / (ai * a1);
}

SideTriple sides_from_squares(const std::array<double, 3>& sq) {
    for (double s : sq) {
        if (!(s > 0.0)) throw InvalidResult("image side squared is non-positive");
    }
    return SideTriple({std::sqrt(sq[0]), std::sqrt(sq[1]), std::sqrt(sq[2])});
}

}  // namespace

SideTriple sides_after(const SideTriple& s, FrameLength t, Side side) {
    std::array<double, 3> sq{};
    for (int i = 0; i < 3; ++i) {
        sq[static_cast<std::size_t>(i)] = side == Side::Forward ? forward_sq(s.a, t.t, i)
                                                                : backward_sq(s.a, t.t, i);
    }
    return sides_from_squares(sq);
}

SideTriple sides_after_alt(const SideTriple& s, FrameLength t, Side side) {
    std::array<double, 3> sq{};
    for (int i = 0; i < 3; ++i) {
        sq[static_cast<std::size_t>(i)] = side == Side::Forward ? forward_sq_alt(s.a, t.t, i)
                                                                : backward_sq_alt(s.a, t.t, i);
    }
    return sides_from_squares(sq);
}

double area_ratio(const SideTriple& s, double t) {
    const double a = s.a[0], b = s.a[1], c = s.a[2];
    return ((t + a) * (t + b) * (t + c) - t * t * t) / (a * b * c);
}

double area_ratio_alt(const SideTriple& s, double t) {
    const double a = s.a[0], b = s.a[1], c = s.a[2];
    return (a * b * c + t * (a * b + b * c + c * a) + t * t * (a + b + c)) / (a * b * c);
}

SideTriple limit_sides(const SideTriple& s, Side side) {
    std::array<double, 3> sq{};
    for (int i = 0; i < 3; ++i) {
        const double ai = s.a[static_cast<std::size_t>(i)];
        const double a1 = s.a[static_cast<std::size_t>((i + 1) % 3)];
        const double a2 = s.a[static_cast<std::size_t>((i + 2) % 3)];
        if (side == Side::Forward) {
            sq[static_cast<std::size_t>(i)] = ((ai + a2) * (ai + a2) - a1 * a1) / (ai * a2);
        } else {
            sq[static_cast<std::size_t>(i)] = ((ai + a1) * (ai + a1) - a2 * a2) / (ai * a1);
        }
    }
    return sides_from_squares(sq);
}

DomainMembership domain_membership(const TriangleShape& s, double t, int max_steps,
                                   const ToleranceConfig& cfg) {
    Polygon p = embed_unit_area(s);
    const FrameLength frame{t};
    for (int k = 0; k < max_steps; ++k) {
        if (!(2.0 * t < p.min_side())) return {false, k};
        try {
            p = map_f(p, frame, 1, cfg);
        } catch (const NoConvergence&) {
            return {false, k};
        } catch (const DegenerateSide&) {
            return {false, k};
        }
    }
    return {true, max_steps};
}

DomainGrid rasterize_domain(double t, int grid_n, int max_steps, const ToleranceConfig& cfg,
                            int threads) {
    DomainGrid grid;
    grid.grid_n = grid_n;
    grid.t = t;
    for (int i = 0; i < grid_n; ++i) {
        const double alpha = kPi * (i + 0.5) / grid_n;
        for (int j = 0; j < grid_n; ++j) {
            const double beta = kPi * (j + 0.5) / grid_n;
            if (alpha + beta >= kPi - 1e-9) continue;
            grid.cells.push_back({alpha, beta, false, 0});
        }
    }

    const auto classify = [&](DomainCell& cell) {
        const double gamma = kPi - cell.alpha - cell.beta;
        const DomainMembership m =
            domain_membership(TriangleShape({cell.alpha, cell.beta, gamma}), t, max_steps, cfg);
        cell.member = m.member;
        cell.survived_steps = m.survived_steps;
    };

    const int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        for (DomainCell& cell : grid.cells) classify(cell);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        const std::size_t total = grid.cells.size();
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t idx = static_cast<std::size_t>(w); idx < total;
                     idx += static_cast<std::size_t>(nthreads)) {
                    classify(grid.cells[idx]);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }
    for (const DomainCell& cell : grid.cells) {
        if (cell.member) ++grid.member_count;
    }
    return grid;
}

// --- period 6 ---------------------------------------------------------------

Vec period6_residual(const Vec& sides, double t) {
    const std::array<double, 3> a{sides[0], sides[1], sides[2]};
    const double b0 = forward_sq_alt(a, t, 0);
    const double b1 = forward_sq_alt(a, t, 1);
    const double b2 = forward_sq_alt(a, t, 2);
    const double c1 = backward_sq_alt(a, t, 1);
    const double c2 = backward_sq_alt(a, t, 2);
    // (1) q_t(P) isosceles with legs b0 = b1 and base b2; (2) r_t(P)
    // isosceles with c1 = c2; (3) q_t(P) has unit area. The equality pairing
    // is the one the verified 6-periodic orbit actually satisfies in this
    // side-indexing convention.
    Vec r(3);
    r[0] = b0 - b1;
    r[1] = c1 - c2;
    const double height_sq = b0 - 0.25 * b2;
    r[2] = (height_sq > 0.0 ? 0.5 * std::sqrt(b2) * std::sqrt(height_sq) : -1.0) - 1.0;
    return r;
}

namespace {

bool nearly_isosceles(const Polygon& tri, double tol) {
    const SideTriple s = sides_of(tri);
    const std::array<double, 3> a = sorted3(s.a);
    return (a[1] - a[0]) < tol || (a[2] - a[1]) < tol;
}

}  // namespace

Period6Result period6_search(double t, const SideTriple& seed, const ToleranceConfig& cfg) {
    Period6Result out;
    SolveReport rep;
    try {
        rep = newton([t](const Vec& x) { return period6_residual(x, t); },
                     Vec{seed.a[0], seed.a[1], seed.a[2]}, cfg);
    } catch (const SingularJacobian&) {
        out.reason = "singular Jacobian";
        return out;
    }
    out.converged = rep.converged;
    out.residual = rep.residual;
    out.iterations = rep.iterations;
    if (!rep.converged) {
        out.reason = "newton did not converge";
        return out;
    }
    out.sides = {rep.witness[0], rep.witness[1], rep.witness[2]};

    // Reject the trivial equilateral branch.
    const std::array<double, 3> srt = sorted3(out.sides);
    if (!(srt[0] > 0.0)) {
        out.reason = "non-positive side";
        return out;
    }
    if (srt[2] - srt[0] < 1e-3) {
        out.reason = "equilateral root";
        return out;
    }

    // Dynamical verification: orbit of Q = q_t(P) under f_t.
    std::vector<Polygon> iterates;
    const FrameLength frame{t};
    try {
        const Polygon p = triangle_from_sides(SideTriple(out.sides));
        iterates.push_back(map_one_sided(p, frame, Side::Forward));
        for (int k = 0; k < 6; ++k) {
            if (!(2.0 * t < iterates.back().min_side())) {
                out.reason = "orbit violates 2t < min side at step " + std::to_string(k);
                return out;
            }
            iterates.push_back(map_f(iterates.back(), frame, 1, cfg));
        }
    } catch (const DegenerateTriangle&) {
        out.reason = "root violates triangle inequality";
        return out;
    } catch (const Error& e) {
        out.reason = std::string("orbit failed: ") + e.what();
        return out;
    }

    const TriangleShape s0 = shape_of(iterates[0]);
    out.shape_return_error = s0.distance(shape_of(iterates[6]));
    if (out.shape_return_error > 1e-8) {
        out.reason = "shape does not return after 6 steps";
        return out;
    }
    for (int k = 0; k < 6; ++k) {
        if (!nearly_isosceles(iterates[static_cast<std::size_t>(k)], 1e-6)) {
            out.reason = "iterate " + std::to_string(k) + " is not isosceles";
            return out;
        }
    }
    // Alternation between two shape classes.
    const TriangleShape s1 = shape_of(iterates[1]);
    for (int k = 2; k < 6; ++k) {
        const TriangleShape sk = shape_of(iterates[static_cast<std::size_t>(k)]);
        const double d = (k % 2 == 0) ? s0.distance(sk) : s1.distance(sk);
        if (d > 1e-6) {
            out.reason = "orbit does not alternate between two shapes";
            return out;
        }
    }
    // Genuine period 6 for the ordered (labeled) angles: no earlier return.
    const std::array<double, 3> a0 = triangle_angles(iterates[0]);
    for (int k = 1; k < 6; ++k) {
        const std::array<double, 3> ak = triangle_angles(iterates[static_cast<std::size_t>(k)]);
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(ak[static_cast<std::size_t>(i)] - a0[static_cast<std::size_t>(i)]));
        if (d < 1e-6) {
            out.reason = "ordered angles return early at step " + std::to_string(k);
            return out;
        }
    }

    out.orbit_shape_even = s0.angles();
    out.orbit_shape_odd = s1.angles();
    out.verified = true;
    return out;
}

namespace {

// Locates the 6-periodic orbit at one t directly from the dynamics: scan the
// apex angle of a unit-area isosceles triangle Q for shape(f_t^2(Q)) =
// shape(Q) away from the equilateral point, refine, and return the side
// lengths of the rear triangle P = q_t^{-1}(Q) as a Newton seed.
std::vector<std::array<double, 3>> period6_anchor_seeds(double t, const ToleranceConfig& cfg) {
    std::vector<std::array<double, 3>> seeds;
    const FrameLength frame{t};
    const auto mismatch = [&](double theta) -> double {
        try {
            const double base = 0.5 * (kPi - theta);
            const Polygon q = embed_unit_area(theta, base, base);
            if (!(2.0 * t < q.min_side())) return 1e9;
            Polygon x = map_f(q, frame, 1, cfg);
            if (!(2.0 * t < x.min_side())) return 1e9;
            x = map_f(x, frame, 1, cfg);
            return shape_of(q).distance(shape_of(x));
        } catch (const Error&) {
            return 1e9;
        }
    };

    // Coarse grid away from the equilateral apex, then golden-section refine
    // around each local minimum below threshold.
    const double equilateral = kPi / 3.0;
    std::vector<double> grid;
    for (double th = 0.25; th < 2.4; th += 0.01) {
        if (std::abs(th - equilateral) > 0.05) grid.push_back(th);
    }
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double g0 = mismatch(grid[i - 1]);
        const double g1 = mismatch(grid[i]);
        const double g2 = mismatch(grid[i + 1]);
        if (g1 >= 1e8 || g1 > g0 || g1 > g2 || g1 > 0.02) continue;
        double lo = grid[i - 1], hi = grid[i + 1];
        for (int it = 0; it < 80; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (mismatch(m1) <= mismatch(m2)) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        const double theta = 0.5 * (lo + hi);
        if (mismatch(theta) > 1e-5) continue;
        try {
            const double base = 0.5 * (kPi - theta);
            const Polygon q = embed_unit_area(theta, base, base);
            const Polygon p = inverse_one_sided(q, frame, Side::Forward, cfg);
            const SideTriple sp = sides_of(p);
            seeds.push_back(sp.a);
        } catch (const Error&) {
        }
    }
    return seeds;
}

}  // namespace

Period6Sweep period6_continuation(double t_min, double t_max, double t_step,
                                  const ToleranceConfig& cfg) {
    Period6Sweep sweep;
    if (!(t_step > 0.0) || !(t_max >= t_min)) throw Error("bad continuation range");

    const int count = static_cast<int>(std::floor((t_max - t_min) / t_step + 0.5)) + 1;
    std::vector<double> ts(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) ts[static_cast<std::size_t>(i)] = t_min + i * t_step;

    // Anchor at the grid point nearest 0.56 (clamped into range).
    int anchor = 0;
    double best = 1e300;
    for (int i = 0; i < count; ++i) {
        const double d = std::abs(ts[static_cast<std::size_t>(i)] - 0.56);
        if (d < best) {
            best = d;
            anchor = i;
        }
    }

    // Seeds from the dynamics at the anchor, plus perturbed rear-equilateral
    // side triples as a fallback. (The rear equilateral side a* solves
    // a^2 + 3 t (a + t) = 4 / sqrt(3), the unit-area image condition.)
    std::vector<std::array<double, 3>> seeds =
        period6_anchor_seeds(ts[static_cast<std::size_t>(anchor)], cfg);
    {
        const double ta = ts[static_cast<std::size_t>(anchor)];
        const double disc = 16.0 / std::sqrt(3.0) - 3.0 * ta * ta;
        if (disc > 0.0) {
            const double astar = 0.5 * (-3.0 * ta + std::sqrt(disc));
            for (double d : {0.3, 0.5, 0.15}) {
                seeds.push_back({astar * (1 + d), astar, astar * (1 - d)});
                seeds.push_back({astar * (1 + d), astar * (1 - d), astar});
                seeds.push_back({astar, astar * (1 + d), astar * (1 - d)});
            }
        }
    }

    std::vector<Period6Row> rows(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) rows[static_cast<std::size_t>(i)].t = ts[static_cast<std::size_t>(i)];

    Period6Result anchor_result;
    for (const auto& seed : seeds) {
        try {
            anchor_result = period6_search(ts[static_cast<std::size_t>(anchor)], SideTriple(seed), cfg);
        } catch (const DegenerateTriangle&) {
            continue;
        }
        if (anchor_result.verified) break;
    }
    rows[static_cast<std::size_t>(anchor)] = {ts[static_cast<std::size_t>(anchor)], anchor_result.sides,
                                              anchor_result.residual, anchor_result.verified};

    if (anchor_result.verified) {
        sweep.family_found = true;
        sweep.t_lower = ts[static_cast<std::size_t>(anchor)];
        sweep.t_upper = ts[static_cast<std::size_t>(anchor)];

        const auto walk = [&](int from, int step) {
            std::array<double, 3> prev = anchor_result.sides;
            for (int i = from + step; i >= 0 && i < count; i += step) {
                Period6Result res;
                try {
                    res = period6_search(ts[static_cast<std::size_t>(i)], SideTriple(prev), cfg);
                } catch (const DegenerateTriangle&) {
                    break;
                }
                rows[static_cast<std::size_t>(i)] = {ts[static_cast<std::size_t>(i)], res.sides, res.residual, res.verified};
                if (!res.verified) break;
                prev = res.sides;
                sweep.t_lower = std::min(sweep.t_lower, ts[static_cast<std::size_t>(i)]);
                sweep.t_upper = std::max(sweep.t_upper, ts[static_cast<std::size_t>(i)]);
            }
        };
        walk(anchor, +1);
        walk(anchor, -1);
    }

    sweep.rows = std::move(rows);
    return sweep;
}

// --- shape-flow loops --------------------------------------------------------

namespace {

Vec flatten3(const Polygon& p) {
    return Vec{p[0].x, p[1].x, p[2].x, p[0].y, p[1].y, p[2].y};
}

Polygon unflatten3(const Vec& x) {
    return Polygon({{x[0], x[3]}, {x[1], x[4]}, {x[2], x[5]}});
}

std::array<double, 3> sorted_sides(const Polygon& p) {
    const EdgeData e = edge_data(p);
    return sorted3({e.lengths[0], e.lengths[1], e.lengths[2]});
}

double sorted_side_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
    return d;
}

}  // namespace

ShapeLoopResult trace_shape_loop(const TriangleShape& s, const ToleranceConfig& cfg,
                                 double max_time) {
    ShapeLoopResult out;
    const Polygon start = embed_unit_area(s);
    const std::array<double, 3> ref_sides = sorted_sides(start);
    const std::array<double, 3> ref_angles = triangle_angles(start);
    const double I0 = integral_I(s);
    const double per0 = perimeter(start);

    const VecFn field = [](const Vec& x) {
        const std::vector<Point2> xi = field_xi(unflatten3(x));
        return Vec{xi[0].x, xi[1].x, xi[2].x, xi[0].y, xi[1].y, xi[2].y};
    };

    // Dip detection over coarse steps with local refinement.
    const double h = cfg.ode_step;
    Vec y = flatten3(start);
    double t = 0.0;
    double d_prev2 = 0.0, d_prev = 0.0;
    Vec y_prev2 = y, y_prev = y;
    bool have2 = false;
    int steps_since_dip = 0;

    const double dip_coarse_threshold = 0.02 * ref_sides[2];

    while (t < max_time) {
        y = rk4_step(field, y, h);
        t += h;
        const Polygon p = unflatten3(y);
        out.max_integral_drift =
            std::max(out.max_integral_drift, std::abs(integral_I(shape_of(p)) - I0));
        out.max_perimeter_drift =
            std::max(out.max_perimeter_drift, std::abs(perimeter(p) - per0) / per0);
        const double d = sorted_side_dist(sorted_sides(p), ref_sides);
        ++steps_since_dip;

        if (have2 && d_prev <= d_prev2 && d_prev <= d && d_prev < dip_coarse_threshold &&
            steps_since_dip > 3) {
            // Two-stage refinement around the coarse minimum. The distance is
            // |t - t*|-shaped near a dip, so each stage gains the step ratio.
            Vec best_y = y_prev2;
            double best_t = t - 2.0 * h;
            double best_d = d_prev2;
            double span = 2.0 * h;
            for (int stage = 0; stage < 2; ++stage) {
                const int substeps = 128;
                const double hh = span / substeps;
                Vec yy = best_y;
                double tt = best_t;
                // Walk back half a span first on the second stage.
                if (stage > 0) {
                    yy = rk4_step(field, yy, -0.5 * span);
                    tt -= 0.5 * span;
                }
                Vec stage_y = yy;
                double stage_t = tt, stage_d = sorted_side_dist(sorted_sides(unflatten3(yy)), ref_sides);
                for (int k = 0; k < substeps; ++k) {
                    yy = rk4_step(field, yy, hh);
                    tt += hh;
                    const double dd = sorted_side_dist(sorted_sides(unflatten3(yy)), ref_sides);
                    if (dd < stage_d) {
                        stage_d = dd;
                        stage_y = yy;
                        stage_t = tt;
                    }
                }
                best_y = stage_y;
                best_t = stage_t;
                best_d = stage_d;
                span = 2.0 * hh;
            }
            ShapeLoopDip dip;
            dip.time = best_t;
            dip.sorted_side_error = best_d;
            dip.angles = triangle_angles(unflatten3(best_y));
            out.dips.push_back(dip);
            steps_since_dip = 0;

            // Closed loop once the ordered angles return.
            double ang_err = 0.0;
            for (int i = 0; i < 3; ++i) {
                ang_err = std::max(ang_err, std::abs(dip.angles[static_cast<std::size_t>(i)] - ref_angles[static_cast<std::size_t>(i)]));
            }
            if (out.dips.size() > 1 && ang_err < 1e-4) {
                out.closed = true;
                out.period = best_t;
                out.ordered_return_error = ang_err;
                break;
            }
        }
        d_prev2 = d_prev;
        d_prev = d;
        y_prev2 = y_prev;
        y_prev = y;
        have2 = true;
    }

    // Which cyclic rotations of the starting triple were visited at the dips?
    std::array<bool, 3> seen{false, false, false};
    for (const ShapeLoopDip& dip : out.dips) {
        for (int r = 0; r < 3; ++r) {
            double d = 0.0;
            for (int i = 0; i < 3; ++i) {
                d = std::max(d, std::abs(dip.angles[static_cast<std::size_t>(i)] -
                                         ref_angles[static_cast<std::size_t>((i + r) % 3)]));
            }
            if (d < 1e-3) seen[static_cast<std::size_t>(r)] = true;
        }
    }
    out.visits_all_cyclic_relabelings = seen[0] && seen[1] && seen[2];
    return out;
}

std::pair<double, double> shape_chart_map(double alpha, double beta, double t,
                                          const ToleranceConfig& cfg) {
    const double gamma = kPi - alpha - beta;
    const Polygon image = map_f(embed_unit_area(alpha, beta, gamma), FrameLength{t}, 1, cfg);
    const std::array<double, 3> ang = triangle_angles(image);
    return {ang[0], ang[1]};
}

}  // namespace bikelab
