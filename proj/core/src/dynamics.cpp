#include "bikelab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace bikelab {

namespace {

// One pass of the inverse-q chain: given a trial preimage of q[0], walk the
// circles of radius t around q[1], ..., q[n-1] and return the induced point
// back on the circle around q[0]. Central projection from outside a circle
// onto it is distance decreasing, so the pass contracts when 2t < min side.
Point2 chain_pass(const Polygon& q, double t, const Point2& p0) {
    const int n = q.size();
    Point2 p = p0;
    for (int i = 1; i <= n; ++i) {
        const Point2& center = q.vertex(i);
        const Point2 d = center - p;
        p = center - (t / norm(d)) * d;
    }
    return p;
}

// Rebuilds the full preimage polygon from the converged first vertex.
Polygon chain_rebuild(const Polygon& q, double t, const Point2& p0) {
    const int n = q.size();
    std::vector<Point2> out(static_cast<std::size_t>(n));
    out[0] = p0;
    for (int i = 1; i < n; ++i) {
        const Point2 d = q[i] - out[static_cast<std::size_t>(i - 1)];
        out[static_cast<std::size_t>(i)] = q[i] - (t / norm(d)) * d;
    }
    return Polygon(std::move(out));
}

}  // namespace

Polygon map_one_sided(const Polygon& p, FrameLength t, Side side) {
    const EdgeData e = edge_data(p);
    const int n = p.size();
    std::vector<Point2> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Point2& u = side == Side::Forward ? e.units[static_cast<std::size_t>(i)]
                                                : e.units[static_cast<std::size_t>((i + 1) % n)];
        const double sgn = side == Side::Forward ? 1.0 : -1.0;
        out[static_cast<std::size_t>(i)] = p[i] + (sgn * t.t) * u;
    }
    return Polygon(std::move(out));
}

std::pair<Polygon, SolveReport> inverse_one_sided_report(const Polygon& q, FrameLength t,
                                                         Side side, const ToleranceConfig& cfg) {
    // r_t^{-1} is the reversal conjugate of q_t^{-1}: q_t(reverse(P)) = reverse(r_t(P)).
    if (side == Side::Backward) {
        auto [p, rep] = inverse_one_sided_report(q.reversed(), t, Side::Forward, cfg);
        return {p.reversed(), rep};
    }

    const double min_side = q.min_side();
    if (!(2.0 * t.t < min_side)) {
        throw FrameTooLong("2t = " + std::to_string(2.0 * t.t) + " >= min side " +
                           std::to_string(min_side));
    }

    const double diam = q.diameter();
    // Seed on the correct circle, near the expected pullback.
    const Point2 toward_next = q.vertex(1) - q[0];
    const Point2 seed = q[0] - (t.t / norm(toward_next)) * toward_next;

    const VecFn chain = [&q, &t](const Vec& x) {
        const Point2 p = chain_pass(q, t.t, Point2{x[0], x[1]});
        return Vec{p.x, p.y};
    };
    SolveReport rep = fixed_point(chain, Vec{seed.x, seed.y}, cfg, diam);
    if (!rep.converged) {
        throw NoConvergence("inverse chain failed to converge in " +
                            std::to_string(rep.iterations) +
                            " iterations although 2t < min side");
    }
    Polygon p = chain_rebuild(q, t.t, Point2{rep.witness[0], rep.witness[1]});
    return {std::move(p), std::move(rep)};
}

Polygon inverse_one_sided(const Polygon& q, FrameLength t, Side side, const ToleranceConfig& cfg) {
    return inverse_one_sided_report(q, t, side, cfg).first;
}

Polygon map_f(const Polygon& p, FrameLength t, int direction, const ToleranceConfig& cfg) {
    if (direction != 1 && direction != -1) {
        throw Error("map_f direction must be +1 or -1");
    }
    if (direction == 1) {
        return map_one_sided(inverse_one_sided(p, t, Side::Backward, cfg), t, Side::Forward);
    }
    return map_one_sided(inverse_one_sided(p, t, Side::Forward, cfg), t, Side::Backward);
}

std::vector<Point2> field_xi(const Polygon& p) {
    const EdgeData e = edge_data(p);
    const int n = p.size();
    std::vector<Point2> xi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xi[static_cast<std::size_t>(i)] =
            0.5 * (e.units[static_cast<std::size_t>(i)] + e.units[static_cast<std::size_t>((i + 1) % n)]);
    }
    return xi;
}

std::vector<Point2> parent_diagonal_field(const Polygon& s) {
    const int n = s.size();
    if (n % 2 == 0) throw EvenGon("parent_diagonal_field requires an odd-gon");
    const double floor_len = 1e-13 * s.diameter();
    std::vector<Point2> eta(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Point2 d = s.vertex(i + 1) - s.vertex(i - 1);
        const double len = norm(d);
        if (len <= floor_len) {
            throw DegenerateDiagonal("diagonal through vertex " + std::to_string(i) + " vanished");
        }
        eta[static_cast<std::size_t>(i)] = d / len;
    }
    return eta;
}

namespace {

Vec flatten(const Polygon& p) {
    const int n = p.size();
    Vec x(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = p[i].x;
        x[static_cast<std::size_t>(n + i)] = p[i].y;
    }
    return x;
}

Polygon unflatten(const Vec& x) {
    const int n = static_cast<int>(x.size() / 2);
    std::vector<Point2> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = {x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(n + i)]};
    }
    return Polygon(std::move(v));
}

}  // namespace

FlowResult flow_xi(const Polygon& p, double duration, const ToleranceConfig& cfg) {
    const int n = p.size();
    const VecFn field = [n](const Vec& x) {
        const std::vector<Point2> xi = field_xi(unflatten(x));
        Vec out(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i)] = xi[static_cast<std::size_t>(i)].x;
            out[static_cast<std::size_t>(n + i)] = xi[static_cast<std::size_t>(i)].y;
        }
        return out;
    };

    FlowResult res;
    const double per0 = perimeter(p);
    res.times.push_back(0.0);
    res.states.push_back(p);

    double t = 0.0;
    Vec y = flatten(p);
    const double total = std::abs(duration);
    const double sign = duration < 0.0 ? -1.0 : 1.0;
    while (t < total) {
        const double h = std::min(cfg.ode_step, total - t);
        Vec next;
        try {
            next = rk4_step(field, y, sign * h);
        } catch (const DegenerateSide&) {
            res.status = FlowStatus::HaltedDegenerate;
            return res;
        }
        y = std::move(next);
        t += h;
        Polygon state = unflatten(y);
        res.perimeter_drift =
            std::max(res.perimeter_drift, std::abs(perimeter(state) - per0) / per0);
        res.times.push_back(sign * t);
        res.states.push_back(std::move(state));
    }
    return res;
}

InvariantSnapshot snapshot_invariants(const Polygon& p) {
    InvariantSnapshot s;
    s.perimeter = perimeter(p);
    s.min_side = p.min_side();
    if (p.size() % 2 == 1) {
        s.multi_area = multi_area(p);
    } else {
        s.alternating_sum = alternating_sum(p);
    }
    return s;
}

std::pair<std::vector<OrbitRecord>, OrbitStatus> orbit(const Polygon& p, FrameLength t,
                                                       int steps, const ToleranceConfig& cfg) {
    std::vector<OrbitRecord> records;
    records.reserve(static_cast<std::size_t>(steps) + 1);
    OrbitStatus status;

    Polygon current = p;
    records.push_back({0, current, snapshot_invariants(current)});
    for (int k = 1; k <= steps; ++k) {
        if (!(2.0 * t.t < current.min_side())) {
            status.kind = OrbitStatus::HaltedFrameTooLong;
            status.halted_at = k - 1;
            return {std::move(records), status};
        }
        try {
            current = map_f(current, t, 1, cfg);
        } catch (const NoConvergence&) {
            status.kind = OrbitStatus::HaltedNoConvergence;
            status.halted_at = k - 1;
            return {std::move(records), status};
        } catch (const DegenerateSide&) {
            status.kind = OrbitStatus::HaltedNoConvergence;
            status.halted_at = k - 1;
            return {std::move(records), status};
        }
        records.push_back({k, current, snapshot_invariants(current)});
    }
    return {std::move(records), status};
}

}  // namespace bikelab
