#include "bikelab/lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "bikelab/conics.hpp"
#include "bikelab/rng.hpp"
#include "bikelab/symplectic.hpp"
#include "bikelab/triangle.hpp"

namespace bikelab::lab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Random n-gon with min side bounded away from zero relative to its size.
Polygon random_polygon(Rng& rng, int n) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Point2> v;
        v.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v.push_back(rng.point(-1.0, 1.0));
        Polygon p(std::move(v));
        if (p.min_side() > 0.15 * p.diameter()) return p;
    }
    throw Error("failed to sample a well-separated polygon");
}

// Random triangle with all angles in [0.3, pi - 0.6], random pose and scale.
Polygon random_triangle(Rng& rng) {
    const double alpha = rng.uniform(0.3, kPi - 0.9);
    const double beta = rng.uniform(0.3, kPi - alpha - 0.6);
    const double gamma = kPi - alpha - beta;
    Polygon p = embed_unit_area(alpha, beta, gamma);
    const double scale = rng.uniform(0.5, 2.0);
    const double rot = rng.uniform(0.0, 2.0 * kPi);
    const Point2 shift = rng.point(-1.0, 1.0);
    std::vector<Point2> v;
    for (int i = 0; i < 3; ++i) {
        const Point2& q = p[i];
        v.push_back({shift.x + scale * (q.x * std::cos(rot) - q.y * std::sin(rot)),
                     shift.y + scale * (q.x * std::sin(rot) + q.y * std::cos(rot))});
    }
    return Polygon(std::move(v));
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

std::vector<VerifyRow> verify_rows(const VerifyOptions& opts) {
    std::vector<VerifyRow> rows;
    const ToleranceConfig& cfg = opts.tolerances;
    Rng rng(opts.rng_seed);

    const auto add = [&rows](std::string identity, int n, double residual, double tolerance) {
        rows.push_back({std::move(identity), n, residual, tolerance, residual <= tolerance});
    };

    // Rank of the symplectic form: kernel exactly the translations.
    for (int n : {3, 5, 7, 9, 11}) {
        add("omega-rank = 2n-2", n, std::abs(omega_rank(n) - (2 * n - 2)), 0.0);
    }

    // Hamiltonian identity i_xi omega = c dP with the pinned constant.
    for (int n : {3, 5, 7}) {
        const Polygon p = random_polygon(rng, n);
        const HamiltonianCheck hc = hamiltonian_residual(p, 60, cfg, rng.next_u64());
        add("hamiltonian constant = 1/2", n, std::abs(hc.best_constant - kHamiltonianConstant),
            1e-8);
        add("hamiltonian identity residual", n, hc.residual, 1e-6);
    }

    // Rotation identity d(multi-area) = s * i_eta omega.
    for (int n : {3, 5, 7}) {
        add("rotation identity (multi-area)", n, rotation_identity_residual(random_polygon(rng, n)),
            1e-10);
    }

    // Symplecticity of f_t and of the one-sided pullback difference.
    {
        const Polygon p = random_polygon(rng, 5);
        const FrameLength t{0.05 * p.min_side()};
        add("pullback f_t preserves omega", 5, symplectic_pullback_residual(p, t, cfg), 1e-5);
        add("pullback q_t vs r_t", 5, pullback_difference_residual(p, t, cfg), 1e-5);
    }

    // Parent-coordinate form Omega = 4 omega (exact linear algebra).
    for (int n : {3, 5, 7}) {
        add("parent form Omega = 4 omega", n, parent_form_check(random_polygon(rng, n)), 1e-12);
    }

    // Parent diagonal field vs xi on midpoints: eta_i + eta_{i+1} = 2 xi_i.
    {
        const Polygon parent = random_polygon(rng, 5);
        const Polygon mid = midpoints(parent);
        const std::vector<Point2> eta = parent_diagonal_field(parent);
        const std::vector<Point2> xi = field_xi(mid);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const Point2 lhs = eta[static_cast<std::size_t>(i)] + eta[static_cast<std::size_t>((i + 1) % 5)];
            const Point2 rhs = 2.0 * xi[static_cast<std::size_t>(i)];
            worst = std::max(worst, norm(lhs - rhs));
        }
        add("parent diagonals: eta = 2 xi", 5, worst, 1e-12);
    }

    // Closed-form side lengths vs the coordinate oracle, both printed forms.
    {
        double worst = 0.0, worst_forms = 0.0;
        for (int k = 0; k < 200; ++k) {
            const Polygon tri = random_triangle(rng);
            const SideTriple s = sides_of(tri);
            const FrameLength t{rng.uniform(0.02, 0.4) * tri.min_side()};
            for (Side side : {Side::Forward, Side::Backward}) {
                const SideTriple pred = sides_after(s, t, side);
                const SideTriple alt = sides_after_alt(s, t, side);
                const SideTriple actual = sides_of(map_one_sided(tri, t, side));
                for (int i = 0; i < 3; ++i) {
                    worst = std::max(worst, rel_err(pred.a[static_cast<std::size_t>(i)],
                                                    actual.a[static_cast<std::size_t>(i)]));
                    worst_forms = std::max(worst_forms, rel_err(pred.a[static_cast<std::size_t>(i)],
                                                                alt.a[static_cast<std::size_t>(i)]));
                }
            }
        }
        add("image sides vs coordinate oracle", 3, worst, 1e-12);
        add("image sides: two printed forms", 3, worst_forms, 1e-12);
    }

    // Area ratio vs the shoelace oracle, both printed forms.
    {
        double worst = 0.0, worst_forms = 0.0;
        for (int k = 0; k < 200; ++k) {
            const Polygon tri = random_triangle(rng);
            const SideTriple s = sides_of(tri);
            const double t = rng.uniform(0.02, 0.4) * tri.min_side();
            const double pred = area_ratio(s, t);
            const double alt = area_ratio_alt(s, t);
            const double actual = signed_area(map_one_sided(tri, FrameLength{t}, Side::Forward)) /
                                  signed_area(tri);
            const double actual_r = signed_area(map_one_sided(tri, FrameLength{t}, Side::Backward)) /
                                    signed_area(tri);
            worst = std::max({worst, rel_err(pred, actual), rel_err(pred, actual_r)});
            worst_forms = std::max(worst_forms, rel_err(pred, alt));
        }
        add("area ratio vs coordinate oracle", 3, worst, 1e-12);
        add("area ratio: two printed forms", 3, worst_forms, 1e-12);
    }

    // Conserved side-length product in the t -> infinity limit.
    {
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const SideTriple s = sides_of(random_triangle(rng));
            const SideTriple b = limit_sides(s, Side::Forward);
            const SideTriple c = limit_sides(s, Side::Backward);
            worst = std::max(worst, rel_err(b.a[0] * b.a[1] * b.a[2], c.a[0] * c.a[1] * c.a[2]));
        }
        add("limit side-length product", 3, worst, 1e-12);
    }

    // Integral I: cotangent sum = cotangent product = P^2 / (4 Area).
    {
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const Polygon tri = random_triangle(rng);
            const TriangleShape s = shape_of(tri);
            const double isum = integral_I(s);
            const double iprod = integral_I_product(s);
            const double per = perimeter(tri);
            const double icoord = per * per / (4.0 * std::abs(signed_area(tri)));
            worst = std::max({worst, rel_err(isum, iprod), rel_err(isum, icoord)});
        }
        add("integral I: three expressions", 3, worst, 1e-12);
    }

    // Conic configuration checks.
    {
        double worst_carnot = 0.0, worst_coconic = 0.0, worst_inscribed = 0.0, worst_inc = 0.0;
        bool labelings = true;
        for (int k = 0; k < 25; ++k) {
            const Polygon tri = random_triangle(rng);
            const FrameLength t{rng.uniform(0.05, 0.3) * tri.min_side()};
            const CarnotReport carnot = carnot_factors(tri, t);
            worst_carnot = std::max(worst_carnot, std::abs(carnot.product - 1.0));
            for (double f : carnot.factors) worst_carnot = std::max(worst_carnot, std::abs(f - 1.0));
            worst_coconic = std::max(worst_coconic, coconic_residual(tri, t));
            worst_inscribed = std::max(worst_inscribed, inscribed_conic_check(tri, t));
            const IncidenceReport inc = incidence_check(tri, t);
            labelings = labelings && inc.labeling_found;
            worst_inc = std::max({worst_inc, inc.collinearity_residual, inc.concurrency_residual});
        }
        add("Carnot cross-ratio product", 3, worst_carnot, 1e-12);
        add("six image vertices coconic", 3, worst_coconic, 1e-10);
        add("inscribed conic, sixth tangent", 3, worst_inscribed, 1e-9);
        add("incidence labeling + concurrency", 3, labelings ? worst_inc : 1.0, 1e-8);
    }

    // Conservation along orbits of f_t. Orbits may legitimately halt when a
    // side shrinks below 2t, so sample seeds whose orbits complete.
    {
        std::vector<OrbitRecord> records;
        for (;;) {
            const Polygon pent = random_polygon(rng, 5);
            auto [recs, status] = orbit(pent, FrameLength{0.1 * pent.min_side()}, 100, cfg);
            if (status.kind == OrbitStatus::Completed) {
                records = std::move(recs);
                break;
            }
        }
        double drift = 0.0;
        const double a0 = *records.front().invariants.multi_area;
        for (const OrbitRecord& r : records) {
            drift = std::max(drift, rel_err(*r.invariants.multi_area, a0));
        }
        add("multi-area conserved by f_t", 5, drift, 1e-9);
    }
    {
        std::vector<OrbitRecord> records;
        for (;;) {
            const Polygon hex = random_polygon(rng, 6);
            auto [recs, status] = orbit(hex, FrameLength{0.1 * hex.min_side()}, 100, cfg);
            if (status.kind == OrbitStatus::Completed) {
                records = std::move(recs);
                break;
            }
        }
        double drift = 0.0;
        const Point2 v0 = *records.front().invariants.alternating_sum;
        const double scale = std::max(norm(v0), 1e-300);
        for (const OrbitRecord& r : records) {
            drift = std::max(drift, norm(*r.invariants.alternating_sum - v0) / scale);
        }
        add("alternating sum conserved by f_t", 6, drift, 1e-9);
    }

    // Inverse round trips.
    {
        double worst = 0.0;
        for (int n : {3, 4, 5, 6, 7}) {
            const Polygon p = random_polygon(rng, n);
            const double diam = p.diameter();
            for (Side side : {Side::Forward, Side::Backward}) {
                const FrameLength t{0.2 * p.min_side()};
                const Polygon image = map_one_sided(p, t, side);
                if (!(2.0 * t.t < image.min_side())) continue;
                const Polygon back = inverse_one_sided(image, t, side, cfg);
                for (int i = 0; i < n; ++i) {
                    worst = std::max(worst, distance(back[i], p[i]) / diam);
                }
            }
        }
        add("inverse round trip", 0, worst, 1e-10);
    }

    return rows;
}

bool run_verify(const VerifyOptions& opts, std::ostream& out) {
    const std::vector<VerifyRow> rows = verify_rows(opts);
    bool all_pass = true;

    out << "identity                               n     residual      tolerance   status\n";
    out << "-----------------------------------------------------------------------------\n";
    char buf[160];
    for (const VerifyRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-38s %-5s %-13.3e %-11.1e %s\n", r.identity.c_str(),
                      r.n > 0 ? std::to_string(r.n).c_str() : "-", r.residual, r.tolerance,
                      r.pass ? "pass" : "FAIL");
        out << buf;
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return all_pass;
}

}  // namespace bikelab::lab
