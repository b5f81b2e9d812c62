#include "bikelab/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "bikelab/rng.hpp"

namespace bikelab {

namespace {

void require_odd(int n, const char* what) {
    if (n % 2 == 0) throw EvenGon(std::string(what) + " requires an odd-gon");
}

// 0-based coefficient of dx_i ^ dx_j (i < j).
inline double omega_sign(int i, int j) { return ((i + j) % 2 == 1) ? 1.0 : -1.0; }

Vec flatten(const Polygon& p) {
    const int n = p.size();
    Vec x(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = p[i].x;
        x[static_cast<std::size_t>(n + i)] = p[i].y;
    }
    return x;
}

// Closed-form differential of the multi-area at p, as a covector in the
// (x block, y block) layout: dA(v) = grad . v.
Vec multi_area_gradient(const Polygon& p) {
    const int n = p.size();
    Vec grad(static_cast<std::size_t>(2 * n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double s = ((i + j) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{i+j}, 0-based
            // d/dPi det(Pi, Pj) = ( y_j, -x_j),  d/dPj det(Pi, Pj) = (-y_i,  x_i)
            grad[static_cast<std::size_t>(i)] += s * p[j].y;
            grad[static_cast<std::size_t>(n + i)] += s * -p[j].x;
            grad[static_cast<std::size_t>(j)] += s * -p[i].y;
            grad[static_cast<std::size_t>(n + j)] += s * p[i].x;
        }
    }
    return grad;
}

double dot_vec(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double omega_eval(int n, const Vec& u, const Vec& v) {
    require_odd(n, "omega_eval");
    if (u.size() != static_cast<std::size_t>(2 * n) || v.size() != static_cast<std::size_t>(2 * n)) {
        throw DimensionMismatch("omega_eval expects vectors of length 2n");
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double k = omega_sign(i, j);
            s += k * (u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] -
                      u[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(i)]);
            s += k * (u[static_cast<std::size_t>(n + i)] * v[static_cast<std::size_t>(n + j)] -
                      u[static_cast<std::size_t>(n + j)] * v[static_cast<std::size_t>(n + i)]);
        }
    }
    return s;
}

int omega_rank(int n) {
    require_odd(n, "omega_rank");
    const int d = 2 * n;
    std::vector<Vec> m(static_cast<std::size_t>(d), Vec(static_cast<std::size_t>(d), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double k = omega_sign(i, j);
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = k;
            m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -k;
            m[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(n + j)] = k;
            m[static_cast<std::size_t>(n + j)][static_cast<std::size_t>(n + i)] = -k;
        }
    }
    const Vec sv = singular_values(m);
    const double cutoff = 1e-10 * sv.front();
    int rank = 0;
    for (double s : sv) {
        if (s > cutoff) ++rank;
    }
    return rank;
}

std::vector<Vec> centroid_zero_basis(int n) {
    std::vector<Vec> basis;
    basis.reserve(static_cast<std::size_t>(2 * n));
    for (int a = 0; a < 2 * n; ++a) {
        Vec v(static_cast<std::size_t>(2 * n), 0.0);
        v[static_cast<std::size_t>(a)] = 1.0;
        const int block = a < n ? 0 : 1;
        for (int i = 0; i < n; ++i) {
            v[static_cast<std::size_t>(block * n + i)] -= 1.0 / n;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

Polygon apply_tangent(const Polygon& p, const Vec& v, double h) {
    const int n = p.size();
    std::vector<Point2> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = {p[i].x + h * v[static_cast<std::size_t>(i)],
                                            p[i].y + h * v[static_cast<std::size_t>(n + i)]};
    }
    return Polygon(std::move(out));
}

HamiltonianCheck hamiltonian_residual(const Polygon& p, int trials, const ToleranceConfig& cfg,
                                      std::uint64_t seed) {
    const int n = p.size();
    require_odd(n, "hamiltonian_residual");

    const std::vector<Point2> xi = field_xi(p);
    Vec xi_flat(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        xi_flat[static_cast<std::size_t>(i)] = xi[static_cast<std::size_t>(i)].x;
        xi_flat[static_cast<std::size_t>(n + i)] = xi[static_cast<std::size_t>(i)].y;
    }

    const double h = cfg.fd_step * p.diameter();
    Rng rng(seed);
    std::vector<double> lhs(static_cast<std::size_t>(trials));
    std::vector<double> rhs(static_cast<std::size_t>(trials));
    for (int k = 0; k < trials; ++k) {
        // Random centroid-zero direction, normalized to unit max-norm.
        Vec v(static_cast<std::size_t>(2 * n));
        for (double& c : v) c = rng.uniform(-1.0, 1.0);
        double mx = 0.0, my = 0.0;
        for (int i = 0; i < n; ++i) {
            mx += v[static_cast<std::size_t>(i)];
            my += v[static_cast<std::size_t>(n + i)];
        }
        double sup = 0.0;
        for (int i = 0; i < n; ++i) {
            v[static_cast<std::size_t>(i)] -= mx / n;
            v[static_cast<std::size_t>(n + i)] -= my / n;
            sup = std::max({sup, std::abs(v[static_cast<std::size_t>(i)]),
                            std::abs(v[static_cast<std::size_t>(n + i)])});
        }
        for (double& c : v) c /= sup;

        lhs[static_cast<std::size_t>(k)] = omega_eval(n, xi_flat, v);
        rhs[static_cast<std::size_t>(k)] =
            (perimeter(apply_tangent(p, v, h)) - perimeter(apply_tangent(p, v, -h))) / (2.0 * h);
    }

    // Least-squares start, then ternary refinement of the (convex) max residual.
    double num = 0.0, den = 0.0;
    for (int k = 0; k < trials; ++k) {
        num += lhs[static_cast<std::size_t>(k)] * rhs[static_cast<std::size_t>(k)];
        den += rhs[static_cast<std::size_t>(k)] * rhs[static_cast<std::size_t>(k)];
    }
    const double c0 = den > 0.0 ? num / den : 0.0;

    const auto max_res = [&](double c) {
        double m = 0.0;
        for (int k = 0; k < trials; ++k) {
            m = std::max(m, std::abs(lhs[static_cast<std::size_t>(k)] -
                                     c * rhs[static_cast<std::size_t>(k)]));
        }
        return m;
    };
    double lo = c0 - 0.5, hi = c0 + 0.5;
    for (int it = 0; it < 160; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (max_res(m1) <= max_res(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    HamiltonianCheck out;
    out.best_constant = 0.5 * (lo + hi);
    out.residual = max_res(out.best_constant);
    return out;
}

double rotation_identity_residual(const Polygon& p) {
    const int n = p.size();
    require_odd(n, "rotation_identity_residual");

    const Vec grad = multi_area_gradient(p);
    Vec eta(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        eta[static_cast<std::size_t>(i)] = -p[i].y;
        eta[static_cast<std::size_t>(n + i)] = p[i].x;
    }

    const double scale2 = p.diameter() * p.diameter();
    double worst = 0.0;
    for (const Vec& v : centroid_zero_basis(n)) {
        const double lhs = dot_vec(grad, v);
        const double rhs = kRotationIdentitySign * omega_eval(n, eta, v);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst / scale2;
}

namespace {

// Directional derivative of a polygon map along tangent v, central differences.
Vec map_directional(const std::function<Polygon(const Polygon&)>& f, const Polygon& p,
                    const Vec& v, double h) {
    const Vec plus = flatten(f(apply_tangent(p, v, h)));
    const Vec minus = flatten(f(apply_tangent(p, v, -h)));
    Vec out(plus.size());
    for (std::size_t i = 0; i < plus.size(); ++i) out[i] = (plus[i] - minus[i]) / (2.0 * h);
    return out;
}

}  // namespace

double symplectic_pullback_residual(const Polygon& p, FrameLength t, const ToleranceConfig& cfg) {
    const int n = p.size();
    require_odd(n, "symplectic_pullback_residual");
    const double h = cfg.fd_step * p.diameter();
    const auto f = [&](const Polygon& q) { return map_f(q, t, 1, cfg); };

    const std::vector<Vec> basis = centroid_zero_basis(n);
    std::vector<Vec> pushed;
    pushed.reserve(basis.size());
    for (const Vec& v : basis) pushed.push_back(map_directional(f, p, v, h));

    double worst = 0.0;
    for (std::size_t a = 0; a < basis.size(); ++a) {
        for (std::size_t b = a + 1; b < basis.size(); ++b) {
            const double lhs = omega_eval(n, pushed[a], pushed[b]);
            const double rhs = omega_eval(n, basis[a], basis[b]);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

double pullback_difference_residual(const Polygon& p, FrameLength t, const ToleranceConfig& cfg) {
    const int n = p.size();
    require_odd(n, "pullback_difference_residual");
    const double h = cfg.fd_step * p.diameter();
    const auto fq = [&](const Polygon& q) { return map_one_sided(q, t, Side::Forward); };
    const auto fr = [&](const Polygon& q) { return map_one_sided(q, t, Side::Backward); };

    const std::vector<Vec> basis = centroid_zero_basis(n);
    std::vector<Vec> dq, dr;
    dq.reserve(basis.size());
    dr.reserve(basis.size());
    for (const Vec& v : basis) {
        dq.push_back(map_directional(fq, p, v, h));
        dr.push_back(map_directional(fr, p, v, h));
    }

    double worst = 0.0;
    for (std::size_t a = 0; a < basis.size(); ++a) {
        for (std::size_t b = a + 1; b < basis.size(); ++b) {
            const double q_pull = omega_eval(n, dq[a], dq[b]);
            const double r_pull = omega_eval(n, dr[a], dr[b]);
            worst = std::max(worst, std::abs(q_pull - r_pull));
        }
    }
    return worst;
}

double parent_form_check(const Polygon& p) {
    const int n = p.size();
    require_odd(n, "parent_form_check");
    const int d = 2 * n;

    // Parent map acts block-wise: (Sx)_i = sum_j (-1)^j x_{i+j mod n}.
    const auto push = [n](const Vec& v) {
        Vec out(static_cast<std::size_t>(2 * n), 0.0);
        for (int i = 0; i < n; ++i) {
            double sx = 0.0, sy = 0.0;
            for (int j = 0; j < n; ++j) {
                const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
                sx += sgn * v[static_cast<std::size_t>((i + j) % n)];
                sy += sgn * v[static_cast<std::size_t>(n + (i + j) % n)];
            }
            out[static_cast<std::size_t>(i)] = sx;
            out[static_cast<std::size_t>(n + i)] = sy;
        }
        return out;
    };

    const auto eval_parent_form = [n](const Vec& a, const Vec& b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const int k = (i + 1) % n;
            s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k)] -
                 a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(i)];
            s += a[static_cast<std::size_t>(n + i)] * b[static_cast<std::size_t>(n + k)] -
                 a[static_cast<std::size_t>(n + k)] * b[static_cast<std::size_t>(n + i)];
        }
        return s;
    };

    std::vector<Vec> unit(static_cast<std::size_t>(d), Vec(static_cast<std::size_t>(d), 0.0));
    std::vector<Vec> pushed(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        unit[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = 1.0;
        pushed[static_cast<std::size_t>(a)] = push(unit[static_cast<std::size_t>(a)]);
    }

    double worst = 0.0;
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            const double lhs = eval_parent_form(pushed[static_cast<std::size_t>(a)],
                                                pushed[static_cast<std::size_t>(b)]);
            const double rhs = 4.0 * omega_eval(n, unit[static_cast<std::size_t>(a)],
                                                unit[static_cast<std::size_t>(b)]);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

}  // namespace bikelab
