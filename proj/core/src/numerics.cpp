#include "bikelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace bikelab {

namespace {

double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Euclidean step size; conformal contractions then report their Lipschitz
// constant exactly.
double euclid_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

bool all_finite(const Vec& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

SolveReport fixed_point(const VecFn& map, Vec start, const ToleranceConfig& cfg, double scale) {
    SolveReport rep;
    rep.witness = std::move(start);
    const double tol = cfg.fixed_point_tol * scale;
    std::deque<double> step_sizes;
    double prev_step = std::numeric_limits<double>::quiet_NaN();
    rep.contraction = std::numeric_limits<double>::quiet_NaN();

    for (int it = 0; it < cfg.fixed_point_max_iters; ++it) {
        Vec next = map(rep.witness);
        const double step = euclid_dist(next, rep.witness);
        rep.iterations = it + 1;
        rep.residual = step;
        if (!all_finite(next) || step > 1e100) {
            rep.witness = std::move(next);
            return rep;  // diverged
        }
        if (std::isfinite(prev_step) && prev_step > 0.0) {
            step_sizes.push_back(step / prev_step);
            if (step_sizes.size() > 10) step_sizes.pop_front();
            rep.contraction = *std::max_element(step_sizes.begin(), step_sizes.end());
        }
        prev_step = step;
        rep.witness = std::move(next);
        if (step <= tol) {
            rep.converged = true;
            return rep;
        }
    }
    return rep;
}

SolveReport newton(const VecFn& residual, Vec seed, const ToleranceConfig& cfg,
                   const std::function<void(const Vec&)>& observer) {
    const std::size_t k = seed.size();
    SolveReport rep;
    rep.witness = std::move(seed);

    Vec r = residual(rep.witness);
    if (r.size() != k) throw DimensionMismatch("newton needs a square system");
    rep.residual = inf_norm(r);
    if (observer) observer(rep.witness);

    for (int it = 0; it < cfg.newton_max_iters; ++it) {
        if (rep.residual <= cfg.newton_tol) {
            rep.converged = true;
            return rep;
        }
        // Central-difference Jacobian, column by column.
        std::vector<Vec> jac(k, Vec(k, 0.0));
        for (std::size_t j = 0; j < k; ++j) {
            const double h = cfg.fd_step * std::max(1.0, std::abs(rep.witness[j]));
            Vec xp = rep.witness, xm = rep.witness;
            xp[j] += h;
            xm[j] -= h;
            const Vec rp = residual(xp);
            const Vec rm = residual(xm);
            for (std::size_t i = 0; i < k; ++i) jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
        }
        Vec rhs(k);
        for (std::size_t i = 0; i < k; ++i) rhs[i] = -r[i];
        Vec delta = solve_dense(std::move(jac), std::move(rhs));

        // Backtracking: halve the step while the residual norm grows.
        double lambda = 1.0;
        Vec trial(k);
        Vec r_trial;
        for (int bt = 0; bt < 6; ++bt) {
            for (std::size_t i = 0; i < k; ++i) trial[i] = rep.witness[i] + lambda * delta[i];
            r_trial = residual(trial);
            if (all_finite(r_trial) && inf_norm(r_trial) < rep.residual) break;
            lambda *= 0.5;
        }
        rep.witness = trial;
        r = std::move(r_trial);
        rep.residual = inf_norm(r);
        rep.iterations = it + 1;
        if (observer) observer(rep.witness);
        if (!all_finite(r)) return rep;
    }
    rep.converged = rep.residual <= cfg.newton_tol;
    return rep;
}

Vec rk4_step(const VecFn& field, const Vec& y, double h) {
    const std::size_t d = y.size();
    const Vec k1 = field(y);
    Vec tmp(d);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const Vec k2 = field(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const Vec k3 = field(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
    const Vec k4 = field(tmp);
    Vec out(d);
    for (std::size_t i = 0; i < d; ++i) {
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

Trajectory rk4_flow(const VecFn& field, Vec start, double duration, const ToleranceConfig& cfg) {
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(start);
    if (duration == 0.0) return traj;

    const double h0 = cfg.ode_step;
    const double sign = duration < 0.0 ? -1.0 : 1.0;
    const double total = std::abs(duration);
    double t = 0.0;
    Vec y = std::move(start);
    while (t < total) {
        const double h = std::min(h0, total - t);
        y = rk4_step(field, y, sign * h);
        t += h;
        traj.times.push_back(sign * t);
        traj.states.push_back(y);
    }
    return traj;
}

double cross_ratio(double a, double b, double c, double d) {
    const double den = (a - b) * (b - d);
    if (den == 0.0 || !std::isfinite(den)) {
        throw DegenerateQuadruple("cross_ratio denominator (a-b)(b-d) vanished");
    }
    return (a - c) * (c - d) / den;
}

double det_dense(std::vector<Vec> rows) {
    const std::size_t n = rows.size();
    double sign = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
        }
        if (rows[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(rows[pivot], rows[col]);
            sign = -sign;
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = rows[r][col] / rows[col][col];
            for (std::size_t c = col; c < n; ++c) rows[r][c] -= f * rows[col][c];
        }
    }
    double d = sign;
    for (std::size_t i = 0; i < n; ++i) d *= rows[i][i];
    return d;
}

double det6_normalized(const std::array<std::array<double, 6>, 6>& rows) {
    std::vector<Vec> m(6, Vec(6));
    double scale = 1.0;
    for (int i = 0; i < 6; ++i) {
        double s = 0.0;
        for (int j = 0; j < 6; ++j) {
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            s += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        scale *= std::max(std::sqrt(s), 1e-300);
    }
    return det_dense(std::move(m)) / scale;
}

Vec solve_dense(std::vector<Vec> a, Vec b) {
    const std::size_t n = a.size();
    double max_entry = 0.0;
    for (const Vec& row : a) max_entry = std::max(max_entry, inf_norm(row));
    const double pivot_floor = 1e-14 * std::max(max_entry, 1e-300);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < pivot_floor) {
            throw SingularJacobian("pivot " + std::to_string(std::abs(a[pivot][col])) +
                                   " below floor in dense solve");
        }
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

Vec nullspace_vector(const std::vector<Vec>& rows, int cols) {
    const std::size_t m = rows.size();
    const std::size_t n = static_cast<std::size_t>(cols);
    std::vector<Vec> a = rows;
    std::vector<std::size_t> col_perm(n);
    for (std::size_t j = 0; j < n; ++j) col_perm[j] = j;

    double max_entry = 0.0;
    for (const Vec& row : a) max_entry = std::max(max_entry, inf_norm(row));
    const double pivot_floor = 1e-10 * std::max(max_entry, 1e-300);

    std::size_t rank = 0;
    for (std::size_t step = 0; step < m; ++step) {
        // Full pivoting over the remaining block.
        std::size_t pr = step, pc = step;
        double best = 0.0;
        for (std::size_t r = step; r < m; ++r) {
            for (std::size_t c = step; c < n; ++c) {
                if (std::abs(a[r][c]) > best) {
                    best = std::abs(a[r][c]);
                    pr = r;
                    pc = c;
                }
            }
        }
        if (best < pivot_floor) break;
        std::swap(a[pr], a[step]);
        if (pc != step) {
            for (std::size_t r = 0; r < m; ++r) std::swap(a[r][pc], a[r][step]);
            std::swap(col_perm[pc], col_perm[step]);
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == step) continue;
            const double f = a[r][step] / a[step][step];
            for (std::size_t c = step; c < n; ++c) a[r][c] -= f * a[step][c];
        }
        ++rank;
    }
    if (rank < m) {
        throw DegenerateConfiguration("nullspace system has rank " + std::to_string(rank) +
                                      " < " + std::to_string(m));
    }
    if (n != m + 1) throw DimensionMismatch("nullspace_vector expects an (n-1) x n system");

    // Free variable = last permuted column; back-substitute the pivots.
    Vec x(n, 0.0);
    x[col_perm[n - 1]] = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        x[col_perm[i]] = -a[i][n - 1] / a[i][i];
    }
    double s = 0.0;
    for (double v : x) s += v * v;
    const double inv = 1.0 / std::sqrt(s);
    for (double& v : x) v *= inv;
    return x;
}

Vec singular_values(const std::vector<Vec>& a) {
    // One-sided Jacobi (Hestenes): rotate column pairs until mutually
    // orthogonal; singular values are the final column norms. Working on A
    // itself (not A^T A) keeps tiny singular values accurate to ~eps * |A|.
    const std::size_t n = a.size();
    std::vector<Vec> cols(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) cols[j][i] = a[i][j];
    }
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    app += cols[p][k] * cols[p][k];
                    aqq += cols[q][k] * cols[q][k];
                    apq += cols[p][k] * cols[q][k];
                }
                if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double xp = cols[p][k], xq = cols[q][k];
                    cols[p][k] = c * xp - s * xq;
                    cols[q][k] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) break;
    }
    Vec sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += cols[j][k] * cols[j][k];
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

}  // namespace bikelab
