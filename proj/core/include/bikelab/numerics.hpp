#pragma once

#include <array>
#include <functional>
#include <vector>

#include "bikelab/errors.hpp"

// Generic numerical kernels shared by the dynamics and triangle modules:
// fixed-point iteration, Newton with finite-difference Jacobians, classical
// RK4 stepping, small dense determinant / null-space utilities, cross-ratio.
// Everything works on caller-owned std::vector<double> buffers.

namespace bikelab {

using Vec = std::vector<double>;
using VecFn = std::function<Vec(const Vec&)>;

struct ToleranceConfig {
    double fixed_point_tol = 1e-12;   // relative to the caller-supplied scale
    int fixed_point_max_iters = 10000;
    double newton_tol = 1e-11;
    int newton_max_iters = 100;
    double fd_step = 1e-6;            // relative finite-difference step
    double ode_step = 1e-3;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    Vec witness;
    // Max step-size ratio over the last (up to) 10 fixed-point iterations;
    // < 1 indicates empirical contraction. NaN until two steps were taken.
    double contraction = 0.0;
};

// Iterates x <- map(x) until |map(x) - x|_inf <= fixed_point_tol * scale.
// Non-convergence (including divergence to non-finite values) is reported
// via converged = false, never thrown.
SolveReport fixed_point(const VecFn& map, Vec start, const ToleranceConfig& cfg,
                        double scale = 1.0);

// Newton's method for residual(x) = 0, square systems only. The Jacobian is
// built from central differences with relative step cfg.fd_step. Throws
// SingularJacobian when elimination loses a pivot; returns converged = false
// after max_iters. The optional observer sees every accepted iterate.
SolveReport newton(const VecFn& residual, Vec seed, const ToleranceConfig& cfg,
                   const std::function<void(const Vec&)>& observer = nullptr);

// One classical RK4 step y -> y + h * increment(field).
Vec rk4_step(const VecFn& field, const Vec& y, double h);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
};

// Fixed-step RK4 from t = 0 to t = duration; the final step is shortened to
// land exactly on the endpoint. Trajectory includes the start state.
// Exceptions thrown by the field propagate unchanged.
Trajectory rk4_flow(const VecFn& field, Vec start, double duration,
                    const ToleranceConfig& cfg);

// Cross-ratio [a,b,c,d] = (a-c)(c-d) / ((a-b)(b-d)).
double cross_ratio(double a, double b, double c, double d);

// Determinant of a 6x6 matrix divided by the product of row norms (each
// floored at 1e-300), so the result is invariant under row scaling.
double det6_normalized(const std::array<std::array<double, 6>, 6>& rows);

// Determinant of a small dense matrix (row-major), LU with partial pivoting.
double det_dense(std::vector<Vec> rows);

// Solves A x = b in place for a small dense system; throws SingularJacobian
// when a pivot falls below 1e-14 times the largest row entry.
Vec solve_dense(std::vector<Vec> a, Vec b);

// One-dimensional null space of an m x n system (m = n - 1 rows expected),
// via elimination with full pivoting. Returns a unit-norm vector. Throws
// DegenerateConfiguration when the rows have rank < m.
Vec nullspace_vector(const std::vector<Vec>& rows, int cols);

// Singular values of a square matrix, descending, by one-sided Jacobi
// column orthogonalization (accurate for tiny singular values).
Vec singular_values(const std::vector<Vec>& a);

}  // namespace bikelab
