#pragma once

#include <cstdint>
#include <vector>

#include "bikelab/dynamics.hpp"
#include "bikelab/geometry.hpp"
#include "bikelab/numerics.hpp"

// Numerical verification of the symplectic structure on odd-gons: the 2-form
// omega, its rank (kernel = parallel translations), the Hamiltonian identity
// for the field xi with the perimeter as Hamiltonian, the rotation identity
// for the multi-area, symplecticity of f_t, and the parent-coordinate form
// Omega = 4 omega.
//
// Tangent vectors live in R^{2n}, ordered (x_0..x_{n-1}, y_0..y_{n-1}).
// Working modulo translations is realized by restricting bilinear tests to
// the centroid-zero subspace, never by an explicit chart.

namespace bikelab {

// Measured fixtures, pinned once for the repository's sign and normalization
// conventions (det(u,v) = ux*vy - uy*vx; xi with the 1/2 factor):
//   i_xi omega      = kHamiltonianConstant * dP
//   d(multi_area)   = kRotationIdentitySign * i_eta omega,  eta_i = (-y_i, x_i)
inline constexpr double kHamiltonianConstant = 0.5;
inline constexpr double kRotationIdentitySign = -1.0;

// omega(u, v) for the form sum_{i<j} sign(i,j) (dx_i^dx_j + dy_i^dy_j); with
// 0-based indices sign(i,j) = +1 when i+j is odd, -1 when even. Requires odd
// n and u, v of length 2n. Bilinear and exactly antisymmetric (fixed
// evaluation order).
double omega_eval(int n, const Vec& u, const Vec& v);

// Numerical rank of the 2n x 2n matrix of omega: singular values above
// 1e-10 times the largest one. Equals 2n - 2 (kernel = translations).
int omega_rank(int n);

// Basis of 2n vectors spanning the centroid-zero subspace: each coordinate
// direction with its block average removed.
std::vector<Vec> centroid_zero_basis(int n);

// P + h * v as a polygon, v in the (x block, y block) layout.
Polygon apply_tangent(const Polygon& p, const Vec& v, double h);

struct HamiltonianCheck {
    double best_constant = 0.0;
    double residual = 0.0;  // max over test vectors of |omega(xi, v) - c * dP(v)|
};

// Tests i_xi omega = c * dP over `trials` random centroid-zero unit vectors,
// with dP by central differences (step cfg.fd_step * diameter). Returns the
// constant minimizing the max residual, and that residual. The constant is
// shape- and n-independent; kHamiltonianConstant records its value.
HamiltonianCheck hamiltonian_residual(const Polygon& p, int trials,
                                      const ToleranceConfig& cfg = {},
                                      std::uint64_t seed = 0x5eed0001ULL);

// Max over the centroid-zero basis of
// |d(multi_area)(v) - kRotationIdentitySign * omega(eta_rot, v)| / diameter^2,
// with d(multi_area) in closed form (the multi-area is quadratic).
double rotation_identity_residual(const Polygon& p);

// Max over pairs of centroid-zero basis vectors of |omega(Ju, Jv) - omega(u, v)|
// where J is the finite-difference Jacobian of map_f(., t, +1) at p.
double symplectic_pullback_residual(const Polygon& p, FrameLength t,
                                    const ToleranceConfig& cfg);

// Same comparison for the one-sided pullbacks: |(q_t^* omega - r_t^* omega)(u, v)|
// via Jacobians of map_one_sided. Equal pullbacks is the symplecticity of the
// relation itself.
double pullback_difference_residual(const Polygon& p, FrameLength t,
                                    const ToleranceConfig& cfg);

// Pulls Omega = sum_i (da_i^da_{i+1} + db_i^db_{i+1}) back through the linear
// parent reconstruction S and returns the max deviation from 4 * omega over
// all standard basis pairs. The computation is exact linear algebra.
double parent_form_check(const Polygon& p);

}  // namespace bikelab
