#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bikelab/dynamics.hpp"
#include "bikelab/geometry.hpp"
#include "bikelab/numerics.hpp"

// Triangle shape space and everything specific to three-gons: the angle-triple
// chart, unit-area embedding, the integral I = P^2 / (4 Area), the reduced
// area-form density, closed-form side lengths and area ratio of the one-sided
// images, the t -> infinity limit, membership in the always-defined set U_t,
// the 6-periodic isosceles orbit solver, and closed-loop tracing of the shape
// flow of xi.
//
// Shapes are stored as angle triples (alpha, beta, gamma), canonicalized to
// the lexicographically smallest of the three cyclic rotations. Cyclic
// relabelings are quotiented; reflections are not (they conjugate the
// dynamics to its inverse). Embeddings are counterclockwise with unit area.

namespace bikelab {

class TriangleShape {
public:
    // Validates positivity and alpha + beta + gamma = pi (to 1e-12), then
    // canonicalizes by cyclic rotation.
    explicit TriangleShape(const std::array<double, 3>& angles);

    const std::array<double, 3>& angles() const { return angles_; }
    double alpha() const { return angles_[0]; }
    double beta() const { return angles_[1]; }
    double gamma() const { return angles_[2]; }

    // Max component-wise distance between canonical triples.
    double distance(const TriangleShape& other) const;

private:
    std::array<double, 3> angles_;
};

// Interior angles at vertices 0, 1, 2 (no canonicalization).
std::array<double, 3> triangle_angles(const Polygon& p);

// Canonical shape of a nondegenerate triangle; DegenerateTriangle otherwise.
TriangleShape shape_of(const Polygon& p);

// Counterclockwise unit-area triangle with vertex 2 at the origin, vertex 1
// on the positive x-axis, and the given angles at vertices 0, 1, 2.
Polygon embed_unit_area(double alpha, double beta, double gamma);
Polygon embed_unit_area(const TriangleShape& s);

// Side lengths a[i] = |v[i] - v[i-1]| with strict triangle inequalities.
struct SideTriple {
    std::array<double, 3> a;
    explicit SideTriple(const std::array<double, 3>& sides);
};

SideTriple sides_of(const Polygon& tri);

// CCW triangle realizing the given side lengths (vertex 2 at origin,
// vertex 1 on the positive x-axis).
Polygon triangle_from_sides(const SideTriple& s);

// I = cot(alpha/2) + cot(beta/2) + cot(gamma/2) = P^2 / (4 Area); conserved
// along the shape flow of xi.
double integral_I(const TriangleShape& s);
// The same quantity as the cotangent product (trigonometric identity).
double integral_I_product(const TriangleShape& s);

// Density of the reduced area form in the (alpha, beta) chart:
// 1 / (2 sin(alpha) sin(beta) sin(gamma)).
double reduced_form_density(const TriangleShape& s);

// Side lengths of the one-sided image (Forward = q_t, Backward = r_t), in the
// same |v[i] - v[i-1]| indexing as the input. Two algebraically equivalent
// closed forms; both are kept so they can be cross-checked.
SideTriple sides_after(const SideTriple& s, FrameLength t, Side side);
SideTriple sides_after_alt(const SideTriple& s, FrameLength t, Side side);

// Area(q_t(P)) / Area(P) = ((t+a)(t+b)(t+c) - t^3) / (abc); the same ratio
// holds for r_t. The _alt form is the expanded polynomial.
double area_ratio(const SideTriple& s, double t);
double area_ratio_alt(const SideTriple& s, double t);

// The t -> infinity limit of the side-length maps (zeroth order in 1/t):
// squared sides ((a_i + a_{i+2})^2 - a_{i+1}^2) / (a_i a_{i+2}) and the
// Backward analogue. Products of the two directions' sides coincide.
SideTriple limit_sides(const SideTriple& s, Side side);

// Membership in U_t: embeds the shape at unit area and iterates f_t.
// Member iff max_steps iterations complete with min side > 2t throughout.
struct DomainMembership {
    bool member = false;
    int survived_steps = 0;
};
DomainMembership domain_membership(const TriangleShape& s, double t, int max_steps,
                                   const ToleranceConfig& cfg);

struct DomainCell {
    double alpha = 0.0;
    double beta = 0.0;
    bool member = false;
    int survived_steps = 0;
};

struct DomainGrid {
    int grid_n = 0;
    double t = 0.0;
    std::vector<DomainCell> cells;  // cell centers with alpha + beta < pi
    int member_count = 0;
};

// Rasterizes U_t over an N x N grid of the (alpha, beta) simplex. Cells are
// independent; `threads` > 1 splits them across workers (deterministic
// output order either way).
DomainGrid rasterize_domain(double t, int grid_n, int max_steps, const ToleranceConfig& cfg,
                            int threads = 1);

// --- 6-periodic isosceles orbits -----------------------------------------

// Solves, at fixed frame length t, for side lengths (a1, a2, a3) of a rear
// triangle P such that q_t(P) and r_t(P) are both isosceles and q_t(P) has
// unit area; then verifies the induced orbit: six applications of f_t return
// the initial shape, intermediate shapes alternating between two isosceles
// classes.
struct Period6Result {
    bool converged = false;       // Newton reached the residual tolerance
    bool verified = false;        // root is non-equilateral and the 6-cycle checks out
    std::string reason;           // failure diagnostics when !verified
    std::array<double, 3> sides{};
    double residual = 0.0;
    int iterations = 0;
    double shape_return_error = 0.0;      // canonical-shape gap after 6 steps
    std::array<double, 3> orbit_shape_even{};  // canonical angles of steps 0,2,4
    std::array<double, 3> orbit_shape_odd{};   // canonical angles of steps 1,3,5
};

Period6Result period6_search(double t, const SideTriple& seed, const ToleranceConfig& cfg);

// Newton residual of the three conditions at (a1, a2, a3); exposed for tests.
Vec period6_residual(const Vec& sides, double t);

struct Period6Row {
    double t = 0.0;
    std::array<double, 3> sides{};
    double residual = 0.0;
    bool verified = false;
};

struct Period6Sweep {
    std::vector<Period6Row> rows;
    bool family_found = false;
    double t_lower = 0.0;  // smallest t with a verified orbit
    double t_upper = 0.0;  // largest t with a verified orbit
};

// Continuation over [t_min, t_max] with the given step, anchored at t = 0.56
// (or the nearest grid point inside the range) and walked outward, each solve
// seeded by the previous root. Seeds at the anchor perturb the equilateral
// unit-area side by a few percent.
Period6Sweep period6_continuation(double t_min, double t_max, double t_step,
                                  const ToleranceConfig& cfg);

// --- shape-flow loops ------------------------------------------------------

// Integrates the flow of xi from the unit-area embedding of a shape until the
// ordered angle triple returns (one closed loop in shape space), recording
// the isometric-return dips of the sorted side lengths along the way.
struct ShapeLoopDip {
    double time = 0.0;
    double sorted_side_error = 0.0;
    std::array<double, 3> angles{};  // ordered triple at the dip
};

struct ShapeLoopResult {
    bool closed = false;            // ordered triple returned within the time cap
    double period = 0.0;
    double ordered_return_error = 0.0;
    double max_integral_drift = 0.0;   // drift of I along the loop
    double max_perimeter_drift = 0.0;  // relative
    std::vector<ShapeLoopDip> dips;    // isometric returns (sorted sides match start)
    // True when the angle triples at the dips realize all three cyclic
    // rotations of the starting triple.
    bool visits_all_cyclic_relabelings = false;
};

ShapeLoopResult trace_shape_loop(const TriangleShape& s, const ToleranceConfig& cfg,
                                 double max_time = 400.0);

// Image of (alpha, beta) under the unit-area shape map induced by f_t, read
// off as the image angles at vertices 0 and 1 (no canonicalization; smooth in
// (alpha, beta), suitable for finite differences and phase portraits).
std::pair<double, double> shape_chart_map(double alpha, double beta, double t,
                                          const ToleranceConfig& cfg);

}  // namespace bikelab
