#pragma once

#include <array>
#include <optional>
#include <vector>

#include "bikelab/dynamics.hpp"
#include "bikelab/geometry.hpp"

// Conic incidence checks for a triangle P and its two one-sided images
// Q = q_t(P), R = r_t(P): the six vertices of Q and R are coconic, the Carnot
// products of cross-ratios on P's sides equal 1, the six side lines of Q and
// R are tangent to one inner conic, and the Q-line/R-line intersections form
// collinear triples through P's vertices with concurrent connecting lines.

namespace bikelab {

// Plane conic A x^2 + B xy + C y^2 + D x + E y + F = 0 (point form) or the
// same coefficients read as a quadratic in line coordinates (dual form).
// Coefficients are normalized to unit Euclidean norm with the first nonzero
// coefficient positive.
struct Conic {
    enum class Kind { Point, Dual };
    std::array<double, 6> coefficients{};
    Kind kind = Kind::Point;
};

// Homogeneous line u x + v y + w = 0, normalized to unit 3-norm.
struct Line {
    std::array<double, 3> h{};
};

Line line_through(const Point2& a, const Point2& b);

// Intersection of two lines; nullopt when they are (near-)parallel.
std::optional<Point2> intersect(const Line& a, const Line& b);

// Conic through five points (null space of the 5x6 Vandermonde-like system).
// Throws DegenerateConfiguration when the points do not determine a conic.
Conic fit_point_conic(const std::array<Point2, 5>& pts);

// Dual conic tangent to five lines.
Conic fit_dual_conic(const std::array<Line, 5>& lines);

// |conic(p)| with the conic's unit-norm coefficients and the point's monomial
// row normalized to unit norm; scale-free.
double point_residual(const Conic& conic, const Point2& p);

// Same for a line against a dual conic.
double line_residual(const Conic& dual, const Line& line);

// Normalized 6x6 determinant of the monomial rows of six points; near zero
// iff they lie on a common conic.
double coconic_residual(const std::array<Point2, 6>& pts);

// Coconic residual for the vertices of q_t(P) and r_t(P).
double coconic_residual(const Polygon& tri, FrameLength t);

struct CarnotReport {
    double product = 1.0;
    std::array<double, 3> factors{};  // one cross-ratio per side of P
};

// Cross-ratios of the quadruples (R_i, P_i, P_{i+1}, Q_{i+1}) in signed
// coordinates along each side line of P; every factor and the product are 1.
CarnotReport carnot_factors(const Polygon& tri, FrameLength t);
double carnot_product(const Polygon& tri, FrameLength t);

struct InscribedConicReport {
    Conic dual;                       // fitted through five of the six side lines
    double sixth_line_residual = 0.0; // the held-out line against the fitted conic
};

// Fits the conic tangent to Q_0Q_1, Q_1Q_2, Q_2Q_0, R_0R_1, R_1R_2 and
// evaluates the sixth line R_2R_0 against it. `hold_out` selects which of the
// six lines is tested instead (0..5, default 5).
InscribedConicReport fit_inscribed_conic(const Polygon& tri, FrameLength t, int hold_out = 5);

double inscribed_conic_check(const Polygon& tri, FrameLength t);

struct IncidenceReport {
    bool labeling_found = false;
    // For each vertex i of P: the two Q-line/R-line intersection points
    // (indexed by (q_line, r_line)) whose triple with P_i is collinear.
    std::array<std::array<int, 2>, 3> first_pick{};
    std::array<std::array<int, 2>, 3> second_pick{};
    double collinearity_residual = 0.0;  // max over the three triples
    double concurrency_residual = 0.0;   // normalized det of the three lines
    double coconic = 0.0;                // coconic residual, for diagnosis
    int degenerate_intersections = 0;    // near-parallel line pairs skipped
};

// Searches the nine Q-line/R-line intersections for a labeling that realizes
// the collinear triples through P's vertices and checks that the three
// connecting lines are concurrent. The labeling is searched, not hard-coded.
IncidenceReport incidence_check(const Polygon& tri, FrameLength t);

}  // namespace bikelab
