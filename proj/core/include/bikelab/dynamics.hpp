#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bikelab/geometry.hpp"
#include "bikelab/numerics.hpp"

// The one-sided maps q_t and r_t on polygons, their inverses (found as the
// fixed point of a contracting circle-to-circle chain), the composed map
// f_t = q_t . r_t^{-1}, and the limiting vector field xi of f_t as t -> 0.
//
// q_t pushes every vertex the distance t along the incoming edge direction,
// r_t against the outgoing one:
//   q_t(P)_i = P_i + t * e_i,      e_i = unit(P_i - P_{i-1}),
//   r_t(P)_i = P_i - t * e_{i+1}.
// Both are defined whenever the polygon has no degenerate side; the inverses
// additionally need 2t < min side.

namespace bikelab {

// The "bicycle frame" parameter t > 0.
struct FrameLength {
    double t;
    explicit FrameLength(double t_) : t(t_) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw Error("frame length must be positive and finite");
        }
    }
};

enum class Side { Forward, Backward };  // Forward = q_t, Backward = r_t

Polygon map_one_sided(const Polygon& p, FrameLength t, Side side);

// Inverse of q_t (Forward) or r_t (Backward). Requires 2t < min side of q;
// throws FrameTooLong otherwise. NoConvergence is thrown if the contraction
// iteration fails, which cannot happen when the precondition holds and is
// treated as a bug signal.
Polygon inverse_one_sided(const Polygon& q, FrameLength t, Side side,
                          const ToleranceConfig& cfg);

// Same, but also returns the fixed-point solve report (iteration count and
// empirical contraction factor of the chain map).
std::pair<Polygon, SolveReport> inverse_one_sided_report(const Polygon& q, FrameLength t,
                                                         Side side, const ToleranceConfig& cfg);

// direction = +1: f_t = q_t . r_t^{-1};  direction = -1: f_t^{-1} = r_t . q_t^{-1}.
Polygon map_f(const Polygon& p, FrameLength t, int direction, const ToleranceConfig& cfg);

// xi_i = (e_i + e_{i+1}) / 2: exterior-angle bisector direction at vertex i
// with |xi_i| = sin(half the interior angle).
std::vector<Point2> field_xi(const Polygon& p);

// Unit vectors along the short diagonals of an odd-gon parent:
// eta_i = unit(S_{i+1} - S_{i-1}). Vertex-wise this equals the edge unit
// vector of the midpoint polygon, so eta_i + eta_{i+1} = 2 xi_i there.
std::vector<Point2> parent_diagonal_field(const Polygon& s);

enum class FlowStatus { Completed, HaltedDegenerate };

struct FlowResult {
    std::vector<double> times;
    std::vector<Polygon> states;
    FlowStatus status = FlowStatus::Completed;
    // Max |perimeter(t) - perimeter(0)| / perimeter(0) along the trajectory.
    double perimeter_drift = 0.0;
};

// RK4 integration of xi in R^{2n}. A degenerate side mid-flow truncates the
// trajectory instead of throwing.
FlowResult flow_xi(const Polygon& p, double duration, const ToleranceConfig& cfg);

struct InvariantSnapshot {
    double perimeter = 0.0;
    // multi_area for odd n; unused for even n.
    std::optional<double> multi_area;
    // alternating sum for even n; unused for odd n.
    std::optional<Point2> alternating_sum;
    double min_side = 0.0;
};

InvariantSnapshot snapshot_invariants(const Polygon& p);

struct OrbitRecord {
    int step = 0;
    Polygon polygon;
    InvariantSnapshot invariants;
};

struct OrbitStatus {
    enum Kind { Completed, HaltedFrameTooLong, HaltedNoConvergence } kind = Completed;
    int halted_at = -1;  // step index at which iteration stopped, -1 if completed
};

// Iterates map_f(., t, +1) from p, recording an invariant snapshot per step.
// Validity is checked before every step; failures halt the orbit and are
// reported in the status, never thrown.
std::pair<std::vector<OrbitRecord>, OrbitStatus> orbit(const Polygon& p, FrameLength t,
                                                       int steps, const ToleranceConfig& cfg);

}  // namespace bikelab
