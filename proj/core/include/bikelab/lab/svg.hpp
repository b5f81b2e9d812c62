#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bikelab/geometry.hpp"

// Minimal deterministic SVG 1.1 scatter emitter for the experiment figures:
// plane mode plots points colored by vertex index, simplex mode maps angle
// triples barycentrically into an equilateral frame.

namespace bikelab::lab {

struct FigureSpec {
    int width = 800;
    int height = 800;
    double point_radius = 1.2;
    // Color per vertex index, cycled.
    std::vector<std::string> color_cycle = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e", "#17becf"};
    enum class Axis { Plane, AngleSimplex } axis = Axis::Plane;

    void validate() const;
};

// A point with a color-cycle index.
struct ColoredPoint {
    Point2 p;
    int color = 0;
};

// Scatter in data coordinates; the viewport is fitted to the data with a 5%
// margin and the y-axis points up. Throws EmptyInput on an empty set. The
// comment (config hash, rng seed) is embedded at the top of the document.
std::string emit_svg_plane(const std::vector<ColoredPoint>& points, const FigureSpec& spec,
                           const std::string& comment = "");

// Angle triples mapped barycentrically into an equilateral triangle frame
// (alpha, beta, gamma sum to pi); the simplex outline is drawn.
std::string emit_svg_simplex(const std::vector<std::pair<std::array<double, 3>, int>>& shapes,
                             const FigureSpec& spec, const std::string& comment = "");

}  // namespace bikelab::lab
