#include "bikelab/lab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bikelab/errors.hpp"
#include "bikelab/lab/csv.hpp"

namespace bikelab::lab {

namespace {

std::string num(double v) {
    // Round to 3 decimals for pixel coordinates; keeps files small and stable.
    const double r = std::round(v * 1000.0) / 1000.0;
    return format_double(r == 0.0 ? 0.0 : r);
}

std::string svg_open(const FigureSpec& spec, const std::string& comment) {
    std::string s;
    if (!comment.empty()) {
        s += "<!-- ";
        s += comment;
        s += " -->\n";
    }
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"";
    s += std::to_string(spec.width);
    s += "\" height=\"";
    s += std::to_string(spec.height);
    s += "\" viewBox=\"0 0 ";
    s += std::to_string(spec.width);
    s += ' ';
    s += std::to_string(spec.height);
    s += "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return s;
}

void add_circle(std::string& s, double cx, double cy, double r, const std::string& color) {
    s += "<circle cx=\"";
    s += num(cx);
    s += "\" cy=\"";
    s += num(cy);
    s += "\" r=\"";
    s += num(r);
    s += "\" fill=\"";
    s += color;
    s += "\"/>\n";
}

}  // namespace

void FigureSpec::validate() const {
    if (width <= 0 || height <= 0) throw Error("figure dimensions must be positive");
    if (!(point_radius > 0.0)) throw Error("point radius must be positive");
    if (color_cycle.empty()) throw Error("color cycle must be nonempty");
}

std::string emit_svg_plane(const std::vector<ColoredPoint>& points, const FigureSpec& spec,
                           const std::string& comment) {
    spec.validate();
    if (points.empty()) throw EmptyInput("no points to plot");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const ColoredPoint& cp : points) {
        xmin = std::min(xmin, cp.p.x);
        xmax = std::max(xmax, cp.p.x);
        ymin = std::min(ymin, cp.p.y);
        ymax = std::max(ymax, cp.p.y);
    }
    const double spanx = std::max(xmax - xmin, 1e-9);
    const double spany = std::max(ymax - ymin, 1e-9);
    const double span = std::max(spanx, spany) * 1.1;
    const double cx = 0.5 * (xmin + xmax);
    const double cy = 0.5 * (ymin + ymax);
    const double scale = std::min(spec.width, spec.height) / span;

    std::string s = svg_open(spec, comment);
    for (const ColoredPoint& cp : points) {
        const double px = 0.5 * spec.width + (cp.p.x - cx) * scale;
        const double py = 0.5 * spec.height - (cp.p.y - cy) * scale;  // y up
        const std::string& color =
            spec.color_cycle[static_cast<std::size_t>(cp.color) % spec.color_cycle.size()];
        add_circle(s, px, py, spec.point_radius, color);
    }
    s += "</svg>\n";
    return s;
}

std::string emit_svg_simplex(const std::vector<std::pair<std::array<double, 3>, int>>& shapes,
                             const FigureSpec& spec, const std::string& comment) {
    spec.validate();
    if (shapes.empty()) throw EmptyInput("no shapes to plot");

    // Equilateral frame with corners for alpha, beta, gamma.
    const double margin = 0.06 * std::min(spec.width, spec.height);
    const double side = std::min(spec.width, spec.height) - 2.0 * margin;
    const Point2 corner_a{0.5 * spec.width - 0.5 * side, 0.5 * spec.height + side * 0.28867513459481287};
    const Point2 corner_b{0.5 * spec.width + 0.5 * side, corner_a.y};
    const Point2 corner_c{0.5 * spec.width, corner_a.y - side * 0.8660254037844386};

    std::string s = svg_open(spec, comment);
    s += "<polygon points=\"";
    for (const Point2& c : {corner_a, corner_b, corner_c}) {
        s += num(c.x);
        s += ',';
        s += num(c.y);
        s += ' ';
    }
    s.pop_back();
    s += "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    constexpr double kPi = 3.14159265358979323846;
    for (const auto& [angles, color_idx] : shapes) {
        const double wa = angles[0] / kPi, wb = angles[1] / kPi, wc = angles[2] / kPi;
        const Point2 p = wa * corner_a + wb * corner_b + wc * corner_c;
        const std::string& color =
            spec.color_cycle[static_cast<std::size_t>(color_idx) % spec.color_cycle.size()];
        add_circle(s, p.x, p.y, spec.point_radius, color);
    }
    s += "</svg>\n";
    return s;
}

}  // namespace bikelab::lab
