#include "bikelab/lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "bikelab/conics.hpp"
#include "bikelab/lab/csv.hpp"
#include "bikelab/lab/svg.hpp"
#include "bikelab/lab/verify.hpp"
#include "bikelab/triangle.hpp"

namespace bikelab::lab {

namespace {

std::string comment_line(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "config_hash=" << std::hex << cfg.hash() << std::dec << " rng_seed=" << cfg.rng_seed;
    return os.str();
}

std::string orbit_status_string(const OrbitStatus& st) {
    switch (st.kind) {
        case OrbitStatus::Completed:
            return "completed";
        case OrbitStatus::HaltedFrameTooLong:
            return "halted_frame_too_long:" + std::to_string(st.halted_at);
        case OrbitStatus::HaltedNoConvergence:
            return "halted_no_convergence:" + std::to_string(st.halted_at);
    }
    return "unknown";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
}

// --- orbit / quad-orbit ------------------------------------------------------

ExitReport run_orbit(const ExperimentConfig& cfg, std::ostream& out) {
    const Polygon& seed = *cfg.polygon;
    const int n = seed.size();
    const double t = cfg.resolve_t();
    auto [records, status] = orbit(seed, FrameLength{t}, cfg.steps, cfg.tolerances);

    const bool odd = n % 2 == 1;
    std::vector<std::string> columns = {"step"};
    for (int i = 0; i < n; ++i) columns.push_back("x_" + std::to_string(i));
    for (int i = 0; i < n; ++i) columns.push_back("y_" + std::to_string(i));
    columns.push_back("perimeter");
    if (odd) {
        columns.push_back("multi_area");
    } else {
        columns.push_back("alt_sum_x");
        columns.push_back("alt_sum_y");
    }
    columns.push_back("min_side");
    columns.push_back("status");

    CsvWriter csv(columns, comment_line(cfg));
    const std::string status_str = orbit_status_string(status);
    for (const OrbitRecord& rec : records) {
        std::vector<std::string> row;
        row.push_back(std::to_string(rec.step));
        for (int i = 0; i < n; ++i) row.push_back(format_double(rec.polygon[i].x));
        for (int i = 0; i < n; ++i) row.push_back(format_double(rec.polygon[i].y));
        row.push_back(format_double(rec.invariants.perimeter));
        if (odd) {
            row.push_back(format_double(*rec.invariants.multi_area));
        } else {
            row.push_back(format_double(rec.invariants.alternating_sum->x));
            row.push_back(format_double(rec.invariants.alternating_sum->y));
        }
        row.push_back(format_double(rec.invariants.min_side));
        row.push_back(status_str);
        csv.add_row(row);
    }
    if (!cfg.out.csv.empty()) csv.write_file(cfg.out.csv);

    if (!cfg.out.svg.empty()) {
        std::vector<ColoredPoint> pts;
        pts.reserve(records.size() * static_cast<std::size_t>(n));
        for (const OrbitRecord& rec : records) {
            for (int i = 0; i < n; ++i) pts.push_back({rec.polygon[i], i});
        }
        write_text(cfg.out.svg, emit_svg_plane(pts, cfg.figure, comment_line(cfg)));
    }

    const DriftReport drift = drift_report(records);
    out << "orbit: n=" << n << " t=" << format_double(t) << " steps=" << records.size() - 1
        << " status=" << status_str << "\n";
    for (const DriftColumn& c : drift.columns) {
        out << "  drift " << c.name << ": max_rel=" << format_double(c.max_rel_drift)
            << " slope=" << format_double(c.slope) << "\n";
    }
    out << "  center: (" << format_double(drift.center.x) << ", " << format_double(drift.center.y)
        << ")\n";

    // Conservation gate: the invariant of the relation must not drift.
    for (const DriftColumn& c : drift.columns) {
        const bool conserved_column =
            c.name == "multi_area" || c.name == "alt_sum_x" || c.name == "alt_sum_y";
        if (conserved_column && c.max_rel_drift > 1e-9) {
            return {1, "conservation failure: " + c.name + " drifted " +
                           format_double(c.max_rel_drift) +
                           " (limit 1e-9; multi-area / alternating-sum invariance)"};
        }
    }
    return {0, ""};
}

// --- flow ---------------------------------------------------------------------

ExitReport run_flow(const ExperimentConfig& cfg, std::ostream& out) {
    const Polygon& seed = *cfg.polygon;
    const int n = seed.size();
    const FlowResult flow = flow_xi(seed, cfg.duration, cfg.tolerances);

    std::vector<std::string> columns = {"time"};
    for (int i = 0; i < n; ++i) columns.push_back("x_" + std::to_string(i));
    for (int i = 0; i < n; ++i) columns.push_back("y_" + std::to_string(i));
    columns.push_back("perimeter");
    columns.push_back("min_side");
    const bool tri = n == 3;
    if (tri) {
        columns.push_back("area");
        columns.push_back("integral_I");
        columns.push_back("inradius");
    }

    CsvWriter csv(columns, comment_line(cfg));
    for (std::size_t k = 0; k < flow.states.size(); ++k) {
        const Polygon& p = flow.states[k];
        std::vector<double> row;
        row.push_back(flow.times[k]);
        for (int i = 0; i < n; ++i) row.push_back(p[i].x);
        for (int i = 0; i < n; ++i) row.push_back(p[i].y);
        const double per = perimeter(p);
        row.push_back(per);
        row.push_back(p.min_side());
        if (tri) {
            const double area = std::abs(signed_area(p));
            row.push_back(area);
            row.push_back(per * per / (4.0 * area));
            row.push_back(2.0 * area / per);
        }
        csv.add_row_numeric(row);
    }
    if (!cfg.out.csv.empty()) csv.write_file(cfg.out.csv);

    if (!cfg.out.svg.empty()) {
        std::vector<ColoredPoint> pts;
        for (const Polygon& p : flow.states) {
            for (int i = 0; i < n; ++i) pts.push_back({p[i], i});
        }
        write_text(cfg.out.svg, emit_svg_plane(pts, cfg.figure, comment_line(cfg)));
    }

    out << "flow: n=" << n << " duration=" << format_double(cfg.duration)
        << " step=" << format_double(cfg.tolerances.ode_step)
        << " states=" << flow.states.size()
        << (flow.status == FlowStatus::Completed ? "" : " (halted: degenerate side)") << "\n";
    out << "  perimeter drift (relative): " << format_double(flow.perimeter_drift) << "\n";
    // Gate scales with the RK4 global error so a coarse user step is not
    // misreported as a conservation violation.
    const double step = cfg.tolerances.ode_step;
    const double gate = std::max(1e-6, 1e3 * step * step * step * step * std::abs(cfg.duration));
    if (flow.perimeter_drift > gate) {
        return {1, "conservation failure: perimeter drifted " +
                       format_double(flow.perimeter_drift) +
                       " under the flow of xi (perimeter invariance)"};
    }
    return {0, ""};
}

// --- phase portrait -------------------------------------------------------------

ExitReport run_phase_portrait(const ExperimentConfig& cfg, std::ostream& out) {
    const double t = *cfg.t;
    CsvWriter csv({"seed", "iter", "alpha", "beta"}, comment_line(cfg));
    std::vector<std::pair<std::array<double, 3>, int>> dots;

    constexpr double kPi = 3.14159265358979323846;
    const std::size_t nseeds = cfg.shape_seeds.size();
    std::vector<std::vector<std::array<double, 2>>> per_seed(nseeds);

    const int threads = std::min<int>(worker_threads(), static_cast<int>(nseeds));
    const auto work = [&](std::size_t idx) {
        const auto& s = cfg.shape_seeds[idx];
        const double gamma = kPi - s[0] - s[1];
        std::vector<std::array<double, 2>>& track = per_seed[idx];
        try {
            Polygon p = embed_unit_area(s[0], s[1], gamma);
            for (int k = 0; k < cfg.iters; ++k) {
                const std::array<double, 3> ang = triangle_angles(p);
                track.push_back({ang[0], ang[1]});
                if (!(2.0 * t < p.min_side())) break;
                p = map_f(p, FrameLength{t}, 1, cfg.tolerances);
            }
        } catch (const Error&) {
            // seed outside the domain; keep whatever was recorded
        }
    };
    if (threads <= 1) {
        for (std::size_t i = 0; i < nseeds; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t i = static_cast<std::size_t>(w); i < nseeds;
                     i += static_cast<std::size_t>(threads)) {
                    work(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t idx = 0; idx < nseeds; ++idx) {
        for (std::size_t k = 0; k < per_seed[idx].size(); ++k) {
            const auto& ab = per_seed[idx][k];
            csv.add_row({std::to_string(idx), std::to_string(k), format_double(ab[0]),
                         format_double(ab[1])});
            dots.push_back({{ab[0], ab[1], kPi - ab[0] - ab[1]}, static_cast<int>(idx)});
        }
    }
    if (!cfg.out.csv.empty()) csv.write_file(cfg.out.csv);
    if (!cfg.out.svg.empty() && !dots.empty()) {
        write_text(cfg.out.svg, emit_svg_simplex(dots, cfg.figure, comment_line(cfg)));
    }
    out << "phase-portrait: t=" << format_double(t) << " seeds=" << nseeds
        << " points=" << dots.size() << "\n";
    return {0, ""};
}

// --- domain ----------------------------------------------------------------------

ExitReport run_domain(const ExperimentConfig& cfg, std::ostream& out) {
    const double t = *cfg.t;
    const DomainGrid grid =
        rasterize_domain(t, cfg.grid, cfg.max_steps, cfg.tolerances, worker_threads());

    CsvWriter csv({"alpha", "beta", "member", "survived_steps"}, comment_line(cfg));
    for (const DomainCell& cell : grid.cells) {
        csv.add_row({format_double(cell.alpha), format_double(cell.beta),
                     cell.member ? "1" : "0", std::to_string(cell.survived_steps)});
    }
    if (!cfg.out.csv.empty()) csv.write_file(cfg.out.csv);

    if (!cfg.out.svg.empty()) {
        constexpr double kPi = 3.14159265358979323846;
        std::vector<std::pair<std::array<double, 3>, int>> dots;
        for (const DomainCell& cell : grid.cells) {
            if (!cell.member) continue;
            dots.push_back({{cell.alpha, cell.beta, kPi - cell.alpha - cell.beta}, 0});
        }
        if (!dots.empty()) {
            write_text(cfg.out.svg, emit_svg_simplex(dots, cfg.figure, comment_line(cfg)));
        } else {
            out << "domain: no member cells, svg output skipped\n";
        }
    }

    out << "domain: t=" << format_double(t) << " grid=" << cfg.grid
        << " max_steps=" << cfg.max_steps << " members=" << grid.member_count << "/"
        << grid.cells.size() << "\n";
    return {0, ""};
}

// --- period6 -----------------------------------------------------------------------

ExitReport run_period6(const ExperimentConfig& cfg, std::ostream& out) {
    const Period6Sweep sweep =
        period6_continuation(cfg.t_min, cfg.t_max, cfg.t_step, cfg.tolerances);

    CsvWriter csv({"t", "a_1", "a_2", "a_3", "residual", "verified"}, comment_line(cfg));
    for (const Period6Row& row : sweep.rows) {
        csv.add_row({format_double(row.t), format_double(row.sides[0]),
                     format_double(row.sides[1]), format_double(row.sides[2]),
                     format_double(row.residual), row.verified ? "1" : "0"});
    }
    if (!cfg.out.csv.empty()) csv.write_file(cfg.out.csv);

    if (sweep.family_found) {
        out << "period6: family on [" << format_double(sweep.t_lower) << ", "
            << format_double(sweep.t_upper) << "] within [" << format_double(cfg.t_min) << ", "
            << format_double(cfg.t_max) << "]\n";
    } else {
        out << "period6: no verified 6-periodic family in [" << format_double(cfg.t_min) << ", "
            << format_double(cfg.t_max) << "]\n";
    }
    return {0, ""};
}

// --- conics -----------------------------------------------------------------------

ExitReport run_conics(const ExperimentConfig& cfg, std::ostream& out) {
    const Polygon& tri = *cfg.polygon;
    const FrameLength t{cfg.resolve_t()};

    const double coconic = coconic_residual(tri, t);
    const CarnotReport carnot = carnot_factors(tri, t);
    const InscribedConicReport inscribed = fit_inscribed_conic(tri, t);
    const IncidenceReport incidence = incidence_check(tri, t);

    std::ostringstream js;
    js << "{\n";
    js << "  \"config_hash\": \"" << std::hex << cfg.hash() << std::dec << "\",\n";
    js << "  \"rng_seed\": " << cfg.rng_seed << ",\n";
    js << "  \"t\": " << format_double(t.t) << ",\n";
    js << "  \"polygon\": " << polygon_to_json(tri) << ",\n";
    js << "  \"coconic_residual\": " << format_double(coconic) << ",\n";
    js << "  \"carnot_product\": " << format_double(carnot.product) << ",\n";
    js << "  \"carnot_factors\": [" << format_double(carnot.factors[0]) << ", "
       << format_double(carnot.factors[1]) << ", " << format_double(carnot.factors[2]) << "],\n";
    js << "  \"inscribed_conic_residual\": " << format_double(inscribed.sixth_line_residual)
       << ",\n";
    js << "  \"inscribed_dual_conic\": [";
    for (int i = 0; i < 6; ++i) {
        if (i) js << ", ";
        js << format_double(inscribed.dual.coefficients[static_cast<std::size_t>(i)]);
    }
    js << "],\n";
    js << "  \"incidence\": {\n";
    js << "    \"labeling_found\": " << (incidence.labeling_found ? "true" : "false") << ",\n";
    js << "    \"collinearity_residual\": " << format_double(incidence.collinearity_residual)
       << ",\n";
    js << "    \"concurrency_residual\": " << format_double(incidence.concurrency_residual)
       << ",\n";
    js << "    \"degenerate_intersections\": " << incidence.degenerate_intersections << "\n";
    js << "  }\n";
    js << "}\n";

    if (!cfg.out.json.empty()) write_text(cfg.out.json, js.str());
    out << js.str();

    const bool pass = coconic < 1e-10 && std::abs(carnot.product - 1.0) < 1e-12 &&
                      inscribed.sixth_line_residual < 1e-9 && incidence.labeling_found;
    if (!pass) {
        return {1, "conic incidence checks failed (coconic/Carnot/inscribed/incidence)"};
    }
    return {0, ""};
}

}  // namespace

DriftReport drift_report(std::span<const Series> series) {
    DriftReport rep;
    for (const Series& s : series) {
        if (s.values.size() < 2) throw Error("drift_report needs at least 2 records");
        DriftColumn col;
        col.name = s.name;
        const double v0 = s.values.front();
        const double scale = std::max(std::abs(v0), 1e-300);
        double sum_i = 0.0, sum_v = 0.0, sum_ii = 0.0, sum_iv = 0.0;
        const double count = static_cast<double>(s.values.size());
        for (std::size_t k = 0; k < s.values.size(); ++k) {
            col.max_rel_drift = std::max(col.max_rel_drift, std::abs(s.values[k] - v0) / scale);
            const double i = static_cast<double>(k);
            sum_i += i;
            sum_v += s.values[k];
            sum_ii += i * i;
            sum_iv += i * s.values[k];
        }
        const double denom = count * sum_ii - sum_i * sum_i;
        col.slope = denom != 0.0 ? (count * sum_iv - sum_i * sum_v) / denom : 0.0;
        rep.columns.push_back(std::move(col));
    }
    return rep;
}

DriftReport drift_report(const std::vector<OrbitRecord>& records) {
    if (records.size() < 2) throw Error("drift_report needs at least 2 records");
    const bool odd = records.front().polygon.size() % 2 == 1;

    std::vector<Series> series;
    Series per{"perimeter", {}}, ms{"min_side", {}};
    Series inv1{odd ? "multi_area" : "alt_sum_x", {}};
    Series inv2{"alt_sum_y", {}};
    for (const OrbitRecord& r : records) {
        per.values.push_back(r.invariants.perimeter);
        ms.values.push_back(r.invariants.min_side);
        if (odd) {
            inv1.values.push_back(*r.invariants.multi_area);
        } else {
            inv1.values.push_back(r.invariants.alternating_sum->x);
            inv2.values.push_back(r.invariants.alternating_sum->y);
        }
    }
    series.push_back(std::move(per));
    series.push_back(std::move(inv1));
    if (!odd) series.push_back(std::move(inv2));
    series.push_back(std::move(ms));

    DriftReport rep = drift_report(std::span<const Series>(series));
    Point2 center;
    std::size_t count = 0;
    for (const OrbitRecord& r : records) {
        for (const Point2& v : r.polygon.vertices()) {
            center += v;
            ++count;
        }
    }
    rep.center = center / static_cast<double>(count);
    return rep;
}

int worker_threads() {
    if (const char* env = std::getenv("BIKELAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

ExitReport run(const ExperimentConfig& cfg, std::ostream& out) {
    try {
        if (cfg.kind == "orbit" || cfg.kind == "quad-orbit") return run_orbit(cfg, out);
        if (cfg.kind == "flow") return run_flow(cfg, out);
        if (cfg.kind == "phase-portrait") return run_phase_portrait(cfg, out);
        if (cfg.kind == "domain") return run_domain(cfg, out);
        if (cfg.kind == "period6") return run_period6(cfg, out);
        if (cfg.kind == "conics") return run_conics(cfg, out);
        if (cfg.kind == "verify") {
            VerifyOptions opts;
            opts.rng_seed = cfg.rng_seed;
            opts.tolerances = cfg.tolerances;
            const bool ok = run_verify(opts, out);
            return ok ? ExitReport{0, ""} : ExitReport{1, "verification failed"};
        }
        return {2, "unknown experiment kind '" + cfg.kind + "'"};
    } catch (const ConfigError& e) {
        return {2, e.what()};
    } catch (const Error& e) {
        return {1, e.what()};
    }
}

}  // namespace bikelab::lab
