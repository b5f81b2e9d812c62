#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bikelab/lab/config.hpp"
#include "bikelab/lab/csv.hpp"
#include "bikelab/lab/experiments.hpp"
#include "bikelab/lab/svg.hpp"
#include "bikelab/lab/verify.hpp"

using namespace bikelab;
using namespace bikelab::lab;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "bikelab_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("format_double: shortest round-trip representation") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    const double third = 1.0 / 3.0;
    CHECK(std::strtod(format_double(third).c_str(), nullptr) == third);
    const double tiny = 1.2345678901234567e-300;
    CHECK(std::strtod(format_double(tiny).c_str(), nullptr) == tiny);
}

TEST_CASE("fnv1a64 pinned value") {
    CHECK(fnv1a64("abc") == 0xe71fa2190541574bULL);
}

TEST_CASE("csv writer") {
    CsvWriter w({"a", "b"}, "config_hash=1 rng_seed=2");
    w.add_row_numeric({1.5, -2.0});
    w.add_row({"x", "y"});
    CHECK(w.str() == "# config_hash=1 rng_seed=2\na,b\n1.5,-2\nx,y\n");
    CHECK_THROWS_AS(w.add_row({"only-one"}), Error);
}

TEST_CASE("svg: plane scatter golden shape") {
    FigureSpec spec;
    spec.width = 100;
    spec.height = 100;
    const std::string svg =
        emit_svg_plane({{{0, 0}, 0}, {{1, 0}, 1}, {{0, 1}, 2}}, spec);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::size_t circles = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++circles;
        pos += 7;
    }
    CHECK(circles == 3);
    CHECK_THROWS_AS(emit_svg_plane({}, spec), EmptyInput);
}

TEST_CASE("svg: equilateral shape sits at the simplex center") {
    FigureSpec spec;
    spec.width = 300;
    spec.height = 300;
    constexpr double kPi = 3.14159265358979323846;
    const std::string svg = emit_svg_simplex({{{kPi / 3, kPi / 3, kPi / 3}, 0}}, spec);
    // the one dot is the mean of the three frame corners: x = width / 2
    CHECK(svg.find("<circle cx=\"150\"") != std::string::npos);
}

TEST_CASE("config: parsing, validation, polygon round trip") {
    const ExperimentConfig cfg = parse_config(
        R"({"kind":"orbit","polygon":[[0,0],[1,0],[0.5,0.9]],"t_rel":0.1,"steps":16,"rng_seed":7})");
    CHECK(cfg.kind == "orbit");
    CHECK(cfg.steps == 16);
    CHECK(cfg.rng_seed == 7);
    CHECK(cfg.polygon->size() == 3);
    CHECK(cfg.resolve_t() == doctest::Approx(0.1 * cfg.polygon->min_side()));

    CHECK_THROWS_AS(parse_config(R"({"kind":"nope"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"kind":"orbit"})"), ConfigError);  // no polygon
    CHECK_THROWS_AS(parse_config(R"({"kind":"orbit","polygon":[[0,0],[1,0]]})"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"kind":"quad-orbit","polygon":[[0,0],[1,0],[0.5,0.9]],"t":0.1})"),
        ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"kind":"domain"})"), ConfigError);  // needs t
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);

    const Polygon p({{0, 0}, {1.5, 0}, {0.25, 2}});
    const Polygon back = polygon_from_json(polygon_to_json(p));
    for (int i = 0; i < 3; ++i) CHECK(distance(back[i], p[i]) == 0.0);
}

TEST_CASE("drift report: constant and linearly drifting series") {
    std::vector<Series> series;
    series.push_back({"flat", std::vector<double>(50, 3.25)});
    Series lin{"lin", {}};
    for (int k = 0; k < 50; ++k) lin.values.push_back(2.0 + 0.125 * k);
    series.push_back(lin);

    const DriftReport rep = drift_report(std::span<const Series>(series));
    CHECK(rep.columns[0].max_rel_drift == 0.0);
    CHECK(std::abs(rep.columns[0].slope) < 1e-15);
    CHECK(rep.columns[1].slope == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("experiment run: orbit writes deterministic outputs") {
    const auto dir = temp_dir();
    ExperimentConfig cfg;
    cfg.kind = "orbit";
    cfg.polygon = Polygon({{0.1, 0.0}, {1.2, -0.1}, {1.9, 0.9}, {1.0, 1.7}, {-0.2, 1.0}});
    cfg.t_rel = 0.1;
    cfg.steps = 32;
    cfg.out.csv = (dir / "orbit.csv").string();
    cfg.out.svg = (dir / "orbit.svg").string();

    std::ostringstream out1, out2;
    const ExitReport r1 = run(cfg, out1);
    CHECK(r1.code == 0);
    const std::string csv1 = slurp(cfg.out.csv);
    const std::string svg1 = slurp(cfg.out.svg);

    const ExitReport r2 = run(cfg, out2);
    CHECK(r2.code == 0);
    CHECK(slurp(cfg.out.csv) == csv1);
    CHECK(slurp(cfg.out.svg) == svg1);
    CHECK(out1.str() == out2.str());

    // header names the columns; comment line carries hash and seed
    std::istringstream lines(csv1);
    std::string comment, header, first_row;
    std::getline(lines, comment);
    std::getline(lines, header);
    std::getline(lines, first_row);
    CHECK(comment.find("# config_hash=") == 0);
    CHECK(comment.find("rng_seed=12345") != std::string::npos);
    CHECK(header ==
          "step,x_0,x_1,x_2,x_3,x_4,y_0,y_1,y_2,y_3,y_4,perimeter,multi_area,min_side,status");
    CHECK(first_row.find("completed") != std::string::npos);
}

TEST_CASE("experiment run: flow reports perimeter drift") {
    ExperimentConfig cfg;
    cfg.kind = "flow";
    cfg.polygon = Polygon({{0, 0}, {2, 0}, {0.6, 1.4}});
    cfg.duration = 1.0;
    std::ostringstream out;
    const ExitReport rep = run(cfg, out);
    CHECK(rep.code == 0);
    CHECK(out.str().find("perimeter drift") != std::string::npos);
}

TEST_CASE("experiment run: conics emits a pass report") {
    ExperimentConfig cfg;
    cfg.kind = "conics";
    cfg.polygon = Polygon({{0, 0}, {2.1, 0}, {0.6, 1.3}});
    cfg.t_rel = 0.1;
    std::ostringstream out;
    const ExitReport rep = run(cfg, out);
    CHECK(rep.code == 0);
    CHECK(out.str().find("\"labeling_found\": true") != std::string::npos);
}

TEST_CASE("verify rows all pass") {
    VerifyOptions opts;
    const auto rows = verify_rows(opts);
    CHECK(rows.size() >= 20);
    for (const VerifyRow& r : rows) {
        INFO(r.identity, " n=", r.n, " residual=", r.residual, " tol=", r.tolerance);
        CHECK(r.pass);
    }
}
