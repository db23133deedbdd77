#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "exittime/closed_form.hpp"
#include "exittime/pde_oracle.hpp"
#include "json.hpp"

using namespace exittime;
using doctest::Approx;

namespace {

double max_node_error(GridSolution const& g, DomainSpec const& d)
{
    double err = 0.0;
    for (int j = 0; j < g.nv; ++j)
    {
        for (int i = 0; i < g.nu; ++i)
        {
            if (g.mask[g.index(i, j)] == NodeKind::Exterior)
                continue;
            double const cf = exit_time(d, {g.node_u(i), g.node_v(j)}).value();
            err = std::max(err, std::abs(g.at(i, j) - cf));
        }
    }
    return err;
}

bool nonnegative(GridSolution const& g)
{
    for (std::size_t p = 0; p < g.values.size(); ++p)
    {
        if (g.mask[p] != NodeKind::Exterior && !(g.values[p] > 0.0))
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("ellipse grid reproduces the quadratic solution")
{
    DomainSpec const d = parse_domain("ellipse:a=2,b=1,h=0,k=0");
    SolveOptions o;
    o.h = 0.02;
    GridSolution const g = solve_grid(d, o);
    CHECK(g.residual <= 1e-10);
    CHECK(g.nearest({0, 0}) == Approx(0.4).epsilon(2e-4 / 0.4));
    CHECK(max_node_error(g, d) < 1e-6);
    CHECK(nonnegative(g));
}

TEST_CASE("second-order convergence on the annulus")
{
    DomainSpec const d = parse_domain("annulus:a=1,b=2");
    SolveOptions o;
    o.h = 0.04;
    double const coarse = max_node_error(solve_grid(d, o), d);
    o.h = 0.02;
    double const fine = max_node_error(solve_grid(d, o), d);
    INFO("coarse ", coarse, " fine ", fine);
    CHECK(coarse / fine >= 3.0);
}

TEST_CASE("oracle triangle on relatively compact domains")
{
    for (char const* spec : {"ellipse:a=2,b=1,h=0,k=0", "annulus:a=1,b=2"})
    {
        DomainSpec const d = parse_domain(spec);
        SolveOptions o;
        o.h = 0.01;
        o.omega = 0.0;
        GridSolution const g = solve_grid(d, o);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k)
        {
            double const t = 2 * std::numbers::pi * k / 20;
            double const s = 0.15 + 0.7 * ((k * 7) % 20) / 19.0;
            Point2 p = d.kind() == DomainKind::Ellipse
                           ? Point2{2 * s * std::cos(t), s * std::sin(t)}
                           : convert({1 + s, t, Chart::EuclideanPolar}, Chart::EuclideanCartesian);
            worst = std::max(worst, std::abs(g.interpolate(p) - exit_time(d, p).value()));
        }
        INFO(spec, " worst ", worst);
        CHECK(worst <= 5e-3);
    }
}

TEST_CASE("hyperbolic disk grids in both charts")
{
    DomainSpec const d = parse_domain("hdisk:R=1");
    double const plane = 2 * std::log(std::cosh(0.5));
    SolveOptions o;
    o.h = 0.01;
    o.chart = Chart::UnitDisk;
    GridSolution const g = solve_grid(d, o);
    CHECK(g.chart == GridChart::UnitDisk);
    CHECK(nonnegative(g));
    CHECK(g.interpolate({0, 0, Chart::UnitDisk}) == Approx(plane).epsilon(1e-3));
    o.chart = Chart::HalfPlaneCartesian;
    o.h = 0.01;
    GridSolution const h = solve_grid(d, o);
    CHECK(h.interpolate({1, 0, Chart::HalfPlaneCartesian}) == Approx(plane).epsilon(2e-3));
    // Same geometric point through either chart.
    Point2 const q{0.4, 1.0, Chart::GeodesicPolar};
    CHECK(g.interpolate(q) == Approx(h.interpolate(q)).epsilon(5e-3));
}

TEST_CASE("hyperbola strip grids")
{
    for (auto [spec, p] : {std::pair{"hyperbola-convex:a=2,b=1", Point2{4, 0}},
                           std::pair{"hyperbola-concave:a=2,b=1", Point2{0, 0}}})
    {
        DomainSpec const d = parse_domain(spec);
        SolveOptions o;
        o.h = 0.05;
        o.truncation = parse_truncation("strip:S=30");
        o.anchor = p;
        GridSolution const g = solve_grid(d, o);
        CHECK(g.chart == GridChart::HyperbolaStrip);
        CHECK(g.solver == "cg");
        CHECK(std::abs(g.interpolate(p) - exit_time(d, p).value()) <= 5e-3);
        CHECK(nonnegative(g));
    }
}

TEST_CASE("exhaustion runs are monotone")
{
    SolveOptions o;
    o.h = 0.5;
    o.omega = 0.0;
    std::vector<Truncation> tr;
    for (double n : {8.0, 32.0, 128.0})
    {
        Truncation t;
        t.kind = Truncation::Kind::Domain;
        t.domain = DomainSpec(exhaustion_ellipse(1, n));
        tr.push_back(t);
    }
    auto const par = exhaustion_run(parse_domain("parabola:p=1"), {1, 0}, tr, o);
    CHECK(par[0] <= par[1] + 1e-8);
    CHECK(par[1] <= par[2] + 1e-8);
    CHECK(par[2] <= 2.0);
    CHECK(par[2] == Approx(ellipse_exhaustion_term(1, 128, {1, 0})).epsilon(1e-6));

    tr.clear();
    for (char const* s : {"ellipse:a=4,b=4", "ellipse:a=16,b=16", "ellipse:a=64,b=64"})
        tr.push_back(parse_truncation(s));
    o.h = 0.25;
    auto const sec = exhaustion_run(parse_domain("sector:alpha=1.0471975511965976"), {1, 0}, tr, o);
    CHECK(sec[0] <= sec[1] + 1e-8);
    CHECK(sec[1] <= sec[2] + 1e-8);
    CHECK(sec[2] <= 0.25);
    auto const wide = exhaustion_run(parse_domain("sector:alpha=2"), {1, 0}, tr, o);
    CHECK(wide[0] < wide[1]);
    CHECK(wide[1] < wide[2]);

    // Horodisk box truncations grow toward log x.
    std::vector<Truncation> boxes = {parse_truncation("box:1,8,-4,4"), parse_truncation("box:1,16,-8,8")};
    o.h = 0.05;
    auto const horo = exhaustion_run(parse_domain("horodisk:R=1"), {std::numbers::e, 0, Chart::HalfPlaneCartesian},
                                     boxes, o);
    CHECK(horo[0] <= horo[1] + 1e-8);
    CHECK(horo[1] < 1.0);
}

TEST_CASE("solver options and errors")
{
    DomainSpec const e = parse_domain("ellipse:a=2,b=1,h=0,k=0");
    SolveOptions o;
    o.h = 0.05;
    CHECK_THROWS_AS(solve_grid(parse_domain("parabola:p=1"), o), TruncationRequiredError);
    o.bbox = Box{-1, 1, -1, 1};
    CHECK_THROWS_WITH_AS(solve_grid(e, o), doctest::Contains("bounding box"), ParameterError);
    o.bbox.reset();
    o.max_iter = 3;
    CHECK_THROWS_AS(solve_grid(e, o), SolverError);
    o.max_iter = 1000000;
    o.h = -1;
    CHECK_THROWS_AS(solve_grid(e, o), ParameterError);

    o.h = 0.05;
    o.parallel = false;
    GridSolution const serial = solve_grid(e, o);
    o.parallel = true;
    GridSolution const parallel = solve_grid(e, o);
    double diff = 0.0;
    for (std::size_t p = 0; p < serial.values.size(); ++p)
        diff = std::max(diff, std::abs(serial.values[p] - parallel.values[p]));
    CHECK(diff < 1e-9);

    o.solver = LinearSolver::CG;
    CHECK_THROWS_AS(solve_grid(e, o), ParameterError);

    CHECK_THROWS_AS(parse_truncation("box:1,2,3"), ParseError);
    CHECK_THROWS_AS(parse_truncation("strip:S=-1"), ParseError);
    CHECK(parse_truncation("strip:S=30").to_string() == "strip:S=30");
}

TEST_CASE("grid export")
{
    DomainSpec const d = parse_domain("ellipse:a=2,b=1,h=0,k=0");
    SolveOptions o;
    o.h = 0.1;
    GridSolution const g = solve_grid(d, o);
    auto const dir = std::filesystem::temp_directory_path();
    std::string const csv = (dir / "exittime_grid_test.csv").string();
    std::string const side = (dir / "exittime_grid_test.json").string();
    g.write_csv(csv);
    g.write_sidecar(side);

    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "u,v,value");
    int rows = 0;
    double best = 1e9, at_center = -1;
    while (std::getline(in, line))
    {
        double u, v, val;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &u, &v, &val) == 3);
        ++rows;
        if (std::hypot(u, v) < best)
        {
            best = std::hypot(u, v);
            at_center = val;
        }
    }
    CHECK(rows > 100);
    CHECK(at_center == Approx(0.4).epsilon(1e-3));

    std::ifstream js(side);
    auto const j = nlohmann::json::parse(js);
    CHECK(j["h"] == 0.1);
    CHECK(j["domain"] == "ellipse:a=2,b=1,h=0,k=0");
    CHECK(j["bbox"].size() == 4);
    CHECK(j["residual"].get<double>() <= 1e-10);
    std::filesystem::remove(csv);
    std::filesystem::remove(side);
}
