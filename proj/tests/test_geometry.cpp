#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "exittime/geometry.hpp"

using namespace exittime;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

struct Box
{
    double umin, umax, vmin, vmax;
};

double angle_gap(double a, double b)
{
    return std::abs(std::remainder(a - b, 2.0 * pi));
}

bool same_point(Point2 const& p, Point2 const& q, double tol)
{
    bool const polar = p.chart == Chart::EuclideanPolar || p.chart == Chart::HalfPlanePolar
                       || p.chart == Chart::GeodesicPolar;
    if (polar)
        return std::abs(p.u - q.u) <= tol && angle_gap(p.v, q.v) <= tol;
    return std::abs(p.u - q.u) <= tol && std::abs(p.v - q.v) <= tol;
}

Point2 random_point(Chart c, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    switch (c)
    {
        case Chart::EuclideanCartesian:
            return {-10 + 20 * U(rng), -10 + 20 * U(rng), c};
        case Chart::EuclideanPolar:
            return {0.01 + 10 * U(rng), -pi + 2 * pi * U(rng), c};
        case Chart::HalfPlaneCartesian:
            return {0.05 + 10 * U(rng), -5 + 10 * U(rng), c};
        case Chart::HalfPlanePolar:
            return {0.05 + 10 * U(rng), -1.5 + 3.0 * U(rng), c};
        case Chart::UnitDisk: {
            double const r = 0.95 * std::sqrt(U(rng));
            double const t = 2 * pi * U(rng);
            return {r * std::cos(t), r * std::sin(t), c};
        }
        case Chart::GeodesicPolar:
            return {0.01 + 4 * U(rng), -pi + 2 * pi * U(rng), c};
    }
    return {};
}

}  // namespace

TEST_CASE("contains examples")
{
    CHECK(contains(parse_domain("ellipse:a=1,b=1,h=0,k=0"), {0, 0}));
    CHECK_FALSE(contains(parse_domain("parabola:p=1"), {1, 2}));
    CHECK(contains(parse_domain("horodisk:R=1"), {std::numbers::e, 5, Chart::HalfPlaneCartesian}));
    CHECK_FALSE(contains(parse_domain("horodisk:R=1"), {1, 5, Chart::HalfPlaneCartesian}));
    CHECK(contains(parse_domain("annulus:a=1,b=2"), {1.5, 2.0, Chart::EuclideanPolar}));
    CHECK_FALSE(contains(parse_domain("annulus:a=1,b=2"), {0.5, 0.0}));
    CHECK(contains(parse_domain("hdisk:R=1"), {0, 0, Chart::UnitDisk}));
    CHECK_FALSE(contains(parse_domain("hdisk:R=1"), {1.0, 0.0, Chart::GeodesicPolar}));
    CHECK_THROWS_AS(contains(parse_domain("horodisk:R=1"), {1, 0, Chart::EuclideanCartesian}),
                    ChartError);
}

TEST_CASE("convert examples")
{
    Point2 a = convert({2, 0, Chart::EuclideanPolar}, Chart::EuclideanCartesian);
    CHECK(a.u == Approx(2.0));
    CHECK(a.v == Approx(0.0));
    Point2 b = convert({1, 0, Chart::HalfPlaneCartesian}, Chart::UnitDisk);
    CHECK(std::abs(b.u) < 1e-15);
    CHECK(std::abs(b.v) < 1e-15);
    Point2 c = convert({1, pi / 4, Chart::HalfPlanePolar}, Chart::HalfPlaneCartesian);
    CHECK(c.u == Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(c.v == Approx(std::sqrt(0.5)).epsilon(1e-14));
    Point2 d = convert({1, 0, Chart::HalfPlaneCartesian}, Chart::GeodesicPolar);
    CHECK(d.u == Approx(0.0));

    CHECK_THROWS_AS(convert({-1, 0, Chart::HalfPlaneCartesian}, Chart::UnitDisk), ChartError);
    CHECK_THROWS_AS(convert({0, 0, Chart::EuclideanCartesian}, Chart::UnitDisk), ChartError);
    CHECK_THROWS_AS(convert({0.8, 0.8, Chart::UnitDisk}, Chart::HalfPlaneCartesian), ChartError);
}

TEST_CASE("chart round trips are the identity")
{
    std::mt19937_64 rng(1);
    std::vector<Chart> const euclid = {Chart::EuclideanCartesian, Chart::EuclideanPolar};
    std::vector<Chart> const hyper = {Chart::HalfPlaneCartesian, Chart::HalfPlanePolar,
                                      Chart::UnitDisk, Chart::GeodesicPolar};
    int checked = 0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i)
    {
        auto const& family = i % 3 == 0 ? euclid : hyper;
        Chart const from = family[i % family.size()];
        Chart const to = family[(i / 7) % family.size()];
        Point2 const p = random_point(from, rng);
        Point2 const back = convert(convert(p, to), from);
        bool const ok = same_point(p, back, 1e-12);
        if (!ok)
            worst = std::max({worst, std::abs(p.u - back.u), std::abs(p.v - back.v)});
        checked += ok;
    }
    CHECK(checked == 10000);
    CHECK(worst == 0.0);
}

TEST_CASE("conformal factor")
{
    CHECK(conformal_factor(Chart::EuclideanCartesian, 3, -4) == 1.0);
    CHECK(conformal_factor(Chart::HalfPlaneCartesian, 2, 7) == 0.25);
    CHECK(conformal_factor(Chart::UnitDisk, 0, 0) == 4.0);
    CHECK_THROWS_AS(conformal_factor(Chart::HalfPlaneCartesian, 0, 1), ChartError);
    CHECK_THROWS_AS(conformal_factor(Chart::UnitDisk, 0.6, 0.8), ChartError);
    CHECK_THROWS_AS(conformal_factor(Chart::EuclideanPolar, 1, 0), ChartError);

    double prev = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        double const r = 0.999 * i / 99.0;
        double const phi = conformal_factor(Chart::UnitDisk, r * std::cos(1.0), r * std::sin(1.0));
        CHECK(phi > prev);
        prev = phi;
    }
    CHECK(prev > 1e5);
}

TEST_CASE("hyperbolic distance")
{
    Point2 const base{1, 0, Chart::HalfPlaneCartesian};
    CHECK(hyperbolic_distance(base, {std::numbers::e, 0, Chart::HalfPlaneCartesian})
          == Approx(1.0).epsilon(1e-14));
    CHECK(hyperbolic_distance(base, {0.7, 2.0, Chart::GeodesicPolar}) == Approx(0.7).epsilon(1e-13));
    Point2 const q = geodesic_circle_point({2, 3, Chart::HalfPlaneCartesian}, 0.8, 2.0);
    CHECK(hyperbolic_distance({2, 3, Chart::HalfPlaneCartesian}, q) == Approx(0.8).epsilon(1e-12));
}

TEST_CASE("boundary distance examples")
{
    CHECK(boundary_distance_lb(parse_domain("annulus:a=1,b=3"), {2, 0, Chart::EuclideanPolar})
          == Approx(1.0));
    CHECK(boundary_distance_lb(parse_domain("horodisk:R=1"), {std::numbers::e, 0, Chart::HalfPlaneCartesian})
          == Approx(1.0));
    CHECK(boundary_distance_lb(parse_domain("hdisk:R=2"), {0.5, 1, Chart::GeodesicPolar})
          == Approx(1.5));
    CHECK(boundary_distance_lb(parse_domain("sector:alpha=1.0471975511965976"),
                               {2, 0, Chart::EuclideanPolar})
          == Approx(2 * std::sin(pi / 6)));
    CHECK_THROWS_AS(boundary_distance_lb(parse_domain("annulus:a=1,b=3"), {0.5, 0}),
                    OutsideDomainError);
    // Ellipse center: true distance is the minor semi-axis.
    double const e = boundary_distance_lb(parse_domain("ellipse:a=2,b=1,h=0,k=0"), {0, 0});
    CHECK(e <= 1.0);
    CHECK(e >= 0.98);
}

TEST_CASE("tube distance is translation invariant")
{
    double const alpha = 0.8;
    DomainSpec const d = parse_domain("geodesic-nbhd:alpha=0.8");
    double const radius = d.get_if<GeodesicNbhd>()->tube_radius();
    CHECK(radius == Approx(std::log(std::cos(alpha) / (1 - std::sin(alpha)))).epsilon(1e-14));
    for (double r : {0.1, 1.0, 10.0})
    {
        Point2 const p{r, 0, Chart::HalfPlanePolar};
        CHECK(boundary_distance_lb(d, p) == Approx(radius).epsilon(1e-12));
        CHECK(hyperbolic_distance(p, {r, alpha, Chart::HalfPlanePolar}) == Approx(radius).epsilon(1e-12));
    }
}

TEST_CASE("boundary distance balls stay inside")
{
    struct Case
    {
        char const* spec;
        Box box;
    };
    Case const cases[] = {
        {"ellipse:a=2,b=1,h=0.5,k=-0.3", {-1.5, 2.5, -1.3, 0.7}},
        {"parabola:p=1", {0, 6, -5, 5}},
        {"annulus:a=1,b=2", {-2, 2, -2, 2}},
        {"sector:alpha=1.0471975511965976", {0, 5, -3, 3}},
        {"hyperbola-convex:a=2,b=1", {2, 8, -4, 4}},
        {"hyperbola-concave:a=2,b=1", {-6, 6, -4, 4}},
        {"hdisk:R=1", {0.36, 2.72, -1.2, 1.2}},
        {"horodisk:R=1", {1, 6, -3, 3}},
        {"geodesic-nbhd:alpha=0.8", {0.05, 5, -5, 5}},
        {"geodesic-halfnbhd:alpha=0.8", {0.05, 5, 0, 5}},
        {"ideal-nbhd", {0.05, 5, 0, 5}},
    };
    std::mt19937_64 rng(2);
    int violations = 0;
    int points = 0;
    for (auto const& c : cases)
    {
        DomainSpec const d = parse_domain(c.spec);
        Chart const chart = default_cartesian_chart(d);
        std::uniform_real_distribution<double> U(c.box.umin, c.box.umax), V(c.box.vmin, c.box.vmax);
        int found = 0;
        while (found < 91)
        {
            Point2 const p{U(rng), V(rng), chart};
            if (!in_chart_range(p) || !contains(d, p))
                continue;
            ++found;
            double const rho = boundary_distance_lb(d, p) * (1 - 1e-9);
            REQUIRE(rho > 0.0);
            for (int k = 0; k < 64; ++k)
            {
                double const a = 2 * pi * k / 64;
                Point2 q = d.is_hyperbolic()
                               ? geodesic_circle_point(p, rho, a)
                               : Point2{p.u + rho * std::cos(a), p.v + rho * std::sin(a), chart};
                violations += !contains(d, q);
            }
        }
        points += found;
    }
    CHECK(points >= 1000);
    CHECK(violations == 0);
}

TEST_CASE("domain spec parsing")
{
    DomainSpec const e = parse_domain("ellipse:a=2,b=1,h=0,k=0");
    REQUIRE(e.get_if<Ellipse>());
    CHECK(e.get_if<Ellipse>()->a == 2.0);
    CHECK(parse_domain("ellipse:a=2,b=1").get_if<Ellipse>()->h == 0.0);
    CHECK(e.to_string() == "ellipse:a=2,b=1,h=0,k=0");

    for (char const* s : {"ellipse:a=2,b=1,h=0.5,k=-1", "parabola:p=1", "annulus:a=1,b=2",
                          "sector:alpha=1.0471975512", "hyperbola-convex:a=2,b=1",
                          "hyperbola-concave:a=2,b=1", "hdisk:R=1", "horodisk:R=1",
                          "geodesic-nbhd:alpha=0.8", "geodesic-halfnbhd:alpha=0.8", "ideal-nbhd"})
    {
        DomainSpec const d = parse_domain(s);
        CHECK(parse_domain(d.to_string()).to_string() == d.to_string());
    }

    auto key_of = [](char const* s) {
        try
        {
            parse_domain(s);
        }
        catch (ParseError const& e)
        {
            return e.key();
        }
        return std::string("<none>");
    };
    CHECK(key_of("ellipse:a=2") == "b");
    CHECK(key_of("ellipse:a=2,b=1,q=3") == "q");
    CHECK(key_of("ellipse:a=2,b=x") == "b");
    CHECK(key_of("ellipse:a=2,a=3,b=1") == "a");
    CHECK(key_of("annulus:a=3,b=2") == "a");
    CHECK(key_of("sector:alpha=4") == "alpha");
    CHECK(key_of("hdisk:R=-1") == "R");
    CHECK(key_of("blob:r=1") == "blob");
}

TEST_CASE("derived constants")
{
    DomainSpec const h = parse_domain("hyperbola-convex:a=2,b=1");
    auto const& hc = *h.get_if<HyperbolaConvex>();
    CHECK(hc.slope() == 0.5);
    CHECK(hc.mu() == Approx(std::atan(0.5)));
    CHECK(hc.focal() == Approx(std::sqrt(5.0)));
    CHECK(parse_domain("sector:alpha=1.5707963267948966").get_if<AngularSector>()->slope()
          == Approx(1.0));
    CHECK_FALSE(parse_domain("sector:alpha=2").finite_exit());
    CHECK(parse_domain("sector:alpha=1").finite_exit());
    CHECK_FALSE(parse_domain("hyperbola-concave:a=1,b=1").finite_exit());
    CHECK_FALSE(parse_domain("ideal-nbhd").finite_exit());
    CHECK(parse_domain("hdisk:R=1").relatively_compact());
    CHECK_FALSE(parse_domain("horodisk:R=1").relatively_compact());
}
