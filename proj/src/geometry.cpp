#include "exittime/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace exittime {
namespace {

using complex = std::complex<double>;
constexpr double pi = std::numbers::pi;

template<class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};

[[noreturn]] void throw_range(Point2 const& pt)
{
    throw ChartError("point (" + std::to_string(pt.u) + ", "
                     + std::to_string(pt.v) + ") is outside the range of the "
                     + std::string(to_string(pt.chart)) + " chart");
}

void require_range(Point2 const& pt)
{
    if (!in_chart_range(pt))
        throw_range(pt);
}

// Unit disk <-> right half plane, base point (1,0) <-> 0.
complex half_plane_to_disk(complex z)
{
    return (z - 1.0) / (z + 1.0);
}

complex disk_to_half_plane(complex w)
{
    return (1.0 + w) / (1.0 - w);
}

Point2 polar_to_cartesian(Point2 const& pt, Chart target)
{
    return {pt.u * std::cos(pt.v), pt.u * std::sin(pt.v), target};
}

Point2 cartesian_to_polar(Point2 const& pt, Chart target)
{
    return {std::hypot(pt.u, pt.v), std::atan2(pt.v, pt.u), target};
}

Point2 geodesic_to_disk(Point2 const& pt)
{
    double const rho = std::tanh(0.5 * pt.u);
    return {rho * std::cos(pt.v), rho * std::sin(pt.v), Chart::UnitDisk};
}

Point2 disk_to_geodesic(Point2 const& pt)
{
    double const rho = std::hypot(pt.u, pt.v);
    return {2.0 * std::atanh(rho), std::atan2(pt.v, pt.u), Chart::GeodesicPolar};
}

Point2 hpc_to_disk(Point2 const& pt)
{
    complex const w = half_plane_to_disk({pt.u, pt.v});
    return {w.real(), w.imag(), Chart::UnitDisk};
}

Point2 disk_to_hpc(Point2 const& pt)
{
    complex const z = disk_to_half_plane({pt.u, pt.v});
    return {z.real(), z.imag(), Chart::HalfPlaneCartesian};
}

// Single-edge conversions between adjacent charts.
Point2 step(Point2 const& pt, Chart target)
{
    using C = Chart;
    switch (pt.chart)
    {
        case C::EuclideanCartesian:
            if (target == C::EuclideanPolar)
                return cartesian_to_polar(pt, target);
            break;
        case C::EuclideanPolar:
            if (target == C::EuclideanCartesian)
                return polar_to_cartesian(pt, target);
            break;
        case C::HalfPlaneCartesian:
            if (target == C::HalfPlanePolar)
                return cartesian_to_polar(pt, target);
            if (target == C::UnitDisk)
                return hpc_to_disk(pt);
            break;
        case C::HalfPlanePolar:
            if (target == C::HalfPlaneCartesian)
                return polar_to_cartesian(pt, target);
            break;
        case C::UnitDisk:
            if (target == C::HalfPlaneCartesian)
                return disk_to_hpc(pt);
            if (target == C::GeodesicPolar)
                return disk_to_geodesic(pt);
            break;
        case C::GeodesicPolar:
            if (target == C::UnitDisk)
                return geodesic_to_disk(pt);
            break;
    }
    throw ChartError("no conversion from " + std::string(to_string(pt.chart))
                     + " to " + std::string(to_string(target)));
}

// Next chart on the path toward `target` in the chart graph
//   EC - EP      HPP - HPC - UD - GP
Chart next_hop(Chart from, Chart target)
{
    using C = Chart;
    constexpr auto rank = [](C c) {
        switch (c)
        {
            case C::HalfPlanePolar:
                return 0;
            case C::HalfPlaneCartesian:
                return 1;
            case C::UnitDisk:
                return 2;
            case C::GeodesicPolar:
                return 3;
            default:
                return -1;
        }
    };
    constexpr std::array chain{
        C::HalfPlanePolar, C::HalfPlaneCartesian, C::UnitDisk, C::GeodesicPolar};
    int const a = rank(from);
    int const b = rank(target);
    if (a < 0 || b < 0)
        return target;
    return chain[a < b ? a + 1 : a - 1];
}

//---------------------------------------------------------------------------//
// Level sets
//---------------------------------------------------------------------------//

LevelSample euclidean_level(DomainSpec const& domain, double x, double y)
{
    return std::visit(
        Overloaded{
            [&](Ellipse const& e) -> LevelSample {
                double const dx = x - e.h;
                double const dy = y - e.k;
                double const a2 = e.a * e.a;
                double const b2 = e.b * e.b;
                return {dx * dx / a2 + dy * dy / b2 - 1.0,
                        2.0 * dx / a2,
                        2.0 * dy / b2};
            },
            [&](Parabola const& p) -> LevelSample {
                return {y * y - 4.0 * p.p * x, -4.0 * p.p, 2.0 * y};
            },
            [&](Annulus const& an) -> LevelSample {
                double const rho = std::hypot(x, y);
                if (rho == 0.0)
                    return {an.a, -1.0, 0.0};
                double const inner = an.a - rho;
                double const outer = rho - an.b;
                if (inner >= outer)
                    return {inner, -x / rho, -y / rho};
                return {outer, x / rho, y / rho};
            },
            [&](AngularSector const& s) -> LevelSample {
                double const c = std::cos(0.5 * s.alpha);
                double const sn = std::sin(0.5 * s.alpha);
                double const sgn = y < 0.0 ? -1.0 : 1.0;
                return {std::abs(y) * c - x * sn, -sn, sgn * c};
            },
            [&](HyperbolaConvex const& hc) -> LevelSample {
                double const a2 = hc.a * hc.a;
                double const b2 = hc.b * hc.b;
                double const q = 1.0 - x * x / a2 + y * y / b2;
                if (-x > q)
                    return {-x, -1.0, 0.0};
                return {q, -2.0 * x / a2, 2.0 * y / b2};
            },
            [&](HyperbolaConcave const& hc) -> LevelSample {
                double const a2 = hc.a * hc.a;
                double const b2 = hc.b * hc.b;
                return {y * y / b2 - x * x / a2 - 1.0,
                        -2.0 * x / a2,
                        2.0 * y / b2};
            },
            [](auto const&) -> LevelSample {
                throw ChartError("hyperbolic domain has no Euclidean level set");
            },
        },
        domain.shape());
}

LevelSample half_plane_level(DomainSpec const& domain, double x, double y)
{
    return std::visit(
        Overloaded{
            [&](HyperbolicDisk const& d) -> LevelSample {
                double const c = std::cosh(d.R);
                double const s = std::sinh(d.R);
                double const dx = x - c;
                return {dx * dx + y * y - s * s, 2.0 * dx, 2.0 * y};
            },
            [&](Horodisk const& h) -> LevelSample {
                return {h.R - x, -1.0, 0.0};
            },
            [&](GeodesicNbhd const& g) -> LevelSample {
                double const c = std::cos(g.alpha);
                double const sn = std::sin(g.alpha);
                double const sgn = y < 0.0 ? -1.0 : 1.0;
                return {std::abs(y) * c - x * sn, -sn, sgn * c};
            },
            [&](GeodesicHalfNbhd const& g) -> LevelSample {
                double const c = std::cos(g.alpha);
                double const sn = std::sin(g.alpha);
                double const upper = y * c - x * sn;
                if (-y >= upper)
                    return {-y, 0.0, -1.0};
                return {upper, -sn, c};
            },
            [&](IdealNbhd const&) -> LevelSample {
                if (-y >= -x)
                    return {-y, 0.0, -1.0};
                return {-x, -1.0, 0.0};
            },
            [](auto const&) -> LevelSample {
                throw ChartError("Euclidean domain has no hyperbolic level set");
            },
        },
        domain.shape());
}

LevelSample disk_level(DomainSpec const& domain, double u, double v)
{
    if (auto const* d = domain.get_if<HyperbolicDisk>())
    {
        double const t = std::tanh(0.5 * d->R);
        return {u * u + v * v - t * t, 2.0 * u, 2.0 * v};
    }
    complex const w{u, v};
    if (std::norm(w) >= 1.0)
        return {1.0, u, v};
    complex const z = disk_to_half_plane(w);
    LevelSample const g = half_plane_level(domain, z.real(), z.imag());
    complex const dz = 2.0 / ((1.0 - w) * (1.0 - w));
    complex const grad = complex{g.du, g.dv} * std::conj(dz);
    return {g.value, grad.real(), grad.imag()};
}

//---------------------------------------------------------------------------//
// Nearest point on conic boundaries
//---------------------------------------------------------------------------//

struct Curve
{
    // Position, first and second derivative at parameter t.
    virtual void eval(double t, double* p, double* dp, double* ddp) const = 0;
    virtual ~Curve() = default;
};

double nearest_on_curve(Curve const& curve, double x, double y, double t_lo, double t_hi, bool periodic)
{
    constexpr int num_seeds = 32;
    double p[2], dp[2], ddp[2];
    auto dist2 = [&](double t) {
        curve.eval(t, p, dp, ddp);
        return (p[0] - x) * (p[0] - x) + (p[1] - y) * (p[1] - y);
    };

    double const span = t_hi - t_lo;
    int const denom = periodic ? num_seeds : num_seeds - 1;
    double best_t = t_lo;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < num_seeds; ++i)
    {
        double const t = t_lo + span * i / denom;
        double const d = dist2(t);
        if (d < best)
        {
            best = d;
            best_t = t;
        }
    }

    // Newton on the stationarity condition (P - q).P' = 0
    double t = best_t;
    double const max_step = span / denom;
    for (int iter = 0; iter < 50; ++iter)
    {
        curve.eval(t, p, dp, ddp);
        double const rx = p[0] - x;
        double const ry = p[1] - y;
        double const g = rx * dp[0] + ry * dp[1];
        double const hess = dp[0] * dp[0] + dp[1] * dp[1] + rx * ddp[0] + ry * ddp[1];
        double dt = hess > 0.0 ? -g / hess : (g > 0.0 ? -max_step : max_step);
        dt = std::clamp(dt, -max_step, max_step);
        double const next = t + dt;
        if (!periodic && (next < t_lo || next > t_hi))
            break;
        double const d = dist2(next);
        if (d > best)
            break;
        best = d;
        t = next;
        if (std::abs(dt) <= 1e-15 * (1.0 + std::abs(t)))
            break;
    }
    return std::sqrt(best);
}

struct EllipseCurve final : Curve
{
    Ellipse e;
    explicit EllipseCurve(Ellipse const& ee) : e(ee) {}
    void eval(double t, double* p, double* dp, double* ddp) const final
    {
        double const c = std::cos(t);
        double const s = std::sin(t);
        p[0] = e.h + e.a * c;
        p[1] = e.k + e.b * s;
        dp[0] = -e.a * s;
        dp[1] = e.b * c;
        ddp[0] = -e.a * c;
        ddp[1] = -e.b * s;
    }
};

struct ParabolaCurve final : Curve
{
    double p4;
    explicit ParabolaCurve(double p) : p4(4.0 * p) {}
    void eval(double s, double* p, double* dp, double* ddp) const final
    {
        p[0] = s * s / p4;
        p[1] = s;
        dp[0] = 2.0 * s / p4;
        dp[1] = 1.0;
        ddp[0] = 2.0 / p4;
        ddp[1] = 0.0;
    }
};

// x = a cosh t, y = b sinh t (right branch)
struct ConvexBranch final : Curve
{
    double a, b;
    ConvexBranch(double aa, double bb) : a(aa), b(bb) {}
    void eval(double t, double* p, double* dp, double* ddp) const final
    {
        double const c = std::cosh(t);
        double const s = std::sinh(t);
        p[0] = a * c;
        p[1] = b * s;
        dp[0] = a * s;
        dp[1] = b * c;
        ddp[0] = a * c;
        ddp[1] = b * s;
    }
};

// x = a sinh t, y = sign * b cosh t
struct ConcaveBranch final : Curve
{
    double a, b, sign;
    ConcaveBranch(double aa, double bb, double sg) : a(aa), b(bb), sign(sg) {}
    void eval(double t, double* p, double* dp, double* ddp) const final
    {
        double const c = std::cosh(t);
        double const s = std::sinh(t);
        p[0] = a * s;
        p[1] = sign * b * c;
        dp[0] = a * c;
        dp[1] = sign * b * s;
        ddp[0] = a * s;
        ddp[1] = sign * b * c;
    }
};

double normalize_angle(double theta)
{
    double t = std::remainder(theta, 2.0 * pi);
    if (t <= -pi)
        t += 2.0 * pi;
    return t;
}

}  // namespace

//---------------------------------------------------------------------------//
// Charts
//---------------------------------------------------------------------------//

std::string_view to_string(Chart chart)
{
    switch (chart)
    {
        case Chart::EuclideanCartesian:
            return "euclidean";
        case Chart::EuclideanPolar:
            return "euclidean-polar";
        case Chart::HalfPlaneCartesian:
            return "half-plane";
        case Chart::HalfPlanePolar:
            return "half-plane-polar";
        case Chart::UnitDisk:
            return "unit-disk";
        case Chart::GeodesicPolar:
            return "geodesic-polar";
    }
    return "?";
}

std::optional<Chart> chart_from_string(std::string_view name)
{
    for (auto c : {Chart::EuclideanCartesian,
                   Chart::EuclideanPolar,
                   Chart::HalfPlaneCartesian,
                   Chart::HalfPlanePolar,
                   Chart::UnitDisk,
                   Chart::GeodesicPolar})
    {
        if (to_string(c) == name)
            return c;
    }
    return std::nullopt;
}

bool is_hyperbolic(Chart chart)
{
    return chart != Chart::EuclideanCartesian && chart != Chart::EuclideanPolar;
}

bool in_chart_range(Point2 const& pt)
{
    if (!std::isfinite(pt.u) || !std::isfinite(pt.v))
        return false;
    switch (pt.chart)
    {
        case Chart::EuclideanCartesian:
            return true;
        case Chart::EuclideanPolar:
        case Chart::GeodesicPolar:
            return pt.u >= 0.0;
        case Chart::HalfPlaneCartesian:
            return pt.u > 0.0;
        case Chart::HalfPlanePolar:
            return pt.u > 0.0 && pt.v > -pi / 2 && pt.v < pi / 2;
        case Chart::UnitDisk:
            return pt.u * pt.u + pt.v * pt.v < 1.0;
    }
    return false;
}

Point2 convert(Point2 const& pt, Chart target)
{
    require_range(pt);
    if (pt.chart == target)
        return pt;
    if (is_hyperbolic(pt.chart) != is_hyperbolic(target))
    {
        throw ChartError("no conversion between " + std::string(to_string(pt.chart))
                         + " and " + std::string(to_string(target)));
    }
    Point2 cur = pt;
    while (cur.chart != target)
    {
        cur = step(cur, next_hop(cur.chart, target));
        if (!in_chart_range(cur))
            throw_range(cur);
    }
    return cur;
}

double conformal_factor(Chart chart, double u, double v)
{
    Point2 const pt{u, v, chart};
    require_range(pt);
    switch (chart)
    {
        case Chart::EuclideanCartesian:
            return 1.0;
        case Chart::HalfPlaneCartesian:
            return 1.0 / (u * u);
        case Chart::UnitDisk: {
            double const s = 1.0 - u * u - v * v;
            return 4.0 / (s * s);
        }
        default:
            throw ChartError("conformal factor is defined only in Cartesian-type charts, not "
                             + std::string(to_string(chart)));
    }
}

double conformal_factor(Point2 const& pt)
{
    return conformal_factor(pt.chart, pt.u, pt.v);
}

double hyperbolic_distance(Point2 const& p, Point2 const& q)
{
    Point2 const a = convert(p, Chart::HalfPlaneCartesian);
    Point2 const b = convert(q, Chart::HalfPlaneCartesian);
    double const chord = std::hypot(a.u - b.u, a.v - b.v);
    return 2.0 * std::asinh(0.5 * chord / std::sqrt(a.u * b.u));
}

Point2 geodesic_circle_point(Point2 const& center, double radius, double angle)
{
    Point2 const c = convert(center, Chart::HalfPlaneCartesian);
    complex const w = std::polar(std::tanh(0.5 * radius), angle);
    complex const z = disk_to_half_plane(w) * c.u + complex{0.0, c.v};
    return {z.real(), z.imag(), Chart::HalfPlaneCartesian};
}

//---------------------------------------------------------------------------//
// Domain derived constants
//---------------------------------------------------------------------------//

double AngularSector::slope() const
{
    return std::tan(0.5 * alpha);
}

double HyperbolaConvex::mu() const
{
    return std::atan(b / a);
}

double HyperbolaConvex::focal() const
{
    return std::hypot(a, b);
}

double HyperbolaConcave::mu() const
{
    return std::atan(b / a);
}

double HyperbolaConcave::focal() const
{
    return std::hypot(a, b);
}

// log(cos a / (1 - sin a)) written without cancellation
double GeodesicNbhd::tube_radius() const
{
    return std::asinh(std::tan(alpha));
}

double GeodesicHalfNbhd::tube_radius() const
{
    return std::asinh(std::tan(alpha));
}

Chart DomainSpec::native_chart() const
{
    switch (kind())
    {
        case DomainKind::Ellipse:
        case DomainKind::Parabola:
        case DomainKind::HyperbolaConvex:
        case DomainKind::HyperbolaConcave:
            return Chart::EuclideanCartesian;
        case DomainKind::Annulus:
        case DomainKind::AngularSector:
            return Chart::EuclideanPolar;
        case DomainKind::HyperbolicDisk:
            return Chart::GeodesicPolar;
        case DomainKind::Horodisk:
            return Chart::HalfPlaneCartesian;
        case DomainKind::GeodesicNbhd:
        case DomainKind::GeodesicHalfNbhd:
        case DomainKind::IdealNbhd:
            return Chart::HalfPlanePolar;
    }
    return Chart::EuclideanCartesian;
}

bool DomainSpec::is_hyperbolic() const
{
    return exittime::is_hyperbolic(native_chart());
}

bool DomainSpec::relatively_compact() const
{
    switch (kind())
    {
        case DomainKind::Ellipse:
        case DomainKind::Annulus:
        case DomainKind::HyperbolicDisk:
            return true;
        default:
            return false;
    }
}

bool DomainSpec::finite_exit() const
{
    return std::visit(Overloaded{
                          [](AngularSector const& s) { return s.alpha < pi / 2; },
                          [](HyperbolaConvex const& h) { return h.b < h.a; },
                          [](HyperbolaConcave const& h) { return h.b < h.a; },
                          [](IdealNbhd const&) { return false; },
                          [](auto const&) { return true; },
                      },
                      shape_);
}

void DomainSpec::validate() const
{
    auto positive = [](double value, char const* key) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw ParameterError(std::string("parameter '") + key + "' must be positive and finite");
    };
    auto finite = [](double value, char const* key) {
        if (!std::isfinite(value))
            throw ParameterError(std::string("parameter '") + key + "' must be finite");
    };
    auto angle = [](double value, double upper, char const* key, char const* bound) {
        if (!(value > 0.0 && value < upper))
            throw ParameterError(std::string("parameter '") + key + "' must lie in (0, " + bound + ")");
    };
    std::visit(Overloaded{
                   [&](Ellipse const& e) {
                       positive(e.a, "a");
                       positive(e.b, "b");
                       finite(e.h, "h");
                       finite(e.k, "k");
                   },
                   [&](Parabola const& p) { positive(p.p, "p"); },
                   [&](Annulus const& an) {
                       positive(an.a, "a");
                       positive(an.b, "b");
                       if (!(an.a < an.b))
                           throw ParameterError("parameter 'a' must be smaller than 'b'");
                   },
                   [&](AngularSector const& s) { angle(s.alpha, pi, "alpha", "pi"); },
                   [&](HyperbolaConvex const& h) {
                       positive(h.a, "a");
                       positive(h.b, "b");
                   },
                   [&](HyperbolaConcave const& h) {
                       positive(h.a, "a");
                       positive(h.b, "b");
                   },
                   [&](HyperbolicDisk const& d) { positive(d.R, "R"); },
                   [&](Horodisk const& h) { positive(h.R, "R"); },
                   [&](GeodesicNbhd const& g) { angle(g.alpha, pi / 2, "alpha", "pi/2"); },
                   [&](GeodesicHalfNbhd const& g) { angle(g.alpha, pi / 2, "alpha", "pi/2"); },
                   [](IdealNbhd const&) {},
               },
               shape_);
}

//---------------------------------------------------------------------------//
// Membership and distances
//---------------------------------------------------------------------------//

double LevelSample::distance_estimate() const
{
    double const g = std::sqrt(du * du + dv * dv);
    if (g == 0.0)
        return value < 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return -value / g;
}

Chart default_cartesian_chart(DomainSpec const& domain)
{
    return domain.is_hyperbolic() ? Chart::HalfPlaneCartesian : Chart::EuclideanCartesian;
}

LevelSample level_set(DomainSpec const& domain, Chart chart, double u, double v)
{
    switch (chart)
    {
        case Chart::EuclideanCartesian:
            return euclidean_level(domain, u, v);
        case Chart::HalfPlaneCartesian:
            return half_plane_level(domain, u, v);
        case Chart::UnitDisk:
            if (!domain.is_hyperbolic())
                break;
            return disk_level(domain, u, v);
        default:
            break;
    }
    throw ChartError("no level set for " + std::string(kind_name(domain.kind()))
                     + " in chart " + std::string(to_string(chart)));
}

namespace {
void require_compatible(DomainSpec const& domain, Point2 const& pt)
{
    require_range(pt);
    if (domain.is_hyperbolic() != is_hyperbolic(pt.chart))
    {
        throw ChartError("point chart " + std::string(to_string(pt.chart))
                         + " does not belong to the geometry of domain "
                         + std::string(kind_name(domain.kind())));
    }
}
}  // namespace

bool contains(DomainSpec const& domain, Point2 const& pt)
{
    require_compatible(domain, pt);
    if (auto const* d = domain.get_if<HyperbolicDisk>())
        return convert(pt, Chart::GeodesicPolar).u < d->R;
    Chart const chart = default_cartesian_chart(domain);
    Point2 const c = convert(pt, chart);
    return level_set(domain, chart, c.u, c.v).value < 0.0;
}

bool on_boundary(DomainSpec const& domain, Point2 const& pt)
{
    require_compatible(domain, pt);
    Chart const chart = default_cartesian_chart(domain);
    Point2 const c = convert(pt, chart);
    LevelSample const g = level_set(domain, chart, c.u, c.v);
    double const scale = 1.0 + std::abs(c.u) + std::abs(c.v);
    if (std::abs(g.value) <= 1e-14 * scale)
        return true;
    return std::abs(g.distance_estimate()) <= 1e-12 * scale;
}

double conic_boundary_distance(DomainSpec const& domain, double x, double y)
{
    return std::visit(
        Overloaded{
            [&](Ellipse const& e) {
                if (e.a == e.b)
                    return std::abs(e.a - std::hypot(x - e.h, y - e.k));
                return nearest_on_curve(EllipseCurve{e}, x, y, 0.0, 2.0 * pi, true);
            },
            [&](Parabola const& p) {
                // The vertical chord to the boundary bounds the distance.
                double const reach = std::sqrt(std::max(0.0, 4.0 * p.p * x));
                double const dv = std::max(std::abs(reach - std::abs(y)), 1e-300);
                double const d = nearest_on_curve(ParabolaCurve{p.p}, x, y, y - dv, y + dv, false);
                return std::min(d, dv);
            },
            [&](HyperbolaConvex const& h) {
                double const xb = h.a * std::sqrt(1.0 + y * y / (h.b * h.b));
                double const dh = std::max(std::abs(x - xb), 1e-300);
                double const lo = std::asinh((y - dh) / h.b);
                double const hi = std::asinh((y + dh) / h.b);
                double const d = nearest_on_curve(ConvexBranch{h.a, h.b}, x, y, lo, hi, false);
                return std::min(d, dh);
            },
            [&](HyperbolaConcave const& h) {
                double const yb = h.b * std::sqrt(1.0 + x * x / (h.a * h.a));
                double const dv = std::max(std::min(std::abs(yb - y), std::abs(yb + y)), 1e-300);
                double const lo = std::asinh((x - dv) / h.a);
                double const hi = std::asinh((x + dv) / h.a);
                double const up = nearest_on_curve(ConcaveBranch{h.a, h.b, 1.0}, x, y, lo, hi, false);
                double const down = nearest_on_curve(ConcaveBranch{h.a, h.b, -1.0}, x, y, lo, hi, false);
                return std::min({up, down, dv});
            },
            [](auto const&) -> double {
                throw UnsupportedDomainError("not a conic domain");
            },
        },
        domain.shape());
}

double boundary_distance_lb(DomainSpec const& domain, Point2 const& pt)
{
    if (!contains(domain, pt))
        throw OutsideDomainError("point is not inside " + domain.to_string());

    constexpr double conic_safety = 0.99;
    auto euclid = [&] { return convert(pt, Chart::EuclideanCartesian); };
    auto hp_polar = [&] { return convert(pt, Chart::HalfPlanePolar); };
    // Hyperbolic distance from half-plane polar angle theta to the geodesic theta = 0.
    auto axis_distance = [](double theta) { return std::asinh(std::tan(theta)); };

    return std::visit(
        Overloaded{
            [&](Ellipse const& e) {
                Point2 const c = euclid();
                double const d = conic_boundary_distance(domain, c.u, c.v);
                return e.a == e.b ? d : conic_safety * d;
            },
            [&](Annulus const& an) {
                double const r = convert(pt, Chart::EuclideanPolar).u;
                return std::min(r - an.a, an.b - r);
            },
            [&](AngularSector const& s) {
                Point2 const p = convert(euclid(), Chart::EuclideanPolar);
                return p.u * std::sin(0.5 * s.alpha - std::abs(normalize_angle(p.v)));
            },
            [&](HyperbolicDisk const& d) {
                return d.R - convert(pt, Chart::GeodesicPolar).u;
            },
            [&](Horodisk const& h) {
                return std::log(convert(pt, Chart::HalfPlaneCartesian).u / h.R);
            },
            [&](GeodesicNbhd const& g) {
                return g.tube_radius() - std::abs(axis_distance(hp_polar().v));
            },
            [&](GeodesicHalfNbhd const& g) {
                double const d = axis_distance(hp_polar().v);
                return std::min(d, g.tube_radius() - d);
            },
            [&](IdealNbhd const&) { return axis_distance(hp_polar().v); },
            [&](auto const&) {
                Point2 const c = euclid();
                return conic_safety * conic_boundary_distance(domain, c.u, c.v);
            },
        },
        domain.shape());
}

}  // namespace exittime
