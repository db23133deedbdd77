#include "exittime/closed_form.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace exittime {
namespace {

using complex = std::complex<double>;
constexpr double pi = std::numbers::pi;

double wrap_angle(double theta)
{
    double t = std::remainder(theta, 2.0 * pi);
    if (t <= -pi)
        t += 2.0 * pi;
    return t;
}

double coth(double x)
{
    return 1.0 / std::tanh(x);
}

double finite_value(DomainSpec const& domain, Point2 const& pt)
{
    Point2 const q = convert(pt, domain.native_chart());
    double const u = q.u;
    double const v = q.v;
    switch (domain.kind())
    {
        case DomainKind::Ellipse: {
            auto const& e = *domain.get_if<Ellipse>();
            double const a2 = e.a * e.a;
            double const b2 = e.b * e.b;
            double const dx = u - e.h;
            double const dy = v - e.k;
            return a2 * b2 / (2.0 * a2 + 2.0 * b2) * (1.0 - dx * dx / a2 - dy * dy / b2);
        }
        case DomainKind::Parabola: {
            double const p = domain.get_if<Parabola>()->p;
            return 2.0 * p * u - 0.5 * v * v;
        }
        case DomainKind::Annulus: {
            auto const& an = *domain.get_if<Annulus>();
            double const la = std::log(an.a);
            double const lb = std::log(an.b);
            double const A = (an.b * an.b - an.a * an.a) / (4.0 * (lb - la));
            double const B = (an.a * an.a * lb - an.b * an.b * la) / (4.0 * (lb - la));
            return -0.25 * u * u + A * std::log(u) + B;
        }
        case DomainKind::AngularSector: {
            double const alpha = domain.get_if<AngularSector>()->alpha;
            double const theta = wrap_angle(v);
            return 0.25 * u * u * (std::cos(2.0 * theta) / std::cos(alpha) - 1.0);
        }
        case DomainKind::HyperbolaConvex: {
            auto const& h = *domain.get_if<HyperbolaConvex>();
            double const m = h.slope();
            return (m * m * u * u - v * v - h.b * h.b) / (2.0 - 2.0 * m * m);
        }
        case DomainKind::HyperbolaConcave: {
            auto const& h = *domain.get_if<HyperbolaConcave>();
            double const m = h.slope();
            return (m * m * u * u - v * v + h.b * h.b) / (2.0 - 2.0 * m * m);
        }
        case DomainKind::HyperbolicDisk: {
            double const R = domain.get_if<HyperbolicDisk>()->R;
            double const outer = 0.5 * R * coth(R);
            if (u < 1e-6)
                return outer - 0.5 - u * u / 6.0;
            return outer - 0.5 * u * coth(u);
        }
        case DomainKind::Horodisk:
            return std::log(u / domain.get_if<Horodisk>()->R);
        case DomainKind::GeodesicNbhd: {
            double const alpha = domain.get_if<GeodesicNbhd>()->alpha;
            return std::log(std::cos(v) / std::cos(alpha));
        }
        case DomainKind::GeodesicHalfNbhd: {
            double const alpha = domain.get_if<GeodesicHalfNbhd>()->alpha;
            return std::log(std::cos(v)) - (v / alpha) * std::log(std::cos(alpha));
        }
        case DomainKind::IdealNbhd:
            break;
    }
    return std::numeric_limits<double>::infinity();
}

void require_inside(DomainSpec const& domain, Point2 const& pt)
{
    if (!contains(domain, pt))
    {
        throw OutsideDomainError("point (" + std::to_string(pt.u) + ", " + std::to_string(pt.v)
                                 + ") is not inside " + domain.to_string());
    }
}

// Family terms extend continuously to the boundary, where they vanish.
void require_closure(DomainSpec const& domain, Point2 const& pt)
{
    if (!on_boundary(domain, pt))
        require_inside(domain, pt);
}

template<class F>
double integrate(F f, double lo, double hi)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, 1e-11);
}

// 4 * int_0^outer int_0^{2 pi} f(r, t) * jac(r) dt dr
template<class F, class J>
double polar_rigidity(F f, J jac, double inner, double outer)
{
    auto radial = [&](double r) {
        auto angular = [&](double t) { return f(r, t); };
        return integrate(angular, 0.0, 2.0 * pi) * jac(r);
    };
    return 4.0 * integrate(radial, inner, outer);
}

}  // namespace

double ExitTime::value() const
{
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

void FamilyConstants::validate() const
{
    auto check = [](double v, char const* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ParameterError(std::string("family constant '") + name + "' must be nonnegative");
    };
    check(c_inf, "C");
    check(a, "A");
    check(b, "B");
    for (auto const& atom : atoms)
    {
        check(atom.weight, "C_k");
        if (!std::isfinite(atom.t))
            throw ParameterError("atom location must be finite");
    }
}

ExitTime exit_time(DomainSpec const& domain, Point2 const& pt)
{
    if (on_boundary(domain, pt))
        return ExitTime::finite(0.0);
    require_inside(domain, pt);
    if (!domain.finite_exit())
        return ExitTime::infinite();
    return ExitTime::finite(std::max(0.0, finite_value(domain, pt)));
}

double sector_exit_time_rectangular(double m, double x, double y)
{
    if (!(m > 0.0 && m < 1.0))
        throw ParameterError("parameter 'm' must lie in (0, 1)");
    if (!(m * x > std::abs(y)))
        throw OutsideDomainError("point is not inside the sector |y| < m x");
    return (m * m * x * x - y * y) / (2.0 - 2.0 * m * m);
}

double family_term(DomainSpec const& domain, Point2 const& pt, FamilyConstants const& k)
{
    k.validate();
    switch (domain.kind())
    {
        case DomainKind::Parabola: {
            require_closure(domain, pt);
            double const p = domain.get_if<Parabola>()->p;
            Point2 const q = convert(pt, Chart::EuclideanCartesian);
            complex const s = std::sqrt(complex{q.u, q.v} / p - 1.0);
            return k.c_inf * std::cosh(0.5 * pi * s).real();
        }
        case DomainKind::AngularSector: {
            require_closure(domain, pt);
            double const alpha = domain.get_if<AngularSector>()->alpha;
            Point2 const q = convert(pt, Chart::EuclideanPolar);
            double const e = pi / alpha;
            return k.c_inf * std::pow(q.u, e) * std::cos(e * wrap_angle(q.v));
        }
        case DomainKind::GeodesicNbhd: {
            require_closure(domain, pt);
            double const alpha = domain.get_if<GeodesicNbhd>()->alpha;
            Point2 const q = convert(pt, Chart::HalfPlanePolar);
            double const e = pi / (2.0 * alpha);
            return (k.a * std::pow(q.u, e) + k.b * std::pow(q.u, -e)) * std::cos(e * q.v);
        }
        default:
            throw UnsupportedDomainError("no family term for " + domain.to_string());
    }
}

double poisson_atom_sum(Point2 const& pt, FamilyConstants const& k)
{
    k.validate();
    double x = pt.u;
    double y = pt.v;
    if (pt.chart != Chart::HalfPlaneCartesian && pt.chart != Chart::EuclideanCartesian)
    {
        Point2 const q = convert(pt, Chart::HalfPlaneCartesian);
        x = q.u;
        y = q.v;
    }
    if (!(x > 0.0))
        throw ChartError("Poisson sum needs x > 0");
    double sum = k.c_inf * x;
    for (auto const& atom : k.atoms)
    {
        double const dy = y - atom.t;
        sum += atom.weight * x / (x * x + dy * dy);
    }
    return sum;
}

std::complex<double> half_plane_map(DomainSpec const& domain, std::complex<double> w)
{
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || w.real() < 0.0)
        throw ParameterError("half-plane map needs Re w >= 0");

    switch (domain.kind())
    {
        case DomainKind::Parabola: {
            // Even in acosh, so the principal cut on (0, 1) is harmless.
            double const p = domain.get_if<Parabola>()->p;
            complex const s = (2.0 / pi) * std::acosh(w);
            return p * (1.0 + s * s);
        }
        case DomainKind::AngularSector: {
            if (w == 0.0)
                return 0.0;
            double const alpha = domain.get_if<AngularSector>()->alpha;
            return std::pow(w, alpha / pi);
        }
        case DomainKind::HyperbolaConvex: {
            auto const& h = *domain.get_if<HyperbolaConvex>();
            double const kappa = 2.0 * h.mu() / pi;
            return h.focal() * std::cosh(kappa * std::acosh(w));
        }
        case DomainKind::HyperbolaConcave: {
            if (w == 0.0)
                throw ParameterError("concave hyperbola map has a pole at w = 0");
            auto const& h = *domain.get_if<HyperbolaConcave>();
            double const kappa = 2.0 * h.mu() / pi;
            complex const t = std::pow(w, kappa);
            return 0.5 * h.focal() * (t - 1.0 / t);
        }
        default:
            throw UnsupportedDomainError("no half-plane map for " + domain.to_string());
    }
}

double torsional_rigidity(DomainSpec const& domain)
{
    auto f = [&](Point2 const& pt) { return exit_time(domain, pt).value(); };
    switch (domain.kind())
    {
        case DomainKind::Ellipse: {
            auto const& e = *domain.get_if<Ellipse>();
            auto g = [&](double rho, double t) {
                if (rho >= 1.0)
                    return 0.0;
                Point2 const pt{e.h + e.a * rho * std::cos(t), e.k + e.b * rho * std::sin(t)};
                return f(pt);
            };
            return polar_rigidity(g, [&](double rho) { return e.a * e.b * rho; }, 0.0, 1.0);
        }
        case DomainKind::Annulus: {
            auto const& an = *domain.get_if<Annulus>();
            auto g = [&](double r, double t) {
                if (r <= an.a || r >= an.b)
                    return 0.0;
                return f({r, t, Chart::EuclideanPolar});
            };
            return polar_rigidity(g, [](double r) { return r; }, an.a, an.b);
        }
        case DomainKind::HyperbolicDisk: {
            double const R = domain.get_if<HyperbolicDisk>()->R;
            auto g = [&](double r, double t) {
                if (r >= R)
                    return 0.0;
                return f({r, t, Chart::GeodesicPolar});
            };
            return polar_rigidity(g, [](double r) { return std::sinh(r); }, 0.0, R);
        }
        default:
            throw UnsupportedDomainError("torsional rigidity needs a relatively compact domain, got "
                                         + domain.to_string());
    }
}

Ellipse exhaustion_ellipse(double p, double n)
{
    if (!(p > 0.0) || !(n > p))
        throw ParameterError("exhaustion index must satisfy n > p > 0");
    return Ellipse{n, std::sqrt(2.0 * p * (n - p)), n, 0.0};
}

double ellipse_exhaustion_term(double p, double n, Point2 const& pt)
{
    Ellipse const e = exhaustion_ellipse(p, n);
    Point2 const q = convert(pt, Chart::EuclideanCartesian);
    double const dx = q.u - n;
    double const b2 = 2.0 * p * (n - p);
    double const shape = 1.0 - dx * dx / (n * n) - q.v * q.v / b2;
    if (shape < 0.0)
    {
        if (shape > -1e-12)
            return 0.0;
        throw OutsideDomainError("point is outside the exhaustion ellipse "
                                 + DomainSpec(e).to_string());
    }
    return n * n * p * (n - p) / (b2 + n * n) * shape;
}

}  // namespace exittime
