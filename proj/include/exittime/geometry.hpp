#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

namespace exittime {

//---------------------------------------------------------------------------//
// Errors
//---------------------------------------------------------------------------//

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! A point does not belong to the range of its chart, or no conversion exists.
class ChartError : public Error
{
  public:
    using Error::Error;
};

//! Domain parameters violate their range constraints.
class ParameterError : public Error
{
  public:
    using Error::Error;
};

//! A point that must be interior to a domain is not.
class OutsideDomainError : public Error
{
  public:
    using Error::Error;
};

//! The operation is not defined for this kind of domain.
class UnsupportedDomainError : public Error
{
  public:
    using Error::Error;
};

//! Malformed domain-spec string. key() names the offending token.
class ParseError : public Error
{
  public:
    ParseError(std::string key, std::string const& message)
        : Error(message), key_(std::move(key))
    {
    }
    std::string const& key() const { return key_; }

  private:
    std::string key_;
};

//---------------------------------------------------------------------------//
// Charts and points
//---------------------------------------------------------------------------//

enum class Chart : std::uint8_t
{
    EuclideanCartesian,
    EuclideanPolar,
    HalfPlaneCartesian,
    HalfPlanePolar,
    UnitDisk,
    GeodesicPolar,
};

std::string_view to_string(Chart chart);
std::optional<Chart> chart_from_string(std::string_view name);
bool is_hyperbolic(Chart chart);

/*!
 * A planar point tagged with the chart its coordinates refer to.
 *
 * Polar charts store (r, theta). GeodesicPolar is centered at the half-plane
 * base point (1, 0), with theta = 0 pointing toward increasing x.
 */
struct Point2
{
    double u = 0.0;
    double v = 0.0;
    Chart chart = Chart::EuclideanCartesian;
};

bool in_chart_range(Point2 const& pt);

//! Same geometric point in another chart; throws ChartError if undefined.
Point2 convert(Point2 const& pt, Chart target);

//! Metric is phi * (du^2 + dv^2) in Cartesian-type charts.
double conformal_factor(Chart chart, double u, double v);
double conformal_factor(Point2 const& pt);

//! Hyperbolic distance between two points given in any hyperbolic chart.
double hyperbolic_distance(Point2 const& p, Point2 const& q);

//! Point at hyperbolic distance `radius` from `center` in direction `angle`
//! (measured in the tangent plane at center), returned in HalfPlaneCartesian.
Point2 geodesic_circle_point(Point2 const& center, double radius, double angle);

//---------------------------------------------------------------------------//
// Domain catalog
//---------------------------------------------------------------------------//

enum class DomainKind : std::uint8_t
{
    Ellipse,
    Parabola,
    Annulus,
    AngularSector,
    HyperbolaConvex,
    HyperbolaConcave,
    HyperbolicDisk,
    Horodisk,
    GeodesicNbhd,
    GeodesicHalfNbhd,
    IdealNbhd,
};

//! Region (x-h)^2/a^2 + (y-k)^2/b^2 < 1.
struct Ellipse
{
    double a;
    double b;
    double h = 0.0;
    double k = 0.0;
};

//! Region 4px > y^2.
struct Parabola
{
    double p;
};

//! Region a < |z| < b.
struct Annulus
{
    double a;
    double b;
};

//! Region |theta| < alpha/2 (alpha is the full opening angle).
struct AngularSector
{
    double alpha;
    double slope() const;  // tan(alpha/2)
};

//! Region x^2/a^2 - y^2/b^2 > 1, x > 0.
struct HyperbolaConvex
{
    double a;
    double b;
    double slope() const { return b / a; }
    double mu() const;
    double focal() const;
};

//! Region x^2/a^2 - y^2/b^2 > -1.
struct HyperbolaConcave
{
    double a;
    double b;
    double slope() const { return b / a; }
    double mu() const;
    double focal() const;
};

//! Geodesic ball of radius R about the base point.
struct HyperbolicDisk
{
    double R;
};

//! Half-plane region x > R.
struct Horodisk
{
    double R;
};

//! Half-plane polar region |theta| < alpha around the geodesic theta = 0.
struct GeodesicNbhd
{
    double alpha;
    double tube_radius() const;
};

//! Half-plane polar region 0 < theta < alpha.
struct GeodesicHalfNbhd
{
    double alpha;
    double tube_radius() const;
};

//! Half-plane polar region 0 < theta < pi/2.
struct IdealNbhd
{
};

class DomainSpec
{
  public:
    using Shape = std::variant<Ellipse,
                               Parabola,
                               Annulus,
                               AngularSector,
                               HyperbolaConvex,
                               HyperbolaConcave,
                               HyperbolicDisk,
                               Horodisk,
                               GeodesicNbhd,
                               GeodesicHalfNbhd,
                               IdealNbhd>;

    // Validates parameter ranges; throws ParameterError.
    template<class T>
        requires(!std::is_same_v<std::decay_t<T>, DomainSpec>
                 && std::is_constructible_v<Shape, T>)
    DomainSpec(T shape) : shape_(std::move(shape))
    {
        validate();
    }

    Shape const& shape() const { return shape_; }
    DomainKind kind() const { return static_cast<DomainKind>(shape_.index()); }

    template<class T>
    T const* get_if() const
    {
        return std::get_if<T>(&shape_);
    }

    //! Chart the closed-form expression is written in.
    Chart native_chart() const;
    bool is_hyperbolic() const;
    bool relatively_compact() const;
    //! False exactly for the infinite-exit-time cases.
    bool finite_exit() const;

    //! Canonical `kind:key=value,...` form (round-trips through parse_domain).
    std::string to_string() const;

  private:
    Shape shape_;
    void validate() const;
};

//! Parse `kind:key=value,...`; throws ParseError naming the offending key.
DomainSpec parse_domain(std::string_view text);

std::string_view kind_name(DomainKind kind);

//---------------------------------------------------------------------------//
// Membership and boundary distance
//---------------------------------------------------------------------------//

/*!
 * Implicit description of a domain in a Cartesian-type chart.
 *
 * value < 0 strictly inside, > 0 outside. The gradient is that of the
 * active branch; -value/|grad| approximates the chart-Euclidean distance to
 * the boundary near the boundary.
 */
struct LevelSample
{
    double value;
    double du;
    double dv;

    double distance_estimate() const;
};

//! Supported charts: EuclideanCartesian for Euclidean domains;
//! HalfPlaneCartesian and UnitDisk for hyperbolic domains.
LevelSample level_set(DomainSpec const& domain, Chart chart, double u, double v);

//! Cartesian-type chart used for simulation and grids unless overridden.
Chart default_cartesian_chart(DomainSpec const& domain);

bool contains(DomainSpec const& domain, Point2 const& pt);

//! True if pt is on the boundary of the domain up to a relative 1e-12.
bool on_boundary(DomainSpec const& domain, Point2 const& pt);

/*!
 * Positive lower bound on the metric distance from an interior point to the
 * boundary. Exact for the annulus, sector and hyperbolic domains; for the
 * conics it is 0.99 times a Newton-refined nearest boundary point distance.
 */
double boundary_distance_lb(DomainSpec const& domain, Point2 const& pt);

//! Newton-refined nearest-point distance to a conic boundary (no safety
//! factor). Ellipse, Parabola, HyperbolaConvex, HyperbolaConcave only.
double conic_boundary_distance(DomainSpec const& domain, double x, double y);

}  // namespace exittime
