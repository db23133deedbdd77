#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace exittime {

//! Unbounded domain solved without a truncation.
class TruncationRequiredError : public Error
{
  public:
    using Error::Error;
};

//! Iterative solver hit its iteration cap.
class SolverError : public Error
{
  public:
    using Error::Error;
};

struct Box
{
    double umin;
    double umax;
    double vmin;
    double vmax;
};

/*!
 * Coordinates the grid is laid out in.
 *
 * HyperbolaStrip is zeta = sigma + i tau with |tau| < pi/2, mapped onto the
 * convex hyperbola by z = c cosh(kappa zeta) and onto the concave one by
 * z = c sinh(kappa zeta), kappa = 2 mu / pi.
 */
enum class GridChart : std::uint8_t
{
    EuclideanCartesian,
    HalfPlaneCartesian,
    UnitDisk,
    HyperbolaStrip,
};

std::string_view to_string(GridChart chart);

//! Artificial Dirichlet-zero cut that makes an unbounded domain bounded.
struct Truncation
{
    enum class Kind : std::uint8_t
    {
        Box,     // chart-coordinate box
        Domain,  // another domain of the same geometry (e.g. a disk)
        Strip,   // |sigma| < strip_length in the hyperbola strip chart
    };
    Kind kind = Kind::Box;
    Box box{};
    std::optional<DomainSpec> domain;
    double strip_length = 0.0;

    std::string to_string() const;
};

//! `box:umin,umax,vmin,vmax`, `strip:S=30` or a domain spec.
Truncation parse_truncation(std::string_view text);

//! Coordinates of pt in the given grid chart of domain.
std::pair<double, double> grid_coordinates(DomainSpec const& domain, GridChart chart,
                                           Point2 const& pt);

enum class LinearSolver : std::uint8_t
{
    Auto,  // CG when the assembled matrix is symmetric, SOR otherwise
    SOR,
    CG,
};

struct SolveOptions
{
    double h = 0.01;
    std::optional<Box> bbox;
    std::optional<Truncation> truncation;
    //! Grid chart for hyperbolic domains (HalfPlaneCartesian or UnitDisk).
    std::optional<Chart> chart;
    //! Point forced onto a grid node.
    std::optional<Point2> anchor;
    double tol = 1e-10;
    //! SOR factor; values <= 0 select the model-problem optimum.
    double omega = 1.9;
    long max_iter = 1000000;
    LinearSolver solver = LinearSolver::Auto;
    //! Serial reference kernels when false.
    bool parallel = true;
};

enum class NodeKind : std::uint8_t
{
    Exterior,
    Interior,
    BoundaryAdjacent,
};

struct GridSolution
{
    double h = 0.0;
    Box bbox{};
    int nu = 0;
    int nv = 0;
    GridChart chart = GridChart::EuclideanCartesian;
    std::vector<NodeKind> mask;
    std::vector<double> values;
    double residual = 0.0;
    long iterations = 0;
    std::string solver;
    std::string domain;
    std::string truncation;
    //! Domain the grid was built for; needed to map points into strip charts.
    std::optional<DomainSpec> source_domain;

    double node_u(int i) const { return bbox.umin + i * h; }
    double node_v(int j) const { return bbox.vmin + j * h; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nu + i; }
    double at(int i, int j) const { return values[index(i, j)]; }

    //! Point in grid coordinates.
    std::pair<double, double> to_grid(Point2 const& pt) const;
    //! Bilinear interpolation of node values (exterior nodes count as 0).
    double interpolate(Point2 const& pt) const;
    //! Value at the node nearest to pt.
    double nearest(Point2 const& pt) const;

    void write_csv(std::string const& path) const;
    void write_sidecar(std::string const& path) const;
};

/*!
 * Solve Delta_e f = -phi on a masked grid with f = 0 on the boundary.
 *
 * phi is the conformal factor of the grid chart (|dz/dzeta|^2 in the strip
 * chart). Boundary-adjacent rows use Shortley-Weller unequal legs.
 */
GridSolution solve_grid(DomainSpec const& domain, SolveOptions const& opts);

//! Grid values at pt for each truncation, in order.
std::vector<double> exhaustion_run(DomainSpec const& domain, Point2 const& pt,
                                   std::vector<Truncation> const& truncations,
                                   SolveOptions const& opts);

}  // namespace exittime
