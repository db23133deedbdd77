#pragma once

#include <complex>
#include <vector>

#include "geometry.hpp"

namespace exittime {

//! Expected first exit time: a finite nonnegative value or Infinite.
class ExitTime
{
  public:
    static ExitTime finite(double value) { return ExitTime(value, false); }
    static ExitTime infinite() { return ExitTime(0.0, true); }

    bool is_finite() const { return !infinite_; }
    bool is_infinite() const { return infinite_; }
    //! Value for finite times, +inf otherwise.
    double value() const;

    bool operator==(ExitTime const&) const = default;

  private:
    ExitTime(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

struct PoissonAtom
{
    double weight;  // C_k >= 0
    double t;       // boundary location on x = 0
};

/*!
 * Constants of the nonnegative harmonic corrections.
 *
 * c_inf scales the linear half-plane term and also the parabola and sector
 * family terms; a and b weight the two radial powers of the tube family.
 */
struct FamilyConstants
{
    double c_inf = 0.0;
    std::vector<PoissonAtom> atoms;
    double a = 0.0;
    double b = 0.0;

    void validate() const;
};

ExitTime exit_time(DomainSpec const& domain, Point2 const& pt);

//! (m^2 x^2 - y^2) / (2 - 2 m^2) on the sector |y| < m x (opening 2 atan m), m < 1.
double sector_exit_time_rectangular(double m, double x, double y);

//! Nonnegative harmonic term added to exit_time to get the non-minimal
//! solutions. Parabola, AngularSector and GeodesicNbhd only.
double family_term(DomainSpec const& domain, Point2 const& pt, FamilyConstants const& k);

//! c_inf x + sum_k C_k x / (x^2 + (y - t_k)^2) at a half-plane point.
double poisson_atom_sum(Point2 const& pt, FamilyConstants const& k);

//! Conformal map from the right half plane onto the domain (parabola,
//! sector, both hyperbolas). Boundary points Re w = 0 are accepted.
std::complex<double> half_plane_map(DomainSpec const& domain, std::complex<double> w);

//! 4 times the integral of exit_time against the metric area element.
//! Ellipse, Annulus and HyperbolicDisk only.
double torsional_rigidity(DomainSpec const& domain);

//! Ellipse (x-n)^2/n^2 + y^2/(2p(n-p)) < 1 of the parabola exhaustion.
Ellipse exhaustion_ellipse(double p, double n);

//! Exit time from the n-th exhaustion ellipse of the parabola 4px > y^2.
double ellipse_exhaustion_term(double p, double n, Point2 const& pt);

}  // namespace exittime
