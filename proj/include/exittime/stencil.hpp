#pragma once

#include <cstdint>
#include <vector>

namespace exittime {

/*!
 * Five-point system on an nu x nv node grid, one row per active node.
 *
 * Row p reads diag[p] x[p] + east[p] x[p+1] + west[p] x[p-1]
 * + north[p] x[p+nu] + south[p] x[p-nu] = rhs[p]. Inactive nodes hold 0
 * and have zero couplings into them. Perimeter nodes must be inactive.
 */
struct StencilSystem
{
    int nu = 0;
    int nv = 0;
    std::vector<std::uint8_t> active;
    std::vector<double> diag, east, west, north, south, rhs;

    StencilSystem() = default;
    StencilSystem(int nu_, int nv_);

    std::size_t size() const { return active.size(); }
    bool is_symmetric(double tol = 1e-14) const;
    void apply(std::vector<double> const& x, std::vector<double>& y) const;
    //! ||rhs - A x|| / ||rhs||
    double relative_residual(std::vector<double> const& x) const;
};

struct SolverStats
{
    double residual = 0.0;
    long iterations = 0;
    bool converged = false;
};

struct IterControl
{
    double tol = 1e-10;
    long max_iter = 1000000;
    int check_every = 10;
};

//! Red-black SOR, rows of one color updated in parallel.
SolverStats sor_red_black(StencilSystem const& sys, std::vector<double>& x, double omega,
                          IterControl const& ctl);
//! Lexicographic Gauss-Seidel ordering; serial reference.
SolverStats sor_serial(StencilSystem const& sys, std::vector<double>& x, double omega,
                       IterControl const& ctl);

//! Conjugate gradients for symmetric systems; parallel vector kernels.
SolverStats cg_parallel(StencilSystem const& sys, std::vector<double>& x, IterControl const& ctl);
SolverStats cg_serial(StencilSystem const& sys, std::vector<double>& x, IterControl const& ctl);

//! Optimal SOR factor for the model Laplacian on an nu x nv grid.
double model_sor_omega(int nu, int nv);

}  // namespace exittime
