#include "exittime/pde_oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "exittime/stencil.hpp"

namespace exittime {
namespace {

using complex = std::complex<double>;
constexpr double pi = std::numbers::pi;

struct StripMap
{
    double c;
    double kappa;
    bool convex;

    complex z(complex zeta) const
    {
        return convex ? c * std::cosh(kappa * zeta) : c * std::sinh(kappa * zeta);
    }
    complex dz(complex zeta) const
    {
        return convex ? c * kappa * std::sinh(kappa * zeta) : c * kappa * std::cosh(kappa * zeta);
    }
    complex zeta(complex z) const
    {
        return convex ? std::acosh(z / c) / kappa : std::asinh(z / c) / kappa;
    }
};

std::optional<StripMap> strip_map(DomainSpec const& domain)
{
    if (auto const* h = domain.get_if<HyperbolaConvex>())
        return StripMap{h->focal(), 2.0 * h->mu() / pi, true};
    if (auto const* h = domain.get_if<HyperbolaConcave>())
        return StripMap{h->focal(), 2.0 * h->mu() / pi, false};
    return std::nullopt;
}

Chart point_chart(GridChart chart)
{
    switch (chart)
    {
        case GridChart::EuclideanCartesian:
        case GridChart::HyperbolaStrip:
            return Chart::EuclideanCartesian;
        case GridChart::HalfPlaneCartesian:
            return Chart::HalfPlaneCartesian;
        case GridChart::UnitDisk:
            return Chart::UnitDisk;
    }
    return Chart::EuclideanCartesian;
}

double box_level(Box const& b, double u, double v)
{
    return std::max({b.umin - u, u - b.umax, b.vmin - v, v - b.vmax});
}

std::optional<Box> bounded_extent(DomainSpec const& d, GridChart chart)
{
    if (auto const* e = d.get_if<Ellipse>())
        return Box{e->h - e->a, e->h + e->a, e->k - e->b, e->k + e->b};
    if (auto const* an = d.get_if<Annulus>())
        return Box{-an->b, an->b, -an->b, an->b};
    if (auto const* hd = d.get_if<HyperbolicDisk>())
    {
        if (chart == GridChart::UnitDisk)
        {
            double const t = std::tanh(0.5 * hd->R);
            return Box{-t, t, -t, t};
        }
        double const c = std::cosh(hd->R);
        double const s = std::sinh(hd->R);
        return Box{c - s, c + s, -s, s};
    }
    return std::nullopt;
}

// Left edge known from the domain alone, in Cartesian grid charts.
std::optional<double> lower_u(DomainSpec const& d, GridChart chart)
{
    if (chart != GridChart::EuclideanCartesian && chart != GridChart::HalfPlaneCartesian)
        return std::nullopt;
    switch (d.kind())
    {
        case DomainKind::Parabola:
        case DomainKind::AngularSector:
            return 0.0;
        case DomainKind::HyperbolaConvex:
            return d.get_if<HyperbolaConvex>()->a;
        case DomainKind::Horodisk:
            return d.get_if<Horodisk>()->R;
        case DomainKind::GeodesicNbhd:
        case DomainKind::GeodesicHalfNbhd:
        case DomainKind::IdealNbhd:
            return 0.0;
        default:
            return std::nullopt;
    }
}

class GridProblem
{
  public:
    GridProblem(DomainSpec const& domain, SolveOptions const& opts)
        : domain_(domain), opts_(opts)
    {
        if (!(opts.h > 0.0) || !std::isfinite(opts.h))
            throw ParameterError("grid step 'h' must be positive");
        choose_chart();
        if (!domain.relatively_compact() && !opts.truncation)
        {
            throw TruncationRequiredError("domain " + domain.to_string()
                                          + " is unbounded; a truncation is required");
        }
    }

    GridChart chart() const { return chart_; }

    double level(double u, double v) const
    {
        double g;
        if (chart_ == GridChart::HyperbolaStrip)
        {
            g = std::abs(v) - 0.5 * pi;
            if (std::abs(g) < 1e-12)
                g = 0.0;
        }
        else
            g = level_set(domain_, point_chart(chart_), u, v).value;
        if (auto const& t = opts_.truncation)
        {
            switch (t->kind)
            {
                case Truncation::Kind::Box:
                    g = std::max(g, box_level(t->box, u, v));
                    break;
                case Truncation::Kind::Domain:
                    g = std::max(g, level_set(*t->domain, point_chart(chart_), u, v).value);
                    break;
                case Truncation::Kind::Strip:
                    g = std::max({g, strip_lo_ - u, u - strip_hi_});
                    break;
            }
        }
        return g;
    }

    double source(double u, double v) const
    {
        switch (chart_)
        {
            case GridChart::EuclideanCartesian:
                return 1.0;
            case GridChart::HalfPlaneCartesian:
                return 1.0 / (u * u);
            case GridChart::UnitDisk: {
                double const s = 1.0 - u * u - v * v;
                return 4.0 / (s * s);
            }
            case GridChart::HyperbolaStrip:
                return std::norm(strip_->dz({u, v}));
        }
        return 1.0;
    }

    Box extent() const
    {
        if (opts_.bbox)
            return *opts_.bbox;
        std::optional<Box> box = bounded_extent(domain_, chart_);
        if (auto const& t = opts_.truncation)
        {
            std::optional<Box> tb;
            switch (t->kind)
            {
                case Truncation::Kind::Box:
                    tb = t->box;
                    break;
                case Truncation::Kind::Domain:
                    tb = bounded_extent(*t->domain, chart_);
                    if (!tb)
                        throw ParameterError("truncation domain must be bounded");
                    break;
                case Truncation::Kind::Strip:
                    tb = Box{-t->strip_length, t->strip_length, -0.5 * pi, 0.5 * pi};
                    break;
            }
            if (box)
            {
                box = Box{std::max(box->umin, tb->umin),
                          std::min(box->umax, tb->umax),
                          std::max(box->vmin, tb->vmin),
                          std::min(box->vmax, tb->vmax)};
            }
            else
            {
                box = tb;
            }
        }
        if (auto lo = lower_u(domain_, chart_))
            box->umin = std::max(box->umin, *lo);
        if (!(box->umin < box->umax && box->vmin < box->vmax))
            throw ParameterError("truncation does not intersect the domain");
        return *box;
    }

    std::pair<double, double> coords(Point2 const& pt) const
    {
        return grid_coordinates(domain_, chart_, pt);
    }

    //! Move the strip ends onto node lines so every leg is a full step.
    void snap_strip(double lo, double hi)
    {
        strip_lo_ = lo;
        strip_hi_ = hi;
    }

  private:
    void choose_chart()
    {
        auto const& t = opts_.truncation;
        if (t && t->kind == Truncation::Kind::Strip)
        {
            strip_ = strip_map(domain_);
            if (!strip_)
                throw ParameterError("strip truncation applies only to hyperbola domains");
            if (!(t->strip_length > 0.0))
                throw ParameterError("strip length 'S' must be positive");
            chart_ = GridChart::HyperbolaStrip;
            strip_lo_ = -t->strip_length;
            strip_hi_ = t->strip_length;
            return;
        }
        if (!domain_.is_hyperbolic())
        {
            if (opts_.chart && *opts_.chart != Chart::EuclideanCartesian)
                throw ChartError("Euclidean domains are gridded in the euclidean chart");
            chart_ = GridChart::EuclideanCartesian;
            return;
        }
        Chart c = opts_.chart.value_or(domain_.kind() == DomainKind::HyperbolicDisk
                                           ? Chart::UnitDisk
                                           : Chart::HalfPlaneCartesian);
        if (c == Chart::UnitDisk)
            chart_ = GridChart::UnitDisk;
        else if (c == Chart::HalfPlaneCartesian)
            chart_ = GridChart::HalfPlaneCartesian;
        else
            throw ChartError("hyperbolic grids use the half-plane or unit-disk chart");
        if (t && t->kind == Truncation::Kind::Domain && !t->domain->is_hyperbolic())
            throw ChartError("truncation domain geometry does not match the domain");
    }

    DomainSpec domain_;
    SolveOptions opts_;
    GridChart chart_ = GridChart::EuclideanCartesian;
    std::optional<StripMap> strip_;
    double strip_lo_ = 0.0;
    double strip_hi_ = 0.0;
};

// Fraction of the leg from (u0,v0) to (u1,v1) before the zero of level.
template<class F>
double crossing_fraction(F const& level, double u0, double v0, double u1, double v1)
{
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it)
    {
        double const mid = 0.5 * (lo + hi);
        if (level(u0 + mid * (u1 - u0), v0 + mid * (v1 - v0)) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double const t = 0.5 * (lo + hi);
    // A neighbor sitting on the boundary is a full leg.
    if (t > 1.0 - 1e-9)
        return 1.0;
    return std::max(t, 1e-8);
}

std::string fmt9(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double round9(double v)
{
    return std::stod(fmt9(v));
}

}  // namespace

std::string_view to_string(GridChart chart)
{
    switch (chart)
    {
        case GridChart::EuclideanCartesian:
            return "euclidean";
        case GridChart::HalfPlaneCartesian:
            return "half-plane";
        case GridChart::UnitDisk:
            return "unit-disk";
        case GridChart::HyperbolaStrip:
            return "hyperbola-strip";
    }
    return "?";
}

std::pair<double, double> grid_coordinates(DomainSpec const& domain, GridChart chart,
                                           Point2 const& pt)
{
    if (chart == GridChart::HyperbolaStrip)
    {
        auto const map = strip_map(domain);
        if (!map)
            throw ChartError("strip chart needs a hyperbola domain");
        Point2 const e = convert(pt, Chart::EuclideanCartesian);
        complex const zeta = map->zeta({e.u, e.v});
        return {zeta.real(), zeta.imag()};
    }
    Point2 const q = convert(pt, point_chart(chart));
    return {q.u, q.v};
}

std::string Truncation::to_string() const
{
    switch (kind)
    {
        case Kind::Box:
            return "box:" + fmt9(box.umin) + "," + fmt9(box.umax) + "," + fmt9(box.vmin) + ","
                   + fmt9(box.vmax);
        case Kind::Domain:
            return domain->to_string();
        case Kind::Strip:
            return "strip:S=" + fmt9(strip_length);
    }
    return {};
}

Truncation parse_truncation(std::string_view text)
{
    auto number = [](std::string_view key, std::string_view s) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
            throw ParseError(std::string(key), "invalid number '" + std::string(s) + "'");
        return v;
    };

    Truncation t;
    if (text.starts_with("box:"))
    {
        std::string_view rest = text.substr(4);
        double vals[4];
        char const* names[4] = {"umin", "umax", "vmin", "vmax"};
        for (int i = 0; i < 4; ++i)
        {
            auto comma = rest.find(',');
            if ((i < 3) == (comma == std::string_view::npos))
                throw ParseError("box", "box truncation needs four comma-separated values");
            vals[i] = number(names[i], rest.substr(0, comma));
            rest = i < 3 ? rest.substr(comma + 1) : std::string_view{};
        }
        if (!(vals[0] < vals[1] && vals[2] < vals[3]))
            throw ParseError("box", "box truncation needs umin < umax and vmin < vmax");
        t.kind = Truncation::Kind::Box;
        t.box = {vals[0], vals[1], vals[2], vals[3]};
        return t;
    }
    if (text.starts_with("strip:"))
    {
        std::string_view rest = text.substr(6);
        if (!rest.starts_with("S="))
            throw ParseError(std::string(rest), "strip truncation expects S=<length>");
        t.kind = Truncation::Kind::Strip;
        t.strip_length = number("S", rest.substr(2));
        if (!(t.strip_length > 0.0))
            throw ParseError("S", "strip length must be positive");
        return t;
    }
    t.kind = Truncation::Kind::Domain;
    t.domain = parse_domain(text);
    return t;
}

std::pair<double, double> GridSolution::to_grid(Point2 const& pt) const
{
    if (chart == GridChart::HyperbolaStrip && !source_domain)
        throw ChartError("grid has no domain for the strip map");
    if (source_domain)
        return grid_coordinates(*source_domain, chart, pt);
    Point2 const q = convert(pt, point_chart(chart));
    return {q.u, q.v};
}

double GridSolution::interpolate(Point2 const& pt) const
{
    auto [gu, gv] = to_grid(pt);
    double const x = (gu - bbox.umin) / h;
    double const y = (gv - bbox.vmin) / h;
    int i = static_cast<int>(std::floor(x));
    int j = static_cast<int>(std::floor(y));
    if (i < 0 || j < 0 || i >= nu || j >= nv)
        return 0.0;
    double fx = x - i;
    double fy = y - j;
    // Exact node hits should not reach into a neighbor.
    if (fx < 1e-9)
        fx = 0.0;
    if (fy < 1e-9)
        fy = 0.0;
    if (fx > 1.0 - 1e-9 && i + 1 < nu)
    {
        ++i;
        fx = 0.0;
    }
    if (fy > 1.0 - 1e-9 && j + 1 < nv)
    {
        ++j;
        fy = 0.0;
    }
    auto value = [&](int a, int b) {
        if (a >= nu || b >= nv)
            return 0.0;
        return at(a, b);
    };
    double const v00 = value(i, j);
    double const v10 = fx > 0.0 ? value(i + 1, j) : 0.0;
    double const v01 = fy > 0.0 ? value(i, j + 1) : 0.0;
    double const v11 = fx > 0.0 && fy > 0.0 ? value(i + 1, j + 1) : 0.0;
    return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
}

double GridSolution::nearest(Point2 const& pt) const
{
    auto [gu, gv] = to_grid(pt);
    int const i = static_cast<int>(std::lround((gu - bbox.umin) / h));
    int const j = static_cast<int>(std::lround((gv - bbox.vmin) / h));
    if (i < 0 || j < 0 || i >= nu || j >= nv)
        return 0.0;
    return at(i, j);
}

void GridSolution::write_csv(std::string const& path) const
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    out << "u,v,value\n";
    for (int j = 0; j < nv; ++j)
    {
        for (int i = 0; i < nu; ++i)
        {
            if (mask[index(i, j)] == NodeKind::Exterior)
                continue;
            out << fmt9(node_u(i)) << ',' << fmt9(node_v(j)) << ',' << fmt9(at(i, j)) << '\n';
        }
    }
}

void GridSolution::write_sidecar(std::string const& path) const
{
    nlohmann::ordered_json j;
    j["h"] = round9(h);
    j["bbox"] = {round9(bbox.umin), round9(bbox.umax), round9(bbox.vmin), round9(bbox.vmax)};
    j["residual"] = round9(residual);
    j["domain"] = domain;
    j["chart"] = std::string(to_string(chart));
    j["truncation"] = truncation.empty() ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(truncation);
    j["nu"] = nu;
    j["nv"] = nv;
    j["iterations"] = iterations;
    j["solver"] = solver;
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

GridSolution solve_grid(DomainSpec const& domain, SolveOptions const& opts)
{
    GridProblem prob(domain, opts);
    Box const ext = prob.extent();

    GridSolution sol;
    sol.chart = prob.chart();
    sol.domain = domain.to_string();
    sol.truncation = opts.truncation ? opts.truncation->to_string() : std::string{};
    sol.source_domain = domain;

    double h = opts.h;
    double umin, vmin;
    int nu, nv;
    std::optional<std::pair<double, double>> anchor;
    if (opts.anchor)
        anchor = prob.coords(*opts.anchor);

    auto layout = [&](double lo, double hi, double a, double step, double& start, int& count) {
        // One padding node beyond each side, with `a` on a node.
        double const k_lo = std::ceil((a - lo) / step - 1e-9) + 1.0;
        double const k_hi = std::ceil((hi - a) / step - 1e-9) + 1.0;
        start = a - k_lo * step;
        count = static_cast<int>(k_lo + k_hi) + 1;
    };

    if (sol.chart == GridChart::HyperbolaStrip)
    {
        // Strip edges tau = +-pi/2 must be node lines.
        int const half = std::max(1, static_cast<int>(std::ceil(0.5 * pi / opts.h - 1e-9)));
        h = 0.5 * pi / half;
        vmin = -0.5 * pi;
        nv = 2 * half + 1;
        layout(ext.umin, ext.umax, anchor ? anchor->first : 0.0, h, umin, nu);
        prob.snap_strip(umin + h, umin + (nu - 2) * h);
    }
    else
    {
        double const au = anchor ? anchor->first : 0.5 * (ext.umin + ext.umax);
        double const av = anchor ? anchor->second : 0.5 * (ext.vmin + ext.vmax);
        layout(ext.umin, ext.umax, au, h, umin, nu);
        layout(ext.vmin, ext.vmax, av, h, vmin, nv);
    }
    if (static_cast<double>(nu) * nv > 5e7)
        throw ParameterError("grid too large; increase h or shrink the truncation");

    sol.h = h;
    sol.nu = nu;
    sol.nv = nv;
    sol.bbox = {umin, umin + (nu - 1) * h, vmin, vmin + (nv - 1) * h};

    std::size_t const n = static_cast<std::size_t>(nu) * nv;
    std::vector<double> lev(n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nv; ++j)
    {
        for (int i = 0; i < nu; ++i)
            lev[sol.index(i, j)] = prob.level(sol.node_u(i), sol.node_v(j));
    }
    for (int j = 0; j < nv; ++j)
    {
        for (int i = 0; i < nu; ++i)
        {
            bool const perimeter = i == 0 || j == 0 || i == nu - 1 || j == nv - 1;
            if (perimeter && lev[sol.index(i, j)] < 0.0)
                throw ParameterError("bounding box does not cover the domain");
        }
    }

    StencilSystem sys(nu, nv);
    sol.mask.assign(n, NodeKind::Exterior);
    long num_active = 0;
    auto level = [&](double u, double v) { return prob.level(u, v); };
    for (int j = 1; j < nv - 1; ++j)
    {
        for (int i = 1; i < nu - 1; ++i)
        {
            std::size_t const p = sol.index(i, j);
            if (!(lev[p] < 0.0))
                continue;
            ++num_active;
            double const u = sol.node_u(i);
            double const v = sol.node_v(j);
            // Leg lengths in units of h; 1 when the neighbor is interior.
            auto leg = [&](int di, int dj) {
                std::size_t const q = sol.index(i + di, j + dj);
                if (lev[q] < 0.0)
                    return 1.0;
                return crossing_fraction(level, u, v, u + di * h, v + dj * h);
            };
            double const le = leg(1, 0);
            double const lw = leg(-1, 0);
            double const ln = leg(0, 1);
            double const ls = leg(0, -1);
            sys.active[p] = 1;
            sys.diag[p] = 2.0 / (le * lw) + 2.0 / (ln * ls);
            sys.east[p] = lev[p + 1] < 0.0 ? -2.0 / (le * (le + lw)) : 0.0;
            sys.west[p] = lev[p - 1] < 0.0 ? -2.0 / (lw * (le + lw)) : 0.0;
            sys.north[p] = lev[p + nu] < 0.0 ? -2.0 / (ln * (ln + ls)) : 0.0;
            sys.south[p] = lev[p - nu] < 0.0 ? -2.0 / (ls * (ln + ls)) : 0.0;
            sys.rhs[p] = prob.source(u, v) * h * h;
            bool const cut = le < 1.0 || lw < 1.0 || ln < 1.0 || ls < 1.0;
            sol.mask[p] = cut ? NodeKind::BoundaryAdjacent : NodeKind::Interior;
        }
    }
    if (num_active == 0)
        throw ParameterError("grid has no interior nodes; decrease h");

    IterControl ctl;
    ctl.tol = opts.tol;
    ctl.max_iter = opts.max_iter;
    bool use_cg = opts.solver == LinearSolver::CG;
    if (opts.solver == LinearSolver::Auto)
        use_cg = sys.is_symmetric();
    if (use_cg && !sys.is_symmetric())
        throw ParameterError("CG requested for a nonsymmetric grid system");

    std::vector<double> x(n, 0.0);
    SolverStats st;
    if (use_cg)
    {
        st = opts.parallel ? cg_parallel(sys, x, ctl) : cg_serial(sys, x, ctl);
        sol.solver = "cg";
    }
    else
    {
        double const omega = opts.omega > 0.0 ? opts.omega : model_sor_omega(nu, nv);
        if (!(omega > 0.0 && omega < 2.0))
            throw ParameterError("SOR factor 'omega' must lie in (0, 2)");
        st = opts.parallel ? sor_red_black(sys, x, omega, ctl) : sor_serial(sys, x, omega, ctl);
        sol.solver = "sor";
    }
    if (!st.converged)
    {
        throw SolverError("linear solver stopped at residual " + fmt9(st.residual) + " after "
                          + std::to_string(st.iterations) + " iterations");
    }
    sol.values = std::move(x);
    sol.residual = st.residual;
    sol.iterations = st.iterations;
    return sol;
}

std::vector<double> exhaustion_run(DomainSpec const& domain, Point2 const& pt,
                                   std::vector<Truncation> const& truncations,
                                   SolveOptions const& opts)
{
    std::vector<double> out;
    out.reserve(truncations.size());
    for (auto const& t : truncations)
    {
        SolveOptions o = opts;
        o.truncation = t;
        o.bbox.reset();
        o.anchor = pt;
        out.push_back(solve_grid(domain, o).interpolate(pt));
    }
    return out;
}

}  // namespace exittime
