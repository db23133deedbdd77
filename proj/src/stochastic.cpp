#include "exittime/stochastic.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include <omp.h>

#include "exittime/rng.hpp"

namespace exittime {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Prepared
{
    Chart chart;
    Point2 start;
};

Prepared prepare(DomainSpec const& domain, Point2 const& start, MCConfig const& cfg)
{
    cfg.validate();
    if (!contains(domain, start))
        throw OutsideDomainError("start point is not inside " + domain.to_string());

    Chart chart = cfg.chart.value_or(default_cartesian_chart(domain));
    if (cfg.method == Method::WoS)
        chart = default_cartesian_chart(domain);
    bool const ok = domain.is_hyperbolic()
                        ? (chart == Chart::HalfPlaneCartesian || chart == Chart::UnitDisk)
                        : chart == Chart::EuclideanCartesian;
    if (!ok)
    {
        throw ChartError("cannot simulate " + domain.to_string() + " in chart "
                         + std::string(to_string(chart)));
    }
    return {chart, convert(start, chart)};
}

// Conformal factor without range checks; the caller keeps points inside.
inline double chart_phi(Chart chart, double u, double v)
{
    if (chart == Chart::HalfPlaneCartesian)
        return 1.0 / (u * u);
    if (chart == Chart::UnitDisk)
    {
        double const s = 1.0 - u * u - v * v;
        return 4.0 / (s * s);
    }
    return 1.0;
}

PathResult euler_path(DomainSpec const& domain, Prepared const& prep, MCConfig const& cfg,
                      std::uint64_t path)
{
    PathStream rng(cfg.seed, path);
    double const dt = cfg.dt;
    double u = prep.start.u;
    double v = prep.start.v;
    LevelSample g = level_set(domain, prep.chart, u, v);
    double d0 = g.distance_estimate();

    for (std::uint64_t step = 0;; ++step)
    {
        double const t = static_cast<double>(step) * dt;
        if (t >= cfg.t_max)
            return {cfg.t_max, true};

        double const phi = chart_phi(prep.chart, u, v);
        double const s = std::sqrt(2.0 * dt / phi);
        auto [z1, z2] = rng.normal_pair();
        double const u1 = u + s * z1;
        double const v1 = v + s * z2;
        LevelSample const g1 = level_set(domain, prep.chart, u1, v1);
        if (g1.value >= 0.0)
            return {t + dt * (-g.value) / (g1.value - g.value), false};

        // Brownian bridge may have crossed between two interior samples.
        double const d1 = g1.distance_estimate();
        double const q = d0 * d1 * phi / dt;
        if (q < 40.0 && rng.uniform() < std::exp(-q))
            return {t + 0.5 * dt, false};

        u = u1;
        v = v1;
        g = g1;
        d0 = d1;
    }
}

double wos_radius(DomainSpec const& domain, Point2 const& pt)
{
    if (!contains(domain, pt))
        return 0.0;
    return boundary_distance_lb(domain, pt);
}

PathResult wos_path(DomainSpec const& domain, Prepared const& prep, MCConfig const& cfg,
                    std::uint64_t path)
{
    PathStream rng(cfg.seed, path);
    bool const hyperbolic = domain.is_hyperbolic();
    Point2 pt = prep.start;
    double total = 0.0;
    for (std::uint64_t jump = 0; jump < cfg.max_jumps; ++jump)
    {
        double const rho = wos_radius(domain, pt);
        if (rho < cfg.wos_eps)
            return {total, false};
        total += ball_exit_mean(hyperbolic, rho);
        double const angle = two_pi * rng.uniform();
        if (hyperbolic)
            pt = geodesic_circle_point(pt, rho, angle);
        else
            pt = {pt.u + rho * std::cos(angle), pt.v + rho * std::sin(angle), pt.chart};
    }
    return {total, true};
}

PathResult run_path(DomainSpec const& domain, Prepared const& prep, MCConfig const& cfg,
                    std::uint64_t path)
{
    if (cfg.method == Method::WoS)
        return wos_path(domain, prep, cfg, path);
    return euler_path(domain, prep, cfg, path);
}

struct Neumaier
{
    double sum = 0.0;
    double c = 0.0;
    void add(double x)
    {
        double const t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    double result() const { return sum + c; }
};

}  // namespace

void MCConfig::validate() const
{
    if (paths < 1)
        throw ParameterError("'paths' must be at least 1");
    if (!(dt > 0.0 && dt <= 1e-2))
        throw ParameterError("'dt' must lie in (0, 1e-2]");
    if (!(t_max > 0.0))
        throw ParameterError("'t_max' must be positive");
    if (!(wos_eps > 0.0 && wos_eps <= 1e-2))
        throw ParameterError("'wos_eps' must lie in (0, 1e-2]");
    if (max_jumps < 1)
        throw ParameterError("'max_jumps' must be at least 1");
    if (threads < 0)
        throw ParameterError("'threads' must be nonnegative");
}

double ball_exit_mean(bool hyperbolic, double rho)
{
    if (!hyperbolic)
        return 0.25 * rho * rho;
    return 2.0 * std::log(std::cosh(0.5 * rho));
}

PathResult simulate_path(DomainSpec const& domain, Point2 const& start, MCConfig const& cfg,
                         std::uint64_t path)
{
    return run_path(domain, prepare(domain, start, cfg), cfg, path);
}

MCEstimate summarize(std::vector<PathResult> const& results)
{
    MCEstimate est;
    est.n = results.size();
    if (results.empty())
        return est;

    Neumaier sum;
    std::uint64_t censored = 0;
    for (auto const& r : results)
    {
        sum.add(r.time);
        censored += r.censored ? 1 : 0;
    }
    double const n = static_cast<double>(results.size());
    est.mean = sum.result() / n;

    if (results.size() > 1)
    {
        Neumaier sq;
        for (auto const& r : results)
        {
            double const d = r.time - est.mean;
            sq.add(d * d);
        }
        est.std_error = std::sqrt(sq.result() / (n - 1.0) / n);
    }
    est.censored_fraction = static_cast<double>(censored) / n;
    return est;
}

MCEstimate simulate_exit_serial(DomainSpec const& domain, Point2 const& start, MCConfig const& cfg)
{
    Prepared const prep = prepare(domain, start, cfg);
    std::vector<PathResult> results(cfg.paths);
    for (std::uint64_t i = 0; i < cfg.paths; ++i)
        results[i] = run_path(domain, prep, cfg, i);
    return summarize(results);
}

MCEstimate simulate_exit(DomainSpec const& domain, Point2 const& start, MCConfig const& cfg)
{
    Prepared const prep = prepare(domain, start, cfg);
    std::vector<PathResult> results(cfg.paths);
    std::exception_ptr failure;
    auto const n = static_cast<std::int64_t>(cfg.paths);
    int const threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i)
    {
        try
        {
            results[i] = run_path(domain, prep, cfg, static_cast<std::uint64_t>(i));
        }
        catch (...)
        {
#pragma omp critical
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return summarize(results);
}

}  // namespace exittime
