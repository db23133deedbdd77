#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "geometry.hpp"

namespace exittime {

enum class Method : std::uint8_t
{
    Euler,
    WoS,
};

struct MCConfig
{
    std::uint64_t paths = 10000;
    double dt = 1e-3;
    std::uint64_t seed = 0;
    double t_max = 100.0;
    Method method = Method::Euler;
    double wos_eps = 1e-4;
    std::uint64_t max_jumps = 1000000;
    //! Euler chart; defaults to default_cartesian_chart(domain).
    std::optional<Chart> chart;
    //! Worker count for the parallel driver; 0 uses the OpenMP default.
    int threads = 0;

    void validate() const;
};

struct MCEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    double censored_fraction = 0.0;

    bool operator==(MCEstimate const&) const = default;
};

struct PathResult
{
    double time;
    bool censored;
};

//! One path; `path` selects the random stream.
PathResult simulate_path(DomainSpec const& domain, Point2 const& start, MCConfig const& cfg,
                         std::uint64_t path);

//! Mean, standard error and censored fraction with compensated sums.
MCEstimate summarize(std::vector<PathResult> const& results);

//! OpenMP driver. Bit-identical to simulate_exit_serial for any thread count.
MCEstimate simulate_exit(DomainSpec const& domain, Point2 const& start, MCConfig const& cfg);

//! Serial reference driver.
MCEstimate simulate_exit_serial(DomainSpec const& domain, Point2 const& start, MCConfig const& cfg);

//! Mean exit time from the center of a metric ball of radius rho.
double ball_exit_mean(bool hyperbolic, double rho);

}  // namespace exittime
