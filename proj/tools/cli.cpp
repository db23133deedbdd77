#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "exittime/closed_form.hpp"
#include "exittime/pde_oracle.hpp"
#include "exittime/stochastic.hpp"

namespace exittime::cli {
namespace {

using json = nlohmann::ordered_json;

class UsageError : public Error
{
  public:
    using Error::Error;
};

std::string fmt9(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

json num9(double v)
{
    if (!std::isfinite(v))
        return fmt9(v);
    return std::stod(fmt9(v));
}

double parse_double(std::string_view token, std::string_view what)
{
    double v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
        throw UsageError("invalid " + std::string(what) + " '" + std::string(token) + "'");
    return v;
}

std::pair<double, double> parse_pair(std::string_view token, std::string_view what)
{
    auto comma = token.find(',');
    if (comma == std::string_view::npos)
        throw UsageError("invalid " + std::string(what) + " '" + std::string(token) + "', expected u,v");
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    };
    std::string_view a = trim(token.substr(0, comma));
    std::string_view b = trim(token.substr(comma + 1));
    try
    {
        return {parse_double(a, what), parse_double(b, what)};
    }
    catch (UsageError const&)
    {
        throw UsageError("invalid " + std::string(what) + " '" + std::string(token) + "'");
    }
}

std::vector<std::pair<double, double>> read_points_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read points file '" + path + "'");
    std::vector<std::pair<double, double>> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        line = line.substr(0, line.find('#'));
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try
        {
            pts.push_back(parse_pair(line, "point"));
        }
        catch (UsageError const& e)
        {
            throw UsageError(path + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return pts;
}

Chart parse_chart(std::string const& name)
{
    auto c = chart_from_string(name);
    if (!c)
        throw UsageError("unknown chart '" + name + "'");
    return *c;
}

// Merge `--config file.json` into args; flags given explicitly win.
std::vector<std::string> apply_config(std::vector<std::string> args)
{
    auto it = std::find_if(args.begin(), args.end(), [](std::string const& a) {
        return a == "--config" || a.starts_with("--config=");
    });
    if (it == args.end())
        return args;
    std::string path;
    if (*it == "--config")
    {
        if (std::next(it) == args.end())
            throw UsageError("--config needs a file name");
        path = *std::next(it);
        args.erase(it, std::next(it, 2));
    }
    else
    {
        path = it->substr(9);
        args.erase(it);
    }

    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file '" + path + "'");
    nlohmann::json cfg;
    try
    {
        cfg = nlohmann::json::parse(in);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw UsageError("config file '" + path + "': " + e.what());
    }
    if (!cfg.is_object())
        throw UsageError("config file '" + path + "' must hold a JSON object");

    auto given = [&](std::string const& flag) {
        return std::any_of(args.begin(), args.end(), [&](std::string const& a) {
            return a == flag || a.starts_with(flag + "=");
        });
    };
    auto scalar = [](nlohmann::json const& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    for (auto const& [key, value] : cfg.items())
    {
        std::string const flag = "--" + key;
        if (given(flag))
            continue;
        if (value.is_boolean())
        {
            if (value.get<bool>())
                args.push_back(flag);
        }
        else if (value.is_array())
        {
            for (auto const& v : value)
                args.push_back(flag + "=" + scalar(v));
        }
        else
        {
            args.push_back(flag + "=" + scalar(value));
        }
    }
    return args;
}

struct PointArgs
{
    std::vector<std::string> points;
    std::string points_file;
    std::string chart;

    void add_to(CLI::App* app, bool many)
    {
        if (many)
        {
            app->add_option("--point", points, "Point u,v (repeatable)");
            app->add_option("--points-file", points_file, "File with one u,v per line, # comments");
        }
        else
        {
            app->add_option("--point", points, "Start point u,v")->required()->expected(1);
        }
        app->add_option("--chart", chart, "Chart of the input coordinates (default: domain native)");
    }

    std::vector<Point2> resolve(DomainSpec const& domain) const
    {
        Chart const c = chart.empty() ? domain.native_chart() : parse_chart(chart);
        std::vector<Point2> out;
        for (auto const& s : points)
        {
            auto [u, v] = parse_pair(s, "point");
            out.push_back({u, v, c});
        }
        if (!points_file.empty())
        {
            for (auto [u, v] : read_points_file(points_file))
                out.push_back({u, v, c});
        }
        if (out.empty())
            throw UsageError("no points given; use --point or --points-file");
        for (auto const& p : out)
        {
            if (!in_chart_range(p))
            {
                throw OutsideDomainError("point " + fmt9(p.u) + "," + fmt9(p.v)
                                         + " is outside the " + std::string(to_string(c))
                                         + " chart");
            }
        }
        return out;
    }
};

struct McArgs
{
    std::uint64_t paths = 10000;
    double dt = 1e-3;
    std::uint64_t seed = 0;
    double t_max = 100.0;
    std::string method = "euler";
    double wos_eps = 1e-4;
    std::string sim_chart;
    int threads = 0;

    void add_to(CLI::App* app)
    {
        app->add_option("--paths", paths, "Number of paths")->capture_default_str();
        app->add_option("--dt", dt, "Euler time step")->capture_default_str();
        app->add_option("--seed", seed, "Random seed")->capture_default_str();
        app->add_option("--t-max", t_max, "Censoring time")->capture_default_str();
        app->add_option("--method", method, "euler or wos")
            ->check(CLI::IsMember({"euler", "wos"}))
            ->capture_default_str();
        app->add_option("--wos-eps", wos_eps, "Walk-on-spheres capture shell")->capture_default_str();
        app->add_option("--sim-chart", sim_chart, "Simulation chart (half-plane or unit-disk)");
        app->add_option("--threads", threads, "Worker threads (0: OpenMP default)")->capture_default_str();
    }

    MCConfig config() const
    {
        MCConfig c;
        c.paths = paths;
        c.dt = dt;
        c.seed = seed;
        c.t_max = t_max;
        c.method = method == "wos" ? Method::WoS : Method::Euler;
        c.wos_eps = wos_eps;
        if (!sim_chart.empty())
            c.chart = parse_chart(sim_chart);
        c.threads = threads;
        c.validate();
        return c;
    }
};

struct GridArgs
{
    double h = 0.01;
    std::string bbox;
    std::string truncation;
    std::string grid_chart;
    double omega = 1.9;
    double tol = 1e-10;

    void add_to(CLI::App* app)
    {
        // -h would clash with the grid step
        app->set_help_flag("--help", "Print this help message and exit");
        app->add_option("--h", h, "Grid step")->capture_default_str();
        app->add_option("--bbox", bbox, "Grid box umin,umax,vmin,vmax");
        app->add_option("--truncation", truncation,
                        "Truncation: box:umin,umax,vmin,vmax, strip:S=<len>, or a domain spec");
        app->add_option("--grid-chart", grid_chart, "Grid chart for hyperbolic domains");
        app->add_option("--omega", omega, "SOR factor (<= 0: automatic)")->capture_default_str();
        app->add_option("--tol", tol, "Relative residual tolerance")->capture_default_str();
    }

    SolveOptions options() const
    {
        SolveOptions o;
        o.h = h;
        o.omega = omega;
        o.tol = tol;
        if (!bbox.empty())
        {
            std::vector<double> v;
            std::stringstream ss(bbox);
            std::string part;
            while (std::getline(ss, part, ','))
                v.push_back(parse_double(part, "bbox value"));
            if (v.size() != 4 || !(v[0] < v[1] && v[2] < v[3]))
                throw UsageError("invalid bbox '" + bbox + "'");
            o.bbox = Box{v[0], v[1], v[2], v[3]};
        }
        if (!truncation.empty())
            o.truncation = parse_truncation(truncation);
        if (!grid_chart.empty())
            o.chart = parse_chart(grid_chart);
        return o;
    }
};

json estimate_json(MCEstimate const& e)
{
    json j;
    j["mean"] = num9(e.mean);
    j["stderr"] = num9(e.std_error);
    j["n"] = e.n;
    j["censored_fraction"] = num9(e.censored_fraction);
    return j;
}

int cmd_eval(DomainSpec const& domain, std::vector<Point2> const& pts,
             std::optional<FamilyConstants> const& family, std::ostream& out)
{
    for (auto const& p : pts)
    {
        ExitTime const t = exit_time(domain, p);
        double value = t.value();
        if (family && t.is_finite())
            value += family_term(domain, p, *family);
        out << fmt9(p.u) << ' ' << fmt9(p.v) << ' ' << fmt9(value) << '\n';
    }
    return exit_ok;
}

// Nonnegative harmonic sum on the half plane, without a domain term.
int cmd_atoms(std::vector<Point2> const& pts, FamilyConstants const& k, std::ostream& out)
{
    for (auto const& p : pts)
        out << fmt9(p.u) << ' ' << fmt9(p.v) << ' ' << fmt9(poisson_atom_sum(p, k)) << '\n';
    return exit_ok;
}

int cmd_simulate(DomainSpec const& domain, Point2 const& start, MCConfig const& cfg,
                 std::ostream& out)
{
    MCEstimate const e = simulate_exit(domain, start, cfg);
    json j = estimate_json(e);
    j["seed"] = cfg.seed;
    out << j.dump(2) << '\n';
    return exit_ok;
}

int cmd_solve(DomainSpec const& domain, SolveOptions const& opts, std::string const& out_path,
              std::vector<Point2> const& probes, std::ostream& out)
{
    GridSolution const g = solve_grid(domain, opts);
    std::string const csv = out_path + ".csv";
    std::string const sidecar = out_path + ".json";
    g.write_csv(csv);
    g.write_sidecar(sidecar);

    json j;
    j["csv"] = csv;
    j["sidecar"] = sidecar;
    j["h"] = num9(g.h);
    j["nu"] = g.nu;
    j["nv"] = g.nv;
    j["residual"] = num9(g.residual);
    j["iterations"] = g.iterations;
    if (!probes.empty())
    {
        json arr = json::array();
        for (auto const& p : probes)
            arr.push_back({{"u", num9(p.u)}, {"v", num9(p.v)}, {"value", num9(g.interpolate(p))}});
        j["probes"] = arr;
    }
    out << j.dump(2) << '\n';
    return exit_ok;
}

int cmd_validate(DomainSpec const& domain, std::vector<Point2> const& pts, MCConfig const& cfg,
                 SolveOptions opts, double grid_tol, std::ostream& out, std::ostream& err)
{
    if (!domain.finite_exit())
        throw UnsupportedDomainError("infinite/unbounded domain: expected exit time is infinite");
    if (!domain.relatively_compact() && !opts.truncation)
        throw TruncationRequiredError("domain " + domain.to_string()
                                      + " is unbounded; --truncation is required for the grid");

    std::vector<double> closed;
    for (auto const& p : pts)
        closed.push_back(exit_time(domain, p).value());
    if (!opts.anchor)
        opts.anchor = pts.front();
    GridSolution const grid = solve_grid(domain, opts);

    json report;
    report["domain"] = domain.to_string();
    report["grid"] = {{"h", num9(grid.h)}, {"residual", num9(grid.residual)}, {"tolerance", grid_tol}};
    report["seed"] = cfg.seed;
    json rows = json::array();
    bool all_pass = true;

    char line[256];
    std::snprintf(line, sizeof line, "%12s %12s %12s %12s %10s %12s %6s\n", "u", "v", "closed",
                  "mc", "stderr", "grid", "pass");
    err << line;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        MCEstimate const e = simulate_exit(domain, pts[i], cfg);
        double const g = grid.interpolate(pts[i]);
        double const mc_diff = std::abs(e.mean - closed[i]);
        double const grid_diff = std::abs(g - closed[i]);
        bool const mc_ok = e.censored_fraction == 0.0 && mc_diff <= 4.0 * e.std_error;
        bool const grid_ok = grid_diff <= grid_tol;
        bool const pass = mc_ok && grid_ok;
        all_pass = all_pass && pass;

        json row;
        row["u"] = num9(pts[i].u);
        row["v"] = num9(pts[i].v);
        row["closed_form"] = num9(closed[i]);
        row["mc"] = estimate_json(e);
        row["grid"] = num9(g);
        row["mc_discrepancy"] = num9(mc_diff);
        row["grid_discrepancy"] = num9(grid_diff);
        row["mc_pass"] = mc_ok;
        row["grid_pass"] = grid_ok;
        row["pass"] = pass;
        rows.push_back(row);

        std::snprintf(line, sizeof line, "%12.6g %12.6g %12.6g %12.6g %10.3g %12.6g %6s\n",
                      pts[i].u, pts[i].v, closed[i], e.mean, e.std_error, g,
                      pass ? "ok" : "FAIL");
        err << line;
    }
    report["points"] = rows;
    report["pass"] = all_pass;
    out << report.dump(2) << '\n';
    return all_pass ? exit_ok : exit_failed;
}

int cmd_rigidity(DomainSpec const& domain, std::ostream& out)
{
    if (!domain.finite_exit() || !domain.relatively_compact())
        throw UnsupportedDomainError("infinite/unbounded domain: torsional rigidity is undefined");
    out << fmt9(torsional_rigidity(domain)) << '\n';
    return exit_ok;
}

int cmd_domains_list(std::ostream& out)
{
    static constexpr char const* examples[] = {
        "ellipse:a=2,b=1,h=0,k=0",
        "parabola:p=1",
        "annulus:a=1,b=2",
        "sector:alpha=1.0471975512",
        "hyperbola-convex:a=2,b=1",
        "hyperbola-concave:a=2,b=1",
        "hdisk:R=1",
        "horodisk:R=1",
        "geodesic-nbhd:alpha=0.8",
        "geodesic-halfnbhd:alpha=0.8",
        "ideal-nbhd",
    };
    for (char const* ex : examples)
    {
        DomainSpec const d = parse_domain(ex);
        char line[160];
        std::snprintf(line, sizeof line, "%-20s %-30s %-17s %s\n",
                      std::string(kind_name(d.kind())).c_str(), ex,
                      std::string(to_string(d.native_chart())).c_str(),
                      d.relatively_compact() ? "bounded" : "unbounded");
        out << line;
    }
    return exit_ok;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Expected first exit times of planar Brownian motion", "exittime"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every command");

    std::string domain_text;
    std::string config_path;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--domain", domain_text, "Domain spec kind:key=value,...")->required();
        sub->add_option("--config", config_path, "JSON file supplying any flag");
    };

    auto* eval = app.add_subcommand("eval", "Evaluate the closed-form exit time");
    add_common(eval);
    PointArgs eval_pts;
    eval_pts.add_to(eval, true);
    std::optional<double> fam_c, fam_a, fam_b;
    std::vector<std::string> atoms;
    eval->add_option("--C", fam_c, "Family constant C (parabola, sector)");
    eval->add_option("--A", fam_a, "Family constant A (geodesic tube)");
    eval->add_option("--B", fam_b, "Family constant B (geodesic tube)");
    eval->add_option("--atom", atoms, "Poisson atom weight,t added on the half plane (repeatable)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo exit-time estimate as JSON");
    add_common(simulate);
    PointArgs sim_pts;
    sim_pts.add_to(simulate, false);
    McArgs sim_mc;
    sim_mc.add_to(simulate);

    auto* solve = app.add_subcommand("solve", "Finite-difference grid solve to CSV and JSON");
    add_common(solve);
    GridArgs solve_grid_args;
    solve_grid_args.add_to(solve);
    std::string out_path;
    solve->add_option("--out", out_path, "Output path prefix (.csv and .json are appended)")->required();
    PointArgs solve_pts;
    solve_pts.add_to(solve, true);

    auto* validate = app.add_subcommand("validate", "Closed form against both oracles");
    add_common(validate);
    PointArgs val_pts;
    val_pts.add_to(validate, true);
    McArgs val_mc;
    val_mc.paths = 20000;
    val_mc.seed = 1;
    val_mc.add_to(validate);
    GridArgs val_grid;
    val_grid.add_to(validate);
    double grid_tol = 5e-3;
    validate->add_option("--grid-tol", grid_tol, "Grid agreement tolerance")->capture_default_str();

    auto* rigidity = app.add_subcommand("rigidity", "Torsional rigidity 4 * integral of the exit time");
    add_common(rigidity);

    auto* domains = app.add_subcommand("domains", "Domain catalog");
    domains->require_subcommand(1);
    auto* domains_list = domains->add_subcommand("list", "List domain kinds");

    try
    {
        args = apply_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    }
    catch (CLI::CallForHelp const&)
    {
        auto* target = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        while (!target->get_subcommands().empty())
            target = target->get_subcommands().front();
        out << target->help();
        return exit_ok;
    }
    catch (CLI::CallForAllHelp const&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (CLI::ParseError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    }
    catch (UsageError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    }

    try
    {
        if (domains_list->parsed())
            return cmd_domains_list(out);

        DomainSpec const domain = parse_domain(domain_text);
        if (eval->parsed())
        {
            std::optional<FamilyConstants> family;
            if (!atoms.empty())
            {
                FamilyConstants k;
                k.c_inf = fam_c.value_or(0.0);
                for (auto const& a : atoms)
                {
                    auto [w, t] = parse_pair(a, "atom");
                    k.atoms.push_back({w, t});
                }
                return cmd_atoms(eval_pts.resolve(domain), k, out);
            }
            if (fam_c || fam_a || fam_b)
            {
                family = FamilyConstants{};
                family->c_inf = fam_c.value_or(0.0);
                family->a = fam_a.value_or(0.0);
                family->b = fam_b.value_or(0.0);
                family->validate();
            }
            return cmd_eval(domain, eval_pts.resolve(domain), family, out);
        }
        if (simulate->parsed())
            return cmd_simulate(domain, sim_pts.resolve(domain).front(), sim_mc.config(), out);
        if (solve->parsed())
        {
            std::vector<Point2> probes;
            if (!solve_pts.points.empty() || !solve_pts.points_file.empty())
                probes = solve_pts.resolve(domain);
            SolveOptions opts = solve_grid_args.options();
            if (!probes.empty())
                opts.anchor = probes.front();
            return cmd_solve(domain, opts, out_path, probes, out);
        }
        if (validate->parsed())
        {
            return cmd_validate(domain, val_pts.resolve(domain), val_mc.config(), val_grid.options(),
                                grid_tol, out, err);
        }
        if (rigidity->parsed())
            return cmd_rigidity(domain, out);
    }
    catch (ParseError const& e)
    {
        err << "error: invalid domain spec, key '" << e.key() << "': " << e.what() << '\n';
        return exit_parse;
    }
    catch (UsageError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    }
    catch (ParameterError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    }
    catch (OutsideDomainError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_outside;
    }
    catch (ChartError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_outside;
    }
    catch (TruncationRequiredError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_truncation;
    }
    catch (UnsupportedDomainError const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_unsupported;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_failed;
    }
    return exit_failed;
}

}  // namespace exittime::cli
