#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace exittime;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int const code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(std::string const& name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("eval")
{
    CHECK(run({"eval", "--domain", "ellipse:a=2,b=1", "--point", "0,0"}).out == "0 0 0.4\n");
    CHECK(run({"eval", "--domain", "ideal-nbhd", "--point", "1,0.7853981634"}).out
          == "1 0.785398163 inf\n");
    CHECK(run({"eval", "--domain", "sector:alpha=1.0471975512", "--point", "1,0"}).out == "1 0 0.25\n");
    CHECK(run({"eval", "--domain", "horodisk:R=1", "--point", "0,0", "--chart", "unit-disk"}).out
          == "0 0 0\n");
    auto const two = run({"eval", "--domain", "ellipse:a=2,b=1", "--point", "0,0", "--point", "1,0.5"});
    CHECK(two.out == "0 0 0.4\n1 0.5 0.2\n");
    CHECK(run({"eval", "--domain", "parabola:p=1", "--point", "2,0", "--C", "0"}).out == "2 0 4\n");
    CHECK(run({"eval", "--domain", "geodesic-nbhd:alpha=0.7853981633974483", "--point", "1,0", "--A",
               "2", "--B", "3"})
              .out
          == "1 0 5.34657359\n");
}

TEST_CASE("exit codes")
{
    auto const bad = run({"eval", "--domain", "ellipse:a=2,c=1", "--point", "0,0"});
    CHECK(bad.code == cli::exit_parse);
    CHECK(bad.err.find("'b'") != std::string::npos);
    auto const extra = run({"eval", "--domain", "ellipse:a=2,b=1,c=1", "--point", "0,0"});
    CHECK(extra.code == cli::exit_parse);
    CHECK(extra.err.find("'c'") != std::string::npos);
    CHECK(run({"eval", "--domain", "ellipse:a=2,b=1", "--point", "zz"}).code == cli::exit_parse);
    auto const unknown = run({"eval", "--domain", "ellipse:a=2,b=1", "--point", "0,0", "--frob"});
    CHECK(unknown.code == cli::exit_parse);
    CHECK(unknown.err.find("--frob") != std::string::npos);
    CHECK(run({"eval", "--domain", "ellipse:a=2,b=1", "--point", "3,0"}).code == cli::exit_outside);
    CHECK(run({"eval", "--domain", "horodisk:R=1", "--point", "-1,0"}).code == cli::exit_outside);
    CHECK(run({"solve", "--domain", "parabola:p=1", "--out", temp_path("exittime_x")}).code
          == cli::exit_truncation);
    auto const rig = run({"rigidity", "--domain", "horodisk:R=1"});
    CHECK(rig.code == cli::exit_unsupported);
    CHECK(rig.err.find("infinite/unbounded domain") != std::string::npos);
    CHECK(run({"validate", "--domain", "ideal-nbhd", "--point", "1,0.5"}).code == cli::exit_unsupported);
    CHECK(run({"eval", "--domain", "ellipse:a=1,b=1", "--point", "0,0", "--C", "1"}).code
          == cli::exit_unsupported);
    CHECK(run({}).code == cli::exit_parse);
}

TEST_CASE("help lists every flag")
{
    auto const h = run({"simulate", "--help"});
    CHECK(h.code == 0);
    for (char const* flag : {"--domain", "--point", "--chart", "--paths", "--dt", "--seed", "--t-max",
                             "--method", "--wos-eps", "--threads", "--config"})
        CHECK(h.out.find(flag) != std::string::npos);
    auto const s = run({"solve", "--help"});
    for (char const* flag : {"--h", "--bbox", "--truncation", "--out", "--omega", "--tol"})
        CHECK(s.out.find(flag) != std::string::npos);
    CHECK(run({"--help"}).out.find("validate") != std::string::npos);
    CHECK(run({"domains", "list"}).out.find("geodesic-halfnbhd") != std::string::npos);
}

TEST_CASE("simulate JSON is deterministic")
{
    std::vector<std::string> args = {"simulate", "--domain", "ellipse:a=1,b=1", "--point", "0,0",
                                     "--paths", "5000", "--seed", "1"};
    auto const a = run(args);
    auto const b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto const j = nlohmann::json::parse(a.out);
    for (char const* key : {"mean", "stderr", "n", "censored_fraction", "seed"})
        CHECK(j.contains(key));
    CHECK(j["n"] == 5000);
    CHECK(std::abs(j["mean"].get<double>() - 0.25) <= 4 * j["stderr"].get<double>());

    args.insert(args.end(), {"--threads", "3"});
    CHECK(run(args).out == a.out);

    auto const c1 = run({"simulate", "--domain", "sector:alpha=1.5707963267948966", "--point", "1,0",
                         "--paths", "500", "--dt", "1e-2", "--t-max", "1"});
    auto const c10 = run({"simulate", "--domain", "sector:alpha=1.5707963267948966", "--point", "1,0",
                          "--paths", "500", "--dt", "1e-2", "--t-max", "10"});
    auto const j1 = nlohmann::json::parse(c1.out);
    auto const j10 = nlohmann::json::parse(c10.out);
    CHECK(j1["censored_fraction"].get<double>() > 0);
    CHECK(j10["censored_fraction"].get<double>() > 0);
    CHECK(j10["mean"].get<double>() > j1["mean"].get<double>());
    CHECK(run({"simulate", "--domain", "ellipse:a=1,b=1", "--point", "0,0", "--dt", "0.5"}).code
          == cli::exit_parse);
}

TEST_CASE("config file supplies flags and explicit flags win")
{
    std::string const cfg = temp_path("exittime_cfg.json");
    {
        std::ofstream f(cfg);
        f << R"({"domain": "ellipse:a=2,b=1", "point": ["0,0", "1,0.5"]})";
    }
    CHECK(run({"eval", "--config", cfg}).out == "0 0 0.4\n1 0.5 0.2\n");
    CHECK(run({"eval", "--config", cfg, "--domain", "ellipse:a=3,b=1"}).out == "0 0 0.45\n1 0.5 0.2875\n");
    {
        std::ofstream f(cfg);
        f << R"({"domain": "ellipse:a=1,b=1", "point": "0,0", "paths": 2000, "seed": 9})";
    }
    auto const a = run({"simulate", "--config", cfg});
    auto const b = run({"simulate", "--domain", "ellipse:a=1,b=1", "--point", "0,0", "--paths",
                        "2000", "--seed", "9"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    {
        std::ofstream f(cfg);
        f << R"({"domain": "ellipse:a=1,b=1", "point": "0,0", "bogus": 1})";
    }
    CHECK(run({"simulate", "--config", cfg}).code == cli::exit_parse);
    CHECK(run({"eval", "--config", temp_path("exittime_missing.json")}).code == cli::exit_parse);
    std::filesystem::remove(cfg);
}

TEST_CASE("points file")
{
    std::string const pts = temp_path("exittime_pts.txt");
    {
        std::ofstream f(pts);
        f << "# probe points\n0,0\n\n1, 0.5  # second\n";
    }
    CHECK(run({"eval", "--domain", "ellipse:a=2,b=1", "--points-file", pts}).out == "0 0 0.4\n1 0.5 0.2\n");
    {
        std::ofstream f(pts);
        f << "0,0\nnope\n";
    }
    auto const bad = run({"eval", "--domain", "ellipse:a=2,b=1", "--points-file", pts});
    CHECK(bad.code == cli::exit_parse);
    CHECK(bad.err.find("line 2") != std::string::npos);
    std::filesystem::remove(pts);
}

TEST_CASE("solve writes csv and sidecar")
{
    std::string const out = temp_path("exittime_solve");
    auto const r = run({"solve", "--domain", "ellipse:a=2,b=1", "--h", "0.05", "--out", out, "--point", "0,0"});
    REQUIRE(r.code == 0);
    auto const j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["probes"][0]["value"].get<double>() - 0.4) < 1e-4);
    CHECK(std::filesystem::exists(out + ".csv"));
    std::ifstream side(out + ".json");
    auto const s = nlohmann::json::parse(side);
    CHECK(s["domain"] == "ellipse:a=2,b=1,h=0,k=0");
    std::filesystem::remove(out + ".csv");
    std::filesystem::remove(out + ".json");

    auto const horo = run({"solve", "--domain", "horodisk:R=1", "--h", "0.05", "--truncation",
                           "box:1,8,-4,4", "--out", out, "--point", "2.718281828,0"});
    REQUIRE(horo.code == 0);
    double const v = nlohmann::json::parse(horo.out)["probes"][0]["value"].get<double>();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    std::filesystem::remove(out + ".csv");
    std::filesystem::remove(out + ".json");
}

TEST_CASE("validate and rigidity")
{
    auto const ok = run({"validate", "--domain", "ellipse:a=2,b=1", "--point", "0,0", "--point",
                         "1,0.3", "--h", "0.02"});
    CHECK(ok.code == 0);
    auto const rep = nlohmann::json::parse(ok.out);
    CHECK(rep["pass"] == true);
    CHECK(rep["points"].size() == 2);
    CHECK(ok.err.find("closed") != std::string::npos);

    auto const tiny = run({"validate", "--domain", "ellipse:a=2,b=1", "--point", "0,0", "--paths",
                           "100", "--h", "0.05"});
    CHECK((tiny.code == 0 || tiny.code == cli::exit_failed));
    CHECK(nlohmann::json::parse(tiny.out)["points"][0].contains("pass"));

    CHECK(run({"validate", "--domain", "parabola:p=1", "--point", "1,0"}).code == cli::exit_truncation);

    CHECK(run({"rigidity", "--domain", "ellipse:a=1,b=1"}).out == "1.57079633\n");
    CHECK(run({"rigidity", "--domain", "ellipse:a=2,b=1"}).out == "5.02654825\n");
}
