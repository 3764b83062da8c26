#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boutroux/errors.hpp"
#include "boutroux/io.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace boutroux;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string full_run(const RunConfig& cfg, std::string* svg = nullptr) {
    const DescentReport r = run(cfg.spec, cfg.seed, cfg.descent_options());
    const TrajectoryGraph g = build_graph(r.final_state);
    if (svg) *svg = render_svg(g, r.final_state);
    return result_json(cfg, r, &g);
}

}  // namespace

TEST_CASE("points grammar") {
    auto p = parse_points("-1,1");
    REQUIRE(p.size() == 2);
    CHECK(p[0] == cplx(-1.0));
    CHECK(p[1] == cplx(1.0));
    p = parse_points("0,\xE2\x88\x92" "1;0,1");
    REQUIRE(p.size() == 2);
    CHECK(p[0] == cplx(0, -1));
    CHECK(p[1] == cplx(0, 1));
    p = parse_points("-1+1i, -1-1i, 0.4+0.2i, 2-1i, 1+1i, i, -0.5i, 1e-3+2e+1i");
    REQUIRE(p.size() == 8);
    CHECK(p[3] == cplx(2, -1));
    CHECK(p[5] == cplx(0, 1));
    CHECK(p[6] == cplx(0, -0.5));
    CHECK(p[7] == cplx(1e-3, 20.0));
    CHECK_THROWS_AS(parse_points("1,2,3;4,5"), ConfigError);
    CHECK_THROWS_AS(parse_points("abc"), ConfigError);
}

TEST_CASE("phi grammar") {
    const auto phi = parse_phi("[0,\xE2\x88\x92" "1];[0,0];[1,0]");
    REQUIRE(phi.size() == 3);
    CHECK(phi[0] == cplx(0, -1));
    CHECK(phi[2] == cplx(1, 0));
    CHECK(parse_phi("").empty());
    CHECK_THROWS_AS(parse_phi("0,1"), ConfigError);
}

TEST_CASE("parse_config from flags") {
    ConfigOverrides o;
    o.points = "-1,1";
    o.t0 = 1.0;
    o.L = 0;
    RunConfig c = parse_config(std::nullopt, o);
    CHECK(c.spec.R() == 0);
    CHECK(c.spec.M() == 0);
    CHECK(c.spec.genus() == 0);

    ConfigOverrides f4;
    f4.points = "0,-1;0,1";
    f4.phi = "[0,-1];[0,0];[1,0]";
    f4.t0 = 0.0;
    f4.L = 1;
    c = parse_config(std::nullopt, f4);
    CHECK(c.spec.R() == 3);
    CHECK(c.spec.M() == 4);
    CHECK(c.spec.genus() == 2);

    ConfigOverrides bad;
    bad.points = "0,-1;0,1;1,0";
    bad.L = 1;
    try {
        parse_config(std::nullopt, bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("largest admissible L is 0") != std::string::npos);
    }
    ConfigOverrides dup;
    dup.points = "1,1";
    CHECK_THROWS_AS(parse_config(std::nullopt, dup), ConfigError);
    ConfigOverrides neg;
    neg.points = "-1,1";
    neg.tol = -1.0;
    CHECK_THROWS_AS(parse_config(std::nullopt, neg), ConfigError);
}

TEST_CASE("config file and overrides") {
    const auto dir = std::filesystem::temp_directory_path() / "boutroux_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "cfg.json").string();
    {
        std::ofstream f(path);
        f << R"({"points": [[0,-1],[0,1],[1,0]], "phi": [[1,0]], "t0": 0, "L": 0, "seed": 4, "max_iter": 500})";
    }
    ConfigOverrides o;
    o.seed = 9;
    const RunConfig c = parse_config(path, o);
    CHECK(c.spec.N() == 3);
    CHECK(c.spec.R() == 1);
    CHECK(c.seed == 9);
    CHECK(c.max_iter == 500);

    {
        std::ofstream f(path);
        f << R"({"points": [[0,-1],[0,1]], "colour": "blue"})";
    }
    CHECK_THROWS_AS(parse_config(path, {}), ConfigError);
    CHECK_THROWS_AS(parse_config((dir / "missing.json").string(), {}), IoError);
    CHECK_THROWS_AS(write_text_file((dir / "no_such_dir" / "x.json").string(), "{}"), IoError);
}

TEST_CASE("result JSON layout") {
    ConfigOverrides o;
    o.points = "0,-1;0,1;1,0";
    o.phi = "[1,0]";
    o.t0 = 0.0;
    const RunConfig cfg = parse_config(std::nullopt, o);
    const auto doc = nlohmann::json::parse(full_run(cfg));
    CHECK(doc["schema"] == 1);
    CHECK(doc["status"] == "Converged");
    CHECK(doc["F"].get<double>() < 1e-10);
    CHECK(doc["Delta"]["coefficients"].size() == 4);
    CHECK(doc["Delta"]["coefficients"][3][0] == 1.0);  // ascending, monic
    CHECK(doc["Delta"]["roots"].size() == 3);
    CHECK(doc["T"].size() == 2);
    CHECK(doc["P"].size() == 4);
    CHECK(doc["F_log"].size() == doc["iterations"].get<std::size_t>() + 1);
    CHECK(doc["graph"]["launched"] == 12);
}

TEST_CASE("deterministic output and round trip") {
    ConfigOverrides o;
    o.points = "-1+1i,-1-1i,0.4+0.2i,2-1i,1+1i";
    o.seed = 3;
    const RunConfig cfg = parse_config(std::nullopt, o);
    std::string svg1, svg2, svg3;
    const std::string a = full_run(cfg, &svg1);
    const std::string b = full_run(cfg, &svg2);
    CHECK(a == b);
    CHECK(svg1 == svg2);

    // the echo inside the result reproduces the run
    RunConfig back = config_from_json_text(a);
    back.s_roots.clear();
    back.delta_roots.clear();
    back.validate();
    const std::string c = full_run(back, &svg3);
    CHECK(c == a);
    CHECK(svg3 == svg1);
}

TEST_CASE("svg conventions") {
    const auto st = DifferentialState::from_roots(fixtures::two_point(), {}, {});
    const std::string svg = render_svg(build_graph(st), st);
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (std::size_t p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
        return n;
    };
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("version=\"1.1\"") != std::string::npos);
    CHECK(count("<path d=") == 1);
    CHECK(count("stroke=\"green\"") == 1);
    CHECK(count("fill=\"red\"") == 2);
    CHECK(count("fill=\"black\"") == 0);
}

TEST_CASE("multi-seed agreement table") {
    DescentOptions o;
    o.f_exit = 1e-14;
    const MultiSeedResult ms = run_seeds(fixtures::cube_roots(), 1, 3, o);
    REQUIRE(ms.runs.size() == 3);
    CHECK(ms.best >= 0);
    for (const auto& row : ms.agreement)
        for (double d : row) CHECK(d < 1e-5);
    CHECK(root_set_distance({1.0, 2.0}, {2.0, 1.0}) == 0.0);
    CHECK(std::isinf(root_set_distance({1.0}, {})));
}
