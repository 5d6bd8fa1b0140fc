#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "toda/commands.hpp"

using namespace toda;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("toda_test_config_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("parse_config")
{
    auto c = parse_config("# comment\ncommand = identities\np = 3 # G2\nseed = 7\nrect = 0, 2, -1, 1\n\ncoef.cb1 = poly:0.1,0.2\n");
    CHECK(c.command == "identities");
    CHECK(c.p == 3);
    CHECK(c.seed == 7);
    CHECK(c.rect == std::array<double, 4>{0, 2, -1, 1});
    CHECK(c.coef.at("cb1") == "poly:0.1,0.2");

    auto d = parse_config("case = G2(1,0)\n");
    CHECK(d.case_id() == Case::G2_10);
    CHECK(parse_config("case = B2_01").grading == std::array<int, 2>{0, 1});

    try {
        parse_config("p = 1\n\nfrobnicate = 3\n");
        FAIL("unknown key accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("p"), ConfigError);
    CHECK_THROWS_AS(parse_config("p = two"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed = -1"), ConfigError);
    CHECK_THROWS_AS(parse_config("g2_line_checks = maybe"), ConfigError);
    CHECK_THROWS_AS(parse_config("command = fly"), ConfigError);
    CHECK_THROWS_AS(parse_config("grading = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("case = E8"), ConfigError);
}

TEST_CASE("round trip and manifest")
{
    auto c = parse_config("case = G2_10\nseed = 42\ntol = 1e-11\ncoef.c^1_1 = trig:0.1,0.2,3,0.5\ngauge_c3_2_zero = false\n");
    auto text = to_config_text(c);
    auto d = parse_config(text);
    CHECK(to_config_text(d) == text);
    CHECK(d.tol == c.tol);
    CHECK(d.coef == c.coef);

    auto j = nlohmann::json::parse(manifest_json(c));
    CHECK(j["seed"] == 42);
    CHECK(j["rng"] == "std::mt19937_64");
    CHECK(j["case"] == "G2_10");
    CHECK(j["coefficients"]["c^1_1"] == "trig:0.1,0.2,3,0.5");
    CHECK(j["grid"]["ladder"] == std::vector<int>{17, 33, 65});
    CHECK(j["tolerances"]["integrator"] == 1e-11);
}

TEST_CASE("validate")
{
    RunConfig c;
    CHECK_NOTHROW(validate(c));
    CHECK(c.ladder() == std::vector<int>{17, 33, 65});
    c.stencil = 3;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.grid = 64;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.grid = 9;
    c.levels = 3;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.p = 4;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.p = 2;
    c.grading = {1, 1};
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.rect = {1, 0, 0, 1};
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = RunConfig{};
    c.coef["d1"] = "poly:1";
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.coef = {{"c1", "poly:"}};
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("coefficient overrides")
{
    auto c = parse_config("case = B2_10\ncoefficients = zero\ncoef.c^2 = poly:0.5\n");
    auto s = c.coefficient_set();
    CHECK(s.at("c^2").value(0.3) == 0.5);
    CHECK(s.at("c1").is_zero());
    auto seeded = parse_config("case = B2_10\nseed = 3\n").coefficient_set();
    CHECK(seeded.at("c1").describe() == random_polynomial_coefficients(Case::B2_10, 3).at("c1").describe());
}

TEST_CASE("reps output is reproducible")
{
    for (int p : {1, 2, 3}) {
        RunConfig c;
        c.command = "reps";
        c.p = p;
        auto a = scratch("reps_a"), b = scratch("reps_b");
        std::ostringstream log;
        c.out = a.string();
        CHECK(run_command(c, log) == kExitOk);
        c.out = b.string();
        CHECK(run_command(c, log) == kExitOk);
        for (const auto& name : {fmt::format("rep_p{}_j1.txt", p), fmt::format("rep_p{}_j2.txt", p),
                                 fmt::format("relations_p{}.csv", p)}) {
            auto x = slurp(a / name);
            CHECK_FALSE(x.empty());
            CHECK(x == slurp(b / name));
        }
        CHECK(fs::exists(a / "manifest.json"));
        CHECK(fs::exists(a / "manifest.cfg"));
        // the manifest configuration replays the run
        auto replay = load_config((a / "manifest.cfg").string());
        CHECK(to_config_text(replay) == slurp(a / "manifest.cfg"));
    }
}

TEST_CASE("identities output is reproducible")
{
    RunConfig c;
    c.command = "identities";
    c.p = 3;
    c.seeds = 3;
    c.word_length = 4;
    auto a = scratch("id_a"), b = scratch("id_b");
    std::ostringstream log;
    c.out = a.string();
    CHECK(run_command(c, log) == kExitOk);
    c.out = b.string();
    CHECK(run_command(c, log) == kExitOk);
    auto x = slurp(a / "identities_p3.csv");
    CHECK(x.rfind("seed,check,residual,status\n", 0) == 0);
    CHECK(x == slurp(b / "identities_p3.csv"));
    CHECK(x.find("FAIL") == std::string::npos);
}

TEST_CASE("solve-verify outputs and exit codes")
{
    RunConfig c;
    c.command = "solve-verify";
    c.set_case(Case::B2_10);
    c.grid = 33;
    c.levels = 3;
    c.out = scratch("sv").string();
    std::ostringstream log;
    CHECK(run_command(c, log) == kExitOk);
    fs::path out = c.out;
    for (const char* f : {"field_B2_10.csv", "report_B2_10.json", "summary_B2_10.csv", "manifest.json"})
        CHECK(fs::exists(out / f));
    auto rep = nlohmann::json::parse(slurp(out / "report_B2_10.json"));
    CHECK(rep["case"] == "B2_10");
    CHECK(rep["spacings"].size() == 3);

    // a single level is judged on the threshold alone
    c.levels = 1;
    c.threshold = 1e-20;
    CHECK(run_command(c, log) == kExitVerificationFailed);

    c = RunConfig{};
    c.stencil = 5;
    c.out = scratch("sv_bad").string();
    CHECK_THROWS_AS(run_command(c, log), ConfigError);
}
