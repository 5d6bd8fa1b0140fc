#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
    std::string cmd = std::string(TODA_CLI) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out_dir(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("toda_test_cli_" + name);
    fs::remove_all(p);
    return p.string();
}

} // namespace

TEST_CASE("exit codes")
{
    CHECK(run("reps --out " + out_dir("reps")) == 0);
    CHECK(run("") == 2);
    CHECK(run("fly") == 2);
    CHECK(run("reps --stencil four") == 2);
    CHECK(run("reps --set nonsense=1 --out " + out_dir("bad")) == 2);
    CHECK(run("reps --set p=7 --out " + out_dir("bad")) == 2);
    CHECK(run("reps --config /nonexistent/file.cfg") == 2);
    CHECK(run("solve-verify --set case=A2_10 --grid 17 --set levels=1 --set threshold=1e-30 --out " + out_dir("sv")) == 1);
}

TEST_CASE("config file and overrides")
{
    auto dir = out_dir("cfg");
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir + "/run.cfg");
        cfg << "case = B2_01\ngrid = 33\n";
    }
    CHECK(run("solve-verify --config " + dir + "/run.cfg --seed 2 --out " + dir + "/o") == 0);
    CHECK(fs::exists(dir + "/o/report_B2_01.json"));
    {
        std::ofstream cfg(dir + "/bad.cfg");
        cfg << "case = B2_01\nspeed = 3\n";
    }
    CHECK(run("solve-verify --config " + dir + "/bad.cfg --out " + dir + "/o") == 2);
}
