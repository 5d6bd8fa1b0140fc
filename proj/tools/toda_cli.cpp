#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "toda/commands.hpp"

using namespace toda;

int main(int argc, char** argv)
{
    CLI::App app{"Rank-2 Toda systems: representations, identities, solution generation and verification"};
    app.require_subcommand(1, 1);

    std::string config_path, out;
    std::optional<std::uint64_t> seed;
    std::optional<int> stencil, grid;
    std::optional<double> tol;
    std::vector<std::string> sets;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "base seed");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--stencil", stencil, "finite-difference order (2 or 4)");
        sub->add_option("--grid", grid, "finest grid nodes per side");
        sub->add_option("--tol", tol, "integrator tolerance");
        sub->add_option("--set", sets, "extra key=value assignment (repeatable)");
    };
    for (const char* name : {"reps", "identities", "solve-verify", "report"})
        add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        cfg.command = app.get_subcommands().front()->get_name();
        for (const auto& s : sets) {
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + s + "'");
            set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        if (seed)
            cfg.seed = *seed;
        if (!out.empty())
            cfg.out = out;
        if (stencil)
            cfg.stencil = *stencil;
        if (grid)
            cfg.grid = *grid;
        if (tol)
            cfg.tol = *tol;
        return run_command(cfg, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailed;
    }
}
