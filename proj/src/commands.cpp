#include "toda/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"
#include "toda/identities.hpp"

namespace toda {

namespace fs = std::filesystem;

namespace {

fs::path prepare_out(const RunConfig& cfg)
{
    fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw ConfigError("cannot create output directory '" + cfg.out + "'");
    return dir;
}

void write_file(const fs::path& p, const std::string& content)
{
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + p.string() + "'");
    out << content;
    if (!out)
        throw ConfigError("write failed for '" + p.string() + "'");
}

void write_manifest(const fs::path& dir, const RunConfig& cfg)
{
    write_file(dir / "manifest.json", manifest_json(cfg) + "\n");
    write_file(dir / "manifest.cfg", to_config_text(cfg));
}

nlohmann::ordered_json number(double v)
{
    if (std::isfinite(v))
        return v;
    return nullptr;
}

} // namespace

int cmd_reps(const RunConfig& cfg, std::ostream& log)
{
    auto dir = prepare_out(cfg);
    write_manifest(dir, cfg);
    auto cd = cartan_matrix(cfg.p);
    bool ok = true;
    std::string csv = "p,j,dim,relation,zero\n";
    for (int j = 1; j <= 2; ++j) {
        auto r = build_fundamental_rep(cd, j);
        auto name = fmt::format("rep_p{}_j{}.txt", cfg.p, j);
        write_file(dir / name, dump_string(r));
        auto rel = verify_defining_relations(r);
        for (const auto& x : rel.relations)
            csv += fmt::format("{},{},{},{},{}\n", cfg.p, j, r.dim, x.name, x.residual.is_zero() ? 1 : 0);
        ok = ok && rel.all_zero();
        fmt::print(log, "p={} j={}: dim {}, {} relations {}\n", cfg.p, j, r.dim, rel.relations.size(),
                   rel.all_zero() ? "exact" : "VIOLATED");
    }
    write_file(dir / fmt::format("relations_p{}.csv", cfg.p), csv);
    return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_identities(const RunConfig& cfg, std::ostream& log)
{
    auto dir = prepare_out(cfg);
    write_manifest(dir, cfg);
    auto a = make_algebra(cfg.p);
    std::vector<Case> det3_cases;
    for (Case c : all_cases())
        if (case_info(c).p == cfg.p && c != Case::G2_01)
            det3_cases.push_back(c);

    std::string csv = "seed,check,residual,status\n";
    int used = 0, failures = 0, singular = 0;
    auto row = [&](std::uint64_t seed, const std::string& check, const Rational& v) {
        bool zero = v == 0;
        failures += zero ? 0 : 1;
        csv += fmt::format("{},{},{},{}\n", seed, check, to_fraction(v), zero ? "ok" : "FAIL");
    };
    for (std::uint64_t seed = cfg.seed; used < cfg.seeds; ++seed) {
        auto G = sample_group_pair(a, seed, cfg.word_length);
        if (matrix_element(*G(1).rep, {}, G(1).M, {}) == 0 || matrix_element(*G(2).rep, {}, G(2).M, {}) == 0) {
            csv += fmt::format("{},sample,,singular\n", seed);
            ++singular;
            continue;
        }
        ++used;
        for (int j = 1; j <= 2; ++j)
            row(seed, fmt::format("first_jacobi_j{}", j), check_first_jacobi(G, j));
        auto s = check_second_jacobi(G);
        row(seed, "second_jacobi_bar", s[0]);
        row(seed, "second_jacobi", s[1]);
        for (Case c : det3_cases)
            row(seed, "generalized_jacobi_" + case_info(c).key, check_generalized_jacobi(G, c));
        for (const auto& r : check_appendix1(G))
            row(seed, "derivative " + r.name, r.value);
        if (cfg.p == 3 && cfg.g2_line_checks)
            for (const auto& r : check_appendix2(G, sample_g2_constants(seed)))
                row(seed, "g2_lines " + r.name, r.value);
    }
    write_file(dir / fmt::format("identities_p{}.csv", cfg.p), csv);
    fmt::print(log, "p={}: {} group elements ({} singular draws skipped), {} nonzero residuals\n", cfg.p, used, singular,
               failures);
    return failures == 0 ? kExitOk : kExitVerificationFailed;
}

std::string report_json(const ConvergenceReport& r)
{
    nlohmann::ordered_json j;
    j["case"] = case_info(r.id).key;
    j["stencil"] = r.stencil;
    j["spacings"] = r.spacings;
    nlohmann::ordered_json eqs = nlohmann::ordered_json::array();
    for (const auto& e : r.equations) {
        nlohmann::ordered_json x;
        x["name"] = e.name;
        x["diagnostic"] = e.diagnostic;
        nlohmann::ordered_json res = nlohmann::ordered_json::array();
        for (double v : e.residuals)
            res.push_back(number(v));
        x["residuals"] = res;
        if (e.saturated)
            x["order"] = "saturated";
        else if (e.order)
            x["order"] = number(*e.order);
        else
            x["order"] = nullptr;
        eqs.push_back(x);
    }
    j["equations"] = eqs;
    nlohmann::ordered_json ex = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < r.reports.size(); ++k) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (auto [i, jj] : r.reports[k].excluded)
            nodes.push_back({i, jj});
        ex.push_back({{"spacing", r.spacings[k]}, {"nodes", nodes}});
    }
    j["excluded_nodes"] = ex;
    return j.dump(2);
}

std::string summary_csv(const ConvergenceReport& r, double threshold)
{
    double worst = 0, min_order = INFINITY;
    for (const auto& e : r.equations) {
        if (e.diagnostic)
            continue;
        worst = std::max(worst, e.residuals.back());
        if (e.order)
            min_order = std::min(min_order, *e.order);
    }
    std::string order = std::isfinite(min_order) ? fmt::format("{:.3f}", min_order) : "saturated";
    return fmt::format("case,stencil,h_finest,max_residual,min_order,status\n{},{},{},{:.3e},{},{}\n",
                       case_info(r.id).key, r.stencil, r.spacings.back(), worst, order,
                       r.converging(threshold) ? "pass" : "fail");
}

int cmd_solve_verify(const RunConfig& cfg, std::ostream& log)
{
    validate(cfg);
    auto dir = prepare_out(cfg);
    write_manifest(dir, cfg);
    Case c = cfg.case_id();
    auto a = make_algebra(cfg.p);
    auto coeffs = cfg.coefficient_set();
    GenerateOptions opt;
    opt.tol = cfg.tol;
    opt.gauge_c3_2_zero = cfg.gauge_c3_2_zero;

    std::vector<Grid> grids;
    for (int n : cfg.ladder())
        grids.push_back(Grid{cfg.rect[0], cfg.rect[1], cfg.rect[2], cfg.rect[3], n, n});
    ConvergenceReport conv;
    SolutionField finest;
    try {
        conv = run_ladder(c, a, coeffs, grids, cfg.stencil, opt, &finest);
    } catch (const IntegrationFailure& e) {
        fmt::print(log, "integration failed at t = {}: {}\n", e.location, e.what());
        return kExitVerificationFailed;
    } catch (const SingularElement& e) {
        fmt::print(log, "{}\n", e.what());
        return kExitVerificationFailed;
    }
    {
        std::ofstream out(dir / fmt::format("field_{}.csv", case_info(c).key));
        if (!out)
            throw ConfigError("cannot write the field CSV");
        write_field_csv(out, finest);
    }
    const auto& reports = conv.reports;

    bool ok = false;
    if (reports.size() >= 3) {
        write_file(dir / fmt::format("report_{}.json", case_info(c).key), report_json(conv) + "\n");
        write_file(dir / fmt::format("summary_{}.csv", case_info(c).key), summary_csv(conv, cfg.threshold));
        ok = conv.converging(cfg.threshold);
        fmt::print(log, "{} stencil {} h = {}\n", case_info(c).name, conv.stencil, fmt::join(conv.spacings, ", "));
        if (!reports.back().excluded.empty())
            fmt::print(log, "  {} nodes excluded at the finest spacing (singular field or a singular node in the stencil)\n",
                       reports.back().excluded.size());
        for (const auto& e : conv.equations)
            fmt::print(log, "  {:<34} {:>10.3e}  order {}{}\n", e.name, e.residuals.back(),
                       e.saturated ? "saturated" : (e.order ? fmt::format("{:.2f}", *e.order) : "-"),
                       e.diagnostic ? "  (diagnostic)" : "");
    } else {
        // no order estimate without three spacings: threshold only
        const auto& r = reports.back();
        ok = r.max_residual() < cfg.threshold;
        nlohmann::ordered_json j;
        j["case"] = case_info(c).key;
        j["stencil"] = r.stencil;
        j["spacings"] = {std::max(r.hx, r.hy)};
        for (const auto& e : r.equations)
            j["residuals"][e.name] = number(e.value);
        write_file(dir / fmt::format("report_{}.json", case_info(c).key), j.dump(2) + "\n");
        for (const auto& e : r.equations)
            fmt::print(log, "  {:<34} {:>10.3e}{}\n", e.name, e.value, e.diagnostic ? "  (diagnostic)" : "");
    }
    fmt::print(log, "{}\n", ok ? "pass" : "FAIL");
    return ok ? kExitOk : kExitVerificationFailed;
}

std::string calibration_json(const std::vector<CalibrationFinding>& findings)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
        nlohmann::ordered_json x;
        x["question"] = f.question;
        x["chosen"] = f.chosen;
        x["stable"] = f.stable;
        x["seeds"] = f.seeds;
        nlohmann::ordered_json cand = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < f.candidates.size(); ++k) {
            nlohmann::ordered_json r = nlohmann::ordered_json::array();
            for (const auto& row : f.residuals)
                r.push_back(number(row[k]));
            cand.push_back({{"candidate", f.candidates[k]}, {"residuals", r}});
        }
        x["candidates"] = cand;
        arr.push_back(x);
    }
    return arr.dump(2);
}

int cmd_report(const RunConfig& cfg, std::ostream& log)
{
    validate(cfg);
    auto dir = prepare_out(cfg);
    write_manifest(dir, cfg);
    auto n = static_cast<std::size_t>(cfg.calibration_seeds);
    auto a2 = regular_seeds(Case::A2_10, n, cfg.seed, cfg.coef_scale);
    auto g2 = regular_seeds(Case::G2_01, n, cfg.seed, cfg.coef_scale);
    auto findings = run_calibration(a2, g2, cfg.grid, cfg.stencil, cfg.coef_scale);
    write_file(dir / "calibration.json", calibration_json(findings) + "\n");

    const std::string frozen_order =
        fmt::format("(P{},P{},P{},P{})", kG2Ordering[0], kG2Ordering[1], kG2Ordering[2], kG2Ordering[3]);
    const std::string frozen[] = {kA2Entry, frozen_order, kG2Layout};
    bool ok = true;
    for (std::size_t k = 0; k < findings.size(); ++k) {
        const auto& f = findings[k];
        bool agrees = f.chosen == frozen[k];
        ok = ok && f.stable && agrees;
        fmt::print(log, "{}: {} ({} over {} coefficient draws{})\n", f.question, f.chosen.empty() ? "undecided" : f.chosen,
                   f.stable ? "stable" : "NOT stable", f.seeds.size(), agrees ? "" : ", differs from the frozen constant");
    }
    return ok ? kExitOk : kExitVerificationFailed;
}

int run_command(const RunConfig& cfg, std::ostream& log)
{
    validate(cfg);
    if (cfg.command == "reps")
        return cmd_reps(cfg, log);
    if (cfg.command == "identities")
        return cmd_identities(cfg, log);
    if (cfg.command == "solve-verify")
        return cmd_solve_verify(cfg, log);
    if (cfg.command == "report")
        return cmd_report(cfg, log);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

} // namespace toda
