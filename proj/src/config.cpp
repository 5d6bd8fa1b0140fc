#include "toda/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "json.hpp"

namespace toda {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(trim(item));
    return out;
}

long long to_int(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, v));
    return x;
}

double to_double(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
    return x;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, v));
}

} // namespace

Case RunConfig::case_id() const
{
    for (Case c : all_cases()) {
        const auto& info = case_info(c);
        if (info.p == p && info.c == grading)
            return c;
    }
    throw ConfigError(fmt::format("no graded system for p={} and grading ({},{})", p, grading[0], grading[1]));
}

void RunConfig::set_case(Case c)
{
    p = case_info(c).p;
    grading = case_info(c).c;
}

std::vector<int> RunConfig::ladder() const
{
    std::vector<int> n{grid};
    for (int k = 1; k < levels; ++k)
        n.push_back((n.back() - 1) / 2 + 1);
    std::reverse(n.begin(), n.end());
    return n;
}

CoefficientSet RunConfig::coefficient_set() const
{
    Case c = case_id();
    CoefficientSet s = coefficients == "zero" ? zero_coefficients(c) : random_polynomial_coefficients(c, seed, coef_scale);
    auto names = coefficient_slots(c, Side::Minus), bars = coefficient_slots(c, Side::Plus);
    for (const auto& [slot, desc] : coef) {
        if (std::find(names.begin(), names.end(), slot) == names.end() &&
            std::find(bars.begin(), bars.end(), slot) == bars.end())
            throw ConfigError(fmt::format("coef.{}: not a coefficient of {}", slot, case_info(c).name));
        try {
            s.f[slot] = CoefficientFunction::parse(desc);
        } catch (const InvalidParameter& e) {
            throw ConfigError(fmt::format("coef.{}: {}", slot, e.what()));
        }
    }
    return s;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& v)
{
    if (key == "command") {
        if (v != "reps" && v != "identities" && v != "solve-verify" && v != "report")
            throw ConfigError("command: expected reps, identities, solve-verify or report, got '" + v + "'");
        c.command = v;
    } else if (key == "p") {
        c.p = static_cast<int>(to_int(key, v));
    } else if (key == "grading") {
        auto parts = split(v, ',');
        if (parts.size() != 2)
            throw ConfigError("grading: expected two integers, got '" + v + "'");
        c.grading = {static_cast<int>(to_int(key, parts[0])), static_cast<int>(to_int(key, parts[1]))};
    } else if (key == "case") {
        try {
            c.set_case(parse_case(v));
        } catch (const InvalidParameter& e) {
            throw ConfigError(std::string("case: ") + e.what());
        }
    } else if (key == "seed") {
        auto s = to_int(key, v);
        if (s < 0)
            throw ConfigError("seed: must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "seeds") {
        c.seeds = static_cast<int>(to_int(key, v));
    } else if (key == "word_length") {
        c.word_length = static_cast<int>(to_int(key, v));
    } else if (key == "g2_line_checks") {
        c.g2_line_checks = to_bool(key, v);
    } else if (key == "coef_scale") {
        c.coef_scale = to_double(key, v);
    } else if (key == "coefficients") {
        if (v != "seeded" && v != "zero")
            throw ConfigError("coefficients: expected seeded or zero, got '" + v + "'");
        c.coefficients = v;
    } else if (key.rfind("coef.", 0) == 0 && key.size() > 5) {
        c.coef[key.substr(5)] = v;
    } else if (key == "gauge_c3_2_zero") {
        c.gauge_c3_2_zero = to_bool(key, v);
    } else if (key == "rect") {
        auto parts = split(v, ',');
        if (parts.size() != 4)
            throw ConfigError("rect: expected x0,x1,y0,y1, got '" + v + "'");
        for (int k = 0; k < 4; ++k)
            c.rect[static_cast<std::size_t>(k)] = to_double(key, parts[static_cast<std::size_t>(k)]);
    } else if (key == "grid") {
        c.grid = static_cast<int>(to_int(key, v));
    } else if (key == "levels") {
        c.levels = static_cast<int>(to_int(key, v));
    } else if (key == "tol") {
        c.tol = to_double(key, v);
    } else if (key == "stencil") {
        c.stencil = static_cast<int>(to_int(key, v));
    } else if (key == "threshold") {
        c.threshold = to_double(key, v);
    } else if (key == "calibration_seeds") {
        c.calibration_seeds = static_cast<int>(to_int(key, v));
    } else if (key == "out") {
        if (v.empty())
            throw ConfigError("out: empty path");
        c.out = v;
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

void validate(const RunConfig& c)
{
    if (c.p < 1 || c.p > 3)
        throw ConfigError(fmt::format("p must be 1, 2 or 3, got {}", c.p));
    if (c.command == "solve-verify") {
        c.case_id();
        c.coefficient_set();
    }
    if (c.seeds < 1)
        throw ConfigError("seeds must be positive");
    if (c.word_length < 0)
        throw ConfigError("word_length must be non-negative");
    if (c.stencil != 2 && c.stencil != 4)
        throw ConfigError(fmt::format("stencil must be 2 or 4, got {}", c.stencil));
    if (!(c.tol > 0))
        throw ConfigError("tol must be positive");
    if (!(c.threshold > 0))
        throw ConfigError("threshold must be positive");
    if (!(c.coef_scale >= 0))
        throw ConfigError("coef_scale must be non-negative");
    if (c.levels < 1)
        throw ConfigError("levels must be at least 1");
    if (c.calibration_seeds < 1)
        throw ConfigError("calibration_seeds must be positive");
    if (!(c.rect[0] < c.rect[1]) || !(c.rect[2] < c.rect[3]))
        throw ConfigError("rect must satisfy x0 < x1 and y0 < y1");
    int need = 2 * (c.stencil / 2) + 1;
    auto ladder = c.ladder();
    if (c.grid % 2 == 0 && c.levels > 1)
        throw ConfigError("grid must be odd so that the ladder halves the spacing exactly");
    for (std::size_t k = 1; k < ladder.size(); ++k)
        if (2 * (ladder[k - 1] - 1) != ladder[k] - 1)
            throw ConfigError(fmt::format("grid {} does not halve {} times", c.grid, c.levels - 1));
    if (ladder.front() < need + 2)
        throw ConfigError(fmt::format("coarsest grid ({} nodes) is too small for the stencil", ladder.front()));
}

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("line {}: expected key = value", lineno));
        try {
            set_config_value(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("line {}: {}", lineno, e.what()));
        }
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read configuration file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_config_text(const RunConfig& c)
{
    std::string s;
    auto kv = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    kv("command", c.command);
    kv("p", std::to_string(c.p));
    kv("grading", fmt::format("{},{}", c.grading[0], c.grading[1]));
    kv("seed", std::to_string(c.seed));
    kv("seeds", std::to_string(c.seeds));
    kv("word_length", std::to_string(c.word_length));
    kv("g2_line_checks", c.g2_line_checks ? "true" : "false");
    kv("coef_scale", fmt::format("{}", c.coef_scale));
    kv("coefficients", c.coefficients);
    for (const auto& [slot, desc] : c.coef)
        kv("coef." + slot, desc);
    kv("gauge_c3_2_zero", c.gauge_c3_2_zero ? "true" : "false");
    kv("rect", fmt::format("{}", fmt::join(c.rect, ",")));
    kv("grid", std::to_string(c.grid));
    kv("levels", std::to_string(c.levels));
    kv("tol", fmt::format("{}", c.tol));
    kv("stencil", std::to_string(c.stencil));
    kv("threshold", fmt::format("{}", c.threshold));
    kv("calibration_seeds", std::to_string(c.calibration_seeds));
    kv("out", c.out);
    return s;
}

std::string manifest_json(const RunConfig& c)
{
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["p"] = c.p;
    j["grading"] = c.grading;
    j["seed"] = c.seed;
    j["rng"] = "std::mt19937_64";
    j["seeds"] = c.seeds;
    j["word_length"] = c.word_length;
    j["g2_line_checks"] = c.g2_line_checks;
    j["tolerances"] = {{"integrator", c.tol}, {"threshold", c.threshold}};
    j["stencil"] = c.stencil;
    j["grid"] = {{"rect", c.rect}, {"finest_nodes", c.grid}, {"ladder", c.ladder()}};
    j["gauge_c3_2_zero"] = c.gauge_c3_2_zero;
    j["calibration_seeds"] = c.calibration_seeds;
    j["out"] = c.out;
    if (c.command == "solve-verify") {
        j["case"] = case_info(c.case_id()).key;
        j["coef_scale"] = c.coef_scale;
        j["coefficients_mode"] = c.coefficients;
        nlohmann::ordered_json co;
        auto set = c.coefficient_set();
        for (Side side : {Side::Minus, Side::Plus})
            for (const auto& n : coefficient_slots(set.id, side))
                co[n] = set.at(n).describe();
        j["coefficients"] = co;
    }
    j["config"] = to_config_text(c);
    return j.dump(2);
}

} // namespace toda
