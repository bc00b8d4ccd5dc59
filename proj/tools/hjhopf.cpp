#include <array>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hjhopf/cli.hpp"
#include "hjhopf/problem.hpp"

namespace {

struct Sub {
    CLI::App* app = nullptr;
    std::array<std::string, 3> positional;
    std::size_t count = 0;
    std::map<std::string, std::string> options;  // "section.key" -> value
};

void positional(Sub& s, const std::vector<std::pair<const char*, const char*>>& names) {
    for (const auto& [name, help] : names) s.app->add_option(name, s.positional[s.count++], help)->required();
}

void keyed(Sub& s, const char* flag, const char* dotted, const char* help, bool required = false) {
    auto* opt = s.app->add_option_function<std::string>(
        flag, [&s, dotted](const std::string& v) { s.options[dotted] = v; }, help);
    if (required) opt->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hopf-formula analysis of u_t + H(t, Du) = 0 with convex initial data"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, problem, output, format, csv, seed;
    std::vector<std::string> overrides;
    bool strict = false;
    app.add_option("-c,--config", config_path, "config file ([section] key = value)");
    app.add_option("-p,--problem", problem, "catalog problem name");
    app.add_option("--set", overrides, "override a config value: section.key=value");
    app.add_option("-o,--output", output, "write the primary artifact here instead of stdout");
    app.add_option("-f,--format", format, "json or csv");
    app.add_option("--csv", csv, "also write the command's CSV table here");
    app.add_option("--seed", seed, "random seed for sampled checks");
    app.add_flag("--strict", strict, "exit with 4 when a verdict is inconclusive");

    std::map<std::string, Sub> subs;
    const auto sub = [&](const char* name, const char* help) -> Sub& {
        Sub& s = subs[name];
        s.app = app.add_subcommand(name, help);
        return s;
    };

    positional(sub("eval", "u, ell and verdict at one point"), {{"t", "time"}, {"x", "point, comma separated"}});
    {
        Sub& s = sub("grid", "u, cluster count and verdict over a rectangle");
        keyed(s, "--t-lo", "grid.t_lo", "first time");
        keyed(s, "--t-hi", "grid.t_hi", "last time");
        keyed(s, "--t-count", "grid.t_count", "number of times");
        keyed(s, "--x-box", "grid.x_box", "x box, e.g. [-3,3]");
        keyed(s, "--x-count", "grid.x_count", "points per axis");
    }
    {
        Sub& s = sub("char", "samples of a characteristic curve and its classical value");
        keyed(s, "--y", "char.y", "initial point", true);
        keyed(s, "--samples", "char.samples", "number of time samples");
    }
    positional(sub("lstar", "initial points of characteristics through (t,x)"), {{"t", "time"}, {"x", "point"}});
    positional(sub("theta", "type transition time along a characteristic"),
               {{"t", "time"}, {"x", "point"}, {"y0", "initial point"}});
    {
        Sub& s = sub("strip", "scan for the strip of differentiability");
        keyed(s, "--t-levels", "strip.t_levels", "number of time levels");
        keyed(s, "--x-grid", "strip.x_grid", "points per axis");
        keyed(s, "--x-box", "strip.x_box", "x box");
    }
    {
        Sub& s = sub("trace", "follow singular points forward in time");
        positional(s, {{"t", "time"}, {"x", "point"}});
        keyed(s, "--eps", "trace.eps", "ball radius per step", true);
        keyed(s, "--t-end", "trace.t_end", "final time (default T)");
    }
    {
        Sub& s = sub("verify", "property-suite summary");
        keyed(s, "--samples", "verify.samples", "number of random points");
        keyed(s, "--x-box", "verify.x_box", "x box");
    }
    positional(sub("conjugate", "sigma*(q) or the domain flag"), {{"q", "dual point"}});
    {
        Sub& s = sub("check-a1", "sampled check that maximizers stay inside the q-box");
        positional(s, {{"t", "time"}, {"x", "point"}});
        keyed(s, "--r", "check-a1.r", "ball radius", true);
        keyed(s, "--samples", "check-a1.samples", "number of samples");
    }
    app.footer("Catalog problems: paper-example, transport, zero, anti-burgers, lipschitz-sigma.\n"
               "Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 inconclusive with --strict.\n"
               "HJHOPF_WORKERS sets the worker count (default: all cores).");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return hjhopf::cli::kExitConfig;
    }

    hjhopf::cli::Invocation inv;
    try {
        if (!config_path.empty()) inv.config = hjhopf::cli::ConfigFile::load(config_path);
        if (!problem.empty()) inv.config.set("problem", "catalog", problem);
        for (const auto& o : overrides) inv.config.set_dotted(o);
        if (!output.empty()) inv.config.set("output", "path", output);
        if (!format.empty()) inv.config.set("output", "format", format);
        if (!csv.empty()) inv.config.set("output", "csv", csv);
        if (!seed.empty()) inv.config.set("run", "seed", seed);
        if (strict) inv.config.set("run", "strict", "true");
        for (auto& [name, s] : subs) {
            if (!s.app->parsed()) continue;
            inv.command = name;
            inv.args.assign(s.positional.begin(), s.positional.begin() + static_cast<long>(s.count));
            for (const auto& [dotted, v] : s.options) inv.config.set_dotted(dotted + "=" + v);
        }
    } catch (const hjhopf::ConfigError& e) {
        return hjhopf::cli::report_error(inv.command, "config", e.what(), hjhopf::cli::kExitConfig, std::cout,
                                         std::cerr);
    }
    return hjhopf::cli::run(inv, std::cout, std::cerr);
}
