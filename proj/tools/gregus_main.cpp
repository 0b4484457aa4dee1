#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gregus/registry.hpp"
#include "gregus/run.hpp"

namespace {

struct CliArgs {
    std::string command;
    std::string problem_path;
    std::string example_name;
    std::string example_action;
    std::string report_format = "text";
    gregus::RunOptions opts;
};

gregus::Point parse_point_arg(const std::string& s) {
    size_t comma = s.find(',');
    if (comma == std::string::npos) return gregus::Point(gregus::parse_real(s));
    return gregus::Point(gregus::parse_real(s.substr(0, comma)),
                         gregus::parse_real(s.substr(comma + 1)));
}

int run(const CliArgs& args) {
    gregus::Problem problem = args.command == "example"
                                  ? gregus::make_example(args.example_name)
                                  : gregus::parse_problem(args.problem_path);
    std::string action = args.command == "example" ? args.example_action : args.command;

    gregus::Report report = gregus::run_command(action, problem, args.opts);
    if (args.report_format == "json")
        std::cout << report.machine.dump(2) << "\n";
    else
        std::cout << report.text;
    return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checker for common-fixed-point hypotheses on starshaped domains"};
    app.require_subcommand(1);

    CliArgs args;
    std::string probe_str, u_str, schedule_str;
    double grid = 0, tol = 0;
    long pairs = 0;
    uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--grid", grid, "sampling grid pitch override");
        sub->add_option("--tol", tol, "tolerance override for this command's checks");
        sub->add_option("--pairs", pairs, "random pair count for the inequality sweep");
        sub->add_option("--seed", seed, "random seed (recorded in the report)");
        sub->add_option("--schedule", schedule_str, "harmonic or geometric:<r>");
        sub->add_flag("--force", args.opts.force, "skip the solver's hypothesis gate");
        sub->add_option("--report", args.report_format, "report format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--kind", args.opts.kind,
                        "affinity kind: affine, affine_wrt_point, q_affine");
        sub->add_option("--map", args.opts.map_names, "maps to check (A B S T)");
        sub->add_option("--probe", probe_str, "commutation probe point, e.g. 0.6 or 1,0");
        sub->add_option("--u", u_str, "reference point for invariant-approx");
    };

    for (const auto& name : gregus::command_names()) {
        CLI::App* sub = app.add_subcommand(name, "run " + name + " on a problem file");
        sub->add_option("problem", args.problem_path, "problem JSON file")->required();
        add_common(sub);
        sub->callback([&, name] { args.command = name; });
    }
    {
        CLI::App* sub = app.add_subcommand("example", "run a bundled example by name");
        sub->add_option("name", args.example_name, "two_disks | ex1_9 | cq_def | ex2_6")
            ->required();
        sub->add_option("action", args.example_action, "subcommand to run (default: all)")
            ->default_val("all");
        add_common(sub);
        sub->callback([&] { args.command = "example"; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const CLI::App* sub = app.get_subcommands().front();
        auto used = [&](const char* opt) { return sub->count(opt) > 0; };
        if (used("--grid")) args.opts.grid = grid;
        if (used("--tol")) args.opts.tol = tol;
        if (used("--pairs")) args.opts.pairs = pairs;
        if (used("--seed")) args.opts.seed = seed;
        if (used("--schedule")) args.opts.schedule = schedule_str;
        if (used("--probe")) args.opts.probes.push_back(parse_point_arg(probe_str));
        if (used("--u")) args.opts.u_override = parse_point_arg(u_str);
        return run(args);
    } catch (const gregus::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
