#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "wedgeproj/commands.hpp"

namespace {

using namespace wedgeproj;

void add_tolerance_flags(CLI::App* cmd, CommandOptions& opt) {
    cmd->add_option("--eps-rank", opt.tol.eps_rank, "rank / linear-independence tolerance")
        ->capture_default_str();
    cmd->add_option("--eps-feas", opt.tol.eps_feas, "membership / certificate tolerance")
        ->capture_default_str();
    cmd->add_option("--eps-eq", opt.tol.eps_eq, "equality tolerance")->capture_default_str();
    cmd->add_option("--output", opt.output_path, "write a structured JSON report to this file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Metric projection onto finitely generated wedges: project points, split a wedge "
        "into cone and lineality parts, compute polar rays, and decide or sample whether "
        "the projection preserves the wedge's order."};
    app.require_subcommand(1);

    CommandOptions opt;
    std::function<int(const CommandOptions&, std::ostream&)> run;

    auto* project = app.add_subcommand("project", "project points onto a wedge");
    project->add_option("--wedge", opt.wedge_path, "wedge description file")->required();
    project->add_option("--points", opt.points_path, "points file, one vector per line")
        ->required();
    add_tolerance_flags(project, opt);
    project->callback([&] { run = cmd_project; });

    auto* decomp = app.add_subcommand("decompose", "split a wedge into cone and lineality parts");
    decomp->add_option("--wedge", opt.wedge_path, "wedge description file")->required();
    add_tolerance_flags(decomp, opt);
    decomp->callback([&] { run = cmd_decompose; });

    auto* polar = app.add_subcommand("polar", "extreme rays of the wedge's polar");
    polar->add_option("--wedge", opt.wedge_path, "wedge description file")->required();
    polar->add_flag("--intrinsic", opt.intrinsic,
                    "work inside the span of the generators instead of the ambient space");
    add_tolerance_flags(polar, opt);
    polar->callback([&] { run = cmd_polar; });

    auto* check = app.add_subcommand("check-isotone",
                                     "decide whether projection onto the wedge is isotone");
    check->add_option("--wedge", opt.wedge_path, "wedge description file")->required();
    check->add_flag("--intrinsic", opt.intrinsic,
                    "work inside the span of the generators instead of the ambient space");
    add_tolerance_flags(check, opt);
    check->callback([&] { run = cmd_check_isotone; });

    auto* sample = app.add_subcommand("sample", "randomized isotonicity test on ordered pairs");
    sample->add_option("--wedge", opt.wedge_path, "wedge description file")->required();
    sample->add_option("--pairs", opt.pairs, "number of ordered pairs to draw")
        ->capture_default_str();
    sample->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    add_tolerance_flags(sample, opt);
    sample->callback([&] { run = cmd_sample; });

    auto* pava = app.add_subcommand(
        "pava", "project each line onto the nonincreasing wedge of its own length");
    pava->add_option("--points", opt.points_path, "points file, one vector per line")->required();
    add_tolerance_flags(pava, opt);
    pava->callback([&] { run = cmd_pava; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? wedgeproj::exit_ok : wedgeproj::exit_input;
    }

    try {
        opt.tol.validate();
        return run(opt, std::cout);
    } catch (const wedgeproj::PolarNotPointed& e) {
        std::cerr << "inapplicable: " << e.what() << "\n";
        return wedgeproj::exit_inapplicable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wedgeproj::exit_input;
    }
}
