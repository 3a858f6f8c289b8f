// knotc: check, compile, run and explain knot-language programs.

#include "knot/driver.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

namespace {

int emit(const knot::Verdict &v) {
    std::cout << v.message;
    std::cerr << v.diagnostics;
    return v.exit_code;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"knotc: a typed closure-conversion toolchain for STLC with references"};
    app.require_subcommand(1);

    const std::map<std::string, knot::Mode> modes{
        {"unrestricted", knot::Mode::Unrestricted},
        {"full_ground", knot::Mode::FullGround},
        {"full-ground", knot::Mode::FullGround},
        {"sorted", knot::Mode::Sorted},
    };
    auto add_mode = [&](CLI::App *cmd, knot::Mode &mode) {
        cmd->add_option("--mode", mode, "Typing discipline: unrestricted, full_ground or sorted")
            ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
            ->default_str("sorted");
    };

    std::string file;
    knot::Mode mode = knot::Mode::Sorted;

    auto *check = app.add_subcommand("check", "Typecheck a program and print its type");
    check->add_option("file", file, "Source program")->required();
    add_mode(check, mode);

    std::string out;
    auto *compile = app.add_subcommand("compile", "Closure-convert a program and re-check it");
    compile->add_option("file", file, "Source program")->required();
    add_mode(compile, mode);
    compile->add_option("--out", out, "Write the target program here instead of stdout");

    std::optional<std::uint64_t> fuel;
    bool target = false;
    std::size_t trace = 0;
    auto *run = app.add_subcommand("run", "Evaluate a program under a fuel budget");
    run->add_option("file", file, "Source program")->required();
    add_mode(run, mode);
    run->add_option("--fuel", fuel, "Step budget (default $KNOTLANG_FUEL or 10000)")
        ->check(CLI::PositiveNumber);
    run->add_flag("--target", target, "Run the closure-converted program");
    run->add_option("--trace", trace, "Print the first K steps");

    bool explain_target = false;
    auto *explain = app.add_subcommand("explain", "Print the typing derivation");
    explain->add_option("file", file, "Source program")->required();
    add_mode(explain, mode);
    explain->add_flag("--target", explain_target, "Explain the closure-converted program");

    app.add_subcommand("demo", "Replay the knot narrative and verify every verdict");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return knot::kExitUsage;
    }

    if (*check) {
        return emit(knot::cmd_check(file, mode));
    }
    if (*compile) {
        return emit(knot::cmd_compile(file, mode, out));
    }
    if (*run) {
        std::uint64_t budget = 0;
        try {
            budget = knot::resolve_fuel(fuel, std::getenv("KNOTLANG_FUEL"));
        } catch (const std::invalid_argument &e) {
            std::cerr << e.what() << "\n";
            return knot::kExitUsage;
        }
        return emit(knot::cmd_run(file, mode, budget, target, trace));
    }
    if (*explain) {
        return emit(knot::cmd_explain(file, mode, explain_target));
    }
    return emit(knot::cmd_demo());
}
