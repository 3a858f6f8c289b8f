#include "knot/driver.hpp"

#include "knot/cconv.hpp"
#include "knot/eval.hpp"
#include "knot/parser.hpp"
#include "knot/pretty.hpp"
#include "knot/sorts.hpp"
#include "knot/type_ops.hpp"
#include "knot/typecheck.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace knot {

std::uint64_t resolve_fuel(std::optional<std::uint64_t> flag, const char *env) {
    std::uint64_t fuel = kDefaultFuel;
    if (flag) {
        fuel = *flag;
    } else if (env && *env) {
        std::string_view text(env);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), fuel);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw std::invalid_argument("KNOTLANG_FUEL must be a positive integer, got '" +
                                        std::string(text) + "'");
        }
    }
    if (fuel == 0) {
        throw std::invalid_argument("fuel must be at least 1");
    }
    return fuel;
}

namespace {

Verdict start(const char *command, Mode mode) {
    Verdict v;
    v.command = command;
    v.mode = mode;
    return v;
}

std::string location(const std::string &file, SourceLoc loc) {
    return file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

// The stages shared by every command. On failure the verdict is filled in
// and the result is empty.
struct Loaded {
    TermPtr program;
    TypePtr type;
};

std::optional<Loaded> load(const std::string &file, Mode mode, Verdict &v) {
    std::ifstream in(file);
    if (!in) {
        v.exit_code = kExitUsage;
        v.diagnostics = "cannot read " + file + "\n";
        return std::nullopt;
    }
    std::stringstream text;
    text << in.rdbuf();
    Loaded out;
    try {
        out.program = parse_source(text.str());
    } catch (const ParseError &err) {
        v.exit_code = kExitParseError;
        v.diagnostics = location(file, err.loc()) + ": ParseError: " + err.detail() + "\n";
        return std::nullopt;
    }
    try {
        Warnings warnings;
        out.type = typecheck_source(Context{}, out.program, mode, &warnings);
        for (const auto &w : warnings) {
            v.diagnostics += location(file, w.loc) + ": warning: " + w.message + "\n";
        }
    } catch (const TypeError &err) {
        v.exit_code = kExitTypeError;
        v.diagnostics += err.render(file) + "\n";
        return std::nullopt;
    }
    return out;
}

// Converts and re-checks in the same mode.
std::optional<TermPtr> compile(const std::string &file, const Loaded &src, Mode mode, Verdict &v) {
    try {
        TermPtr target = closure_convert(src.program, mode);
        typecheck_target(target, mode);
        return target;
    } catch (const TypeError &err) {
        v.exit_code = kExitTypeError;
        v.diagnostics += err.render(file) + "\n";
        return std::nullopt;
    }
}

}  // namespace

Verdict cmd_check(const std::string &file, Mode mode) {
    Verdict v = start("check", mode);
    auto src = load(file, mode, v);
    if (!src) {
        return v;
    }
    v.message = pretty(src->type);
    if (mode == Mode::Sorted) {
        v.message += " :: Type " + std::to_string(sort_of_source({}, *src->type));
    }
    v.message += "\n";
    return v;
}

Verdict cmd_compile(const std::string &file, Mode mode, const std::string &out) {
    Verdict v = start("compile", mode);
    auto src = load(file, mode, v);
    if (!src) {
        return v;
    }
    auto target = compile(file, *src, mode, v);
    if (!target) {
        return v;
    }
    std::string text = pretty(*target, {.multiline = true}) + "\n";
    if (out.empty()) {
        v.message = text;
        return v;
    }
    std::ofstream sink(out);
    if (!(sink << text)) {
        v.exit_code = kExitUsage;
        v.diagnostics += "cannot write " + out + "\n";
        return v;
    }
    v.message = "wrote " + out + "\n";
    return v;
}

Verdict cmd_run(const std::string &file, Mode mode, std::uint64_t fuel, bool target,
                std::size_t trace_limit) {
    Verdict v = start("run", mode);
    auto src = load(file, mode, v);
    if (!src) {
        return v;
    }
    TermPtr program = src->program;
    if (target) {
        auto compiled = compile(file, *src, mode, v);
        if (!compiled) {
            return v;
        }
        program = *compiled;
    }
    Trace t = trace(program, fuel, trace_limit);
    for (const auto &step : t.steps) {
        v.message += render(step) + "\n";
    }
    std::visit(
        [&](const auto &o) {
            using O = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<O, Result>) {
                v.message += show(*o.value) + "\n";
                v.message += "steps: " + std::to_string(o.steps) + "\n";
            } else if constexpr (std::is_same_v<O, FuelExhausted>) {
                v.exit_code = kExitFuelExhausted;
                v.message += "FUEL EXHAUSTED after " + std::to_string(o.steps) + " steps\n";
            } else {
                v.exit_code = kExitStuck;
                v.message += "STUCK: " + o.description + " in " + pretty(o.redex) + "\n";
            }
        },
        t.outcome);
    return v;
}

Verdict cmd_explain(const std::string &file, Mode mode, bool target) {
    Verdict v = start("explain", mode);
    auto src = load(file, mode, v);
    if (!src) {
        return v;
    }
    try {
        if (target) {
            auto compiled = compile(file, *src, mode, v);
            if (!compiled) {
                return v;
            }
            v.message = render(explain(*compiled, mode, Language::Target));
        } else {
            v.message = render(explain(src->program, mode));
        }
    } catch (const TypeError &err) {
        v.exit_code = kExitTypeError;
        v.diagnostics += err.render(file) + "\n";
    }
    return v;
}

// ------------------------------
// demo
// ------------------------------

namespace {

constexpr const char *kKnot =
    "-- Landin's knot: recursion through the store.\n"
    "let id = lam x : Nat . x in\n"
    "let r = new id in\n"
    "let f = lam x : Nat . (!r) x in\n"
    "r := f; f 0\n";

class Demo {
public:
    void section(const std::string &title) { out_ += "\n== " + title + "\n"; }

    void line(const std::string &text) { out_ += text + "\n"; }

    void verdict(const std::string &what, const std::string &expected, const std::string &got) {
        bool ok = expected == got;
        all_ok_ = all_ok_ && ok;
        out_ += (ok ? "[ok]       " : "[MISMATCH] ") + what + ": expected " + expected + ", got " +
                got + "\n";
    }

    // "accepts T" or the error kind.
    static std::string outcome(const TermPtr &e, Mode mode, std::string *detail) {
        try {
            TypePtr t = typecheck_source(e, mode);
            *detail = pretty(t);
            return "accepts " + pretty(erase_levels(t));
        } catch (const TypeError &err) {
            *detail = err.render("knot.src");
            return std::string(kind_name(err.kind()));
        }
    }

    bool ok() const { return all_ok_; }
    std::string text() const { return out_; }

private:
    std::string out_;
    bool all_ok_ = true;
};

std::string root_sort(const Derivation &d) { return d.sort ? d.sort->render() : "none"; }

}  // namespace

Verdict cmd_demo() {
    Verdict v = start("demo", Mode::Sorted);
    Demo demo;
    TermPtr knot = parse_source(kKnot);

    demo.section("Landin's knot");
    demo.line(kKnot);
    std::string detail;
    struct Expectation {
        Mode mode;
        const char *expected;
    };
    for (auto [mode, expected] : {Expectation{Mode::Unrestricted, "accepts Nat"},
                                  Expectation{Mode::FullGround, "NonFullGroundCapture"},
                                  Expectation{Mode::Sorted, "SortMismatch"}}) {
        std::string got = Demo::outcome(knot, mode, &detail);
        demo.verdict("knot under " + std::string(mode_name(mode)), expected, got);
        demo.line("    " + detail);
    }

    demo.section("id, closure converted");
    TermPtr id = parse_source("lam x : Nat . x");
    try {
        TermPtr id_target = closure_convert(id, Mode::Sorted);
        demo.line(pretty(id_target));
        Derivation d = explain(id_target, Mode::Sorted, Language::Target);
        demo.line(render(d));
        demo.verdict("sort of id", "Type 0", root_sort(d));
    } catch (const std::exception &err) {
        demo.verdict("sort of id", "Type 0", err.what());
    }

    demo.section("f, closure converted under r : Ref (Nat ->[0] Nat)");
    TermPtr f = parse_source("lam x : Nat . (!r) x");
    Context ctx = Context{}.bind("r", parse_type("Ref (Nat ->[0] Nat)", Language::Source));
    try {
        TermPtr f_target = closure_convert(f, Mode::Sorted, ctx);
        demo.line(pretty(f_target));
        Derivation d = explain(f_target, Mode::Sorted, Language::Target, convert_context(ctx, Mode::Sorted));
        demo.line(render(d));
        demo.verdict("sort of f", "Type 1", root_sort(d));
    } catch (const std::exception &err) {
        demo.verdict("sort of f", "Type 1", err.what());
    }

    demo.section("the backpatch r := f in the target");
    std::string got;
    try {
        TermPtr target = closure_convert(knot, Mode::Sorted);
        typecheck_target(target, Mode::Sorted);
        got = "accepts";
    } catch (const TypeError &err) {
        got = std::string(kind_name(err.kind()));
        demo.line("    " + err.render("knot.src"));
    } catch (const std::exception &err) {
        got = err.what();
    }
    demo.verdict("target knot under sorted", "SortMismatch", got);

    demo.section(demo.ok() ? "all verdicts as expected" : "some verdicts differ");
    v.message = demo.text();
    v.exit_code = demo.ok() ? kExitOk : kExitTypeError;
    return v;
}

}  // namespace knot
