#include "support.hpp"

#include "knot/pretty.hpp"

#include <doctest.h>

using namespace knot;
using support::numeral;

TEST_CASE("eval_source: examples") {
    auto knot = support::corpus_program("knot.src");
    auto out = eval_source(knot, 10000);
    REQUIRE(support::is_exhausted(out));
    CHECK(std::get<FuelExhausted>(out).steps == 10000);

    auto plain = eval_source(support::corpus_program("knot_nobackpatch.src"), 100);
    CHECK(numeral(plain) == 0);
    // Matches the hand trace in the corpus file.
    CHECK(support::as_result(plain)->steps == 7);
    CHECK(support::as_result(plain)->store.size() == 1);

    CHECK(numeral(eval_source(parse_source("(lam x : Nat . x) 5"), 2)) == 5);
    CHECK(numeral(eval_source(parse_source("(lam x : Nat . x) 5"), 1)) == 5);
    CHECK(numeral(eval_source(parse_source("let r = new 1 in r := 4; !r"), 100)) == 4);
    CHECK(numeral(eval_source(parse_source("proj2 <1, 2>"), 100)) == 2);
}

TEST_CASE("eval: capture snapshots variables but shares the store") {
    auto e = parse_source(
        "let r = new 1 in let x = 2 in let g = lam u : Unit . <x, !r> in "
        "let x = 3 in r := 4; g unit");
    auto out = eval_source(e, 100);
    REQUIRE(support::as_result(out));
    CHECK(show(*support::as_result(out)->value) == "<2, 4>");
}

TEST_CASE("eval_target: examples") {
    auto knot = support::corpus_program("knot.src");
    CHECK(support::is_exhausted(eval_target(closure_convert(knot, Mode::Unrestricted), 10000)));
    auto plain = closure_convert(support::corpus_program("knot_nobackpatch.src"), Mode::Unrestricted);
    CHECK(numeral(eval_target(plain, 400)) == 0);
    auto id = parse_target(
        "unpack <a, p> = (pack <Unit, <(lam x:Nat. lam env:Unit. x), unit>> as exists a:Type 0. "
        "<(Nat -> a -> Nat) x a>) in (proj1 p) 3 (proj2 p)");
    CHECK(numeral(eval_target(id, 100)) == 3);
}

TEST_CASE("eval: fuel accounting") {
    // beta, then let, alloc, deref, assign, proj each cost one.
    CHECK(support::as_result(eval_source(parse_source("7"), 1))->steps == 0);
    CHECK(support::as_result(eval_source(parse_source("let x = 1 in x"), 5))->steps == 1);
    CHECK(support::as_result(eval_source(parse_source("!(new 1)"), 5))->steps == 2);
    CHECK(support::as_result(eval_source(parse_source("new 1 := 2"), 5))->steps == 2);
    CHECK(support::as_result(eval_source(parse_source("proj1 <1, 2>"), 5))->steps == 1);
    CHECK(support::as_result(eval_source(parse_source("unit; 1"), 5))->steps == 0);
    // A two-parameter code call costs one beta; unpack costs one.
    CHECK(support::as_result(eval_target(parse_target("(lam x : Nat . lam y : Nat . x) 1 2"), 5))->steps == 1);
    CHECK(support::as_result(
              eval_target(parse_target("unpack <a, p> = (pack <Nat, 1> as exists a : Type 0 . a) in p"), 5))
              ->steps == 1);
    CHECK(support::is_exhausted(eval_source(parse_source("let x = 1 in let y = 2 in y"), 1)));
    CHECK_THROWS_AS(eval_source(parse_source("1"), 0), std::invalid_argument);
}

TEST_CASE("eval: stuck redexes") {
    auto stuck = eval_source(parse_source("1 2"), 10);
    REQUIRE(support::is_stuck(stuck));
    CHECK(std::get<Stuck>(stuck).description.find("non-function") != std::string::npos);
    CHECK(pretty(std::get<Stuck>(stuck).redex) == "1 2");
    CHECK(support::is_stuck(eval_source(parse_source("!unit"), 10)));
    CHECK(support::is_stuck(eval_source(parse_source("3 := 1"), 10)));
    CHECK(support::is_stuck(eval_source(parse_source("proj1 5"), 10)));
    CHECK(support::is_stuck(eval_source(parse_source("zz"), 10)));
    CHECK(support::is_stuck(eval_target(parse_target("unpack <a, p> = 1 in p"), 10)));
}

TEST_CASE("eval: fuel monotonicity and determinism") {
    for (Mode mode : support::kModes) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            auto e = generate(support::gen_config(300 + seed, mode));
            auto small = eval_source(e, 100000);
            if (const auto *r = support::as_result(small)) {
                auto exact = eval_source(e, r->steps == 0 ? 1 : r->steps);
                REQUIRE(support::as_result(exact));
                CHECK(support::as_result(exact)->steps == r->steps);
                CHECK(show(*support::as_result(exact)->value) == show(*r->value));
                auto big = eval_source(e, 1000000);
                CHECK(support::as_result(big)->steps == r->steps);
            }
            auto again = eval_source(e, 100000);
            CHECK(small.index() == again.index());
        }
    }
}

TEST_CASE("eval: long divergent runs stay off the native stack") {
    auto knot = support::corpus_program("knot.src");
    CHECK(support::is_exhausted(eval_source(knot, 2000000)));
    // Each call leaves a pending tuple behind, so the continuation keeps growing.
    auto deep = parse_source("let r = new (lam x : Nat . x) in r := (lam x : Nat . proj1 <(!r) x, 0>); (!r) 0");
    CHECK(support::is_exhausted(eval_source(deep, 1000000)));
}

TEST_CASE("trace: examples") {
    auto lit = trace(parse_source("7"), 10, 20);
    CHECK(lit.steps.empty());
    CHECK(numeral(lit.outcome) == 7);

    auto alloc = trace(parse_source("new 5"), 10, 20);
    REQUIRE(alloc.steps.size() == 1);
    CHECK(alloc.steps[0].rule == "alloc");
    CHECK(alloc.steps[0].store_size == 1);
    CHECK(render(alloc.steps[0]) == "1\talloc\t1\t0");

    auto knot = trace(support::corpus_program("knot.src"), 10000, 20);
    REQUIRE(knot.steps.size() == 20);
    CHECK(knot.steps[4].rule == "assign");
    CHECK(knot.steps[4].touched == std::vector<std::size_t>{0});
    CHECK(knot.steps[4].redex == "r := f");
}

TEST_CASE("trace: the knot cycles after the backpatching write") {
    auto t = trace(support::corpus_program("knot.src"), 10000, 200);
    std::size_t write = 0;
    while (write < t.steps.size() && t.steps[write].rule != "assign") {
        ++write;
    }
    REQUIRE(write < t.steps.size());
    std::vector<StepRecord> after(t.steps.begin() + static_cast<std::ptrdiff_t>(write) + 1,
                                  t.steps.begin() + static_cast<std::ptrdiff_t>(write) + 101);
    REQUIRE(after.size() == 100);
    // Past the first call, the loop body is deref r then beta, forever.
    for (std::size_t i = 1; i + 2 < after.size(); ++i) {
        CAPTURE(i);
        CHECK(after[i].rule == after[i + 2].rule);
        CHECK(after[i].redex == after[i + 2].redex);
        CHECK(after[i].store_size == 1);
        CHECK(after[i].touched == after[i + 2].touched);
    }
    CHECK(after[1].rule != after[2].rule);
}
