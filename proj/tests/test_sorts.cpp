#include "support.hpp"

#include "knot/derivation.hpp"
#include "knot/pretty.hpp"
#include "knot/testing.hpp"
#include "knot/type_ops.hpp"

#include <doctest.h>

using namespace knot;

namespace {

TypePtr src(const std::string &text) { return parse_type(text, Language::Source); }
TypePtr tgt(const std::string &text) { return parse_type(text, Language::Target); }

// Structural recursion written out independently of the library.
Level oracle_level(const Type &t) {
    if (const auto *r = t.as<RefType>()) {
        return oracle_level(*r->content) + 1;
    }
    if (const auto *p = t.as<ProductType>()) {
        return std::max(oracle_level(*p->left), oracle_level(*p->right));
    }
    if (const auto *a = t.as<ArrowType>()) {
        return *a->level;
    }
    return 0;
}

}  // namespace

TEST_CASE("is_full_ground") {
    CHECK(is_full_ground(*nat_type()));
    CHECK(is_full_ground(*src("Ref (Ref Nat)")));
    CHECK_FALSE(is_full_ground(*src("Ref (Nat ->[0] Nat)")));
    CHECK(is_full_ground(*src("<Unit x Ref <Nat x Nat>>")));
    CHECK_FALSE(is_full_ground(*src("<Unit x Nat -> Nat>")));
}

TEST_CASE("sort_of_source: examples") {
    Context ctx;
    CHECK(sort_of_source(ctx, *nat_type()) == 0);
    CHECK(sort_of_source(ctx, *src("Ref Nat")) == 1);
    CHECK(sort_of_source(ctx, *src("Ref (Ref Nat)")) == 2);
    CHECK(sort_of_source(ctx, *src("Nat ->[2] Nat")) == 2);
    CHECK(sort_of_source(ctx, *src("Ref (Nat ->[1] Nat)")) == 2);
    CHECK(sort_of_source(ctx, *src("<Ref Nat x Unit>")) == 1);
    CHECK_THROWS_AS(sort_of_source(ctx, *src("Ref (Nat -> Nat)")), SortError);
}

TEST_CASE("sort_of_target: examples") {
    Context ctx;
    CHECK(sort_of_target(ctx, *tgt("exists a : Type 0 . <(Nat -> a -> Nat) x a>")) == 0);
    CHECK(sort_of_target(ctx, *tgt("Ref (exists a : Type 0 . <(Nat -> a -> Nat) x a>)")) == 1);
    CHECK(sort_of_target(ctx, *tgt("exists a : Type 1 . <(Nat -> a -> Nat) x a>")) == 1);
    CHECK(sort_of_target(ctx, *tgt("Nat -> Ref (Ref Nat) -> Nat")) == 0);
    CHECK(sort_of_target(ctx.bind_type_var("b", 2), *tgt("<b x Nat>")) == 2);
    CHECK_THROWS_AS(sort_of_target(ctx, *tgt("Ref b")), SortError);
}

TEST_CASE("sorts: Ref bump, monotonicity, weakening and agreement on generated types") {
    support::TypeGen gen(11);
    Context big = Context{}.bind("junk", src("Ref (Nat ->[3] Nat)")).bind_type_var("q", 3);
    for (int i = 0; i < 1000; ++i) {
        auto t = gen();
        CAPTURE(pretty(t));
        Level level = sort_of_source({}, *t);
        CHECK(level == oracle_level(*t));
        CHECK(sort_of_source({}, *ref_type(t)) == level + 1);
        CHECK(sort_of_source(big, *t) == level);
        if (!has_arrow(*t)) {
            CHECK(sort_of_target({}, *t) == level);
        }
        if (const auto *p = t->as<ProductType>()) {
            CHECK(level >= sort_of_source({}, *p->left));
            CHECK(level >= sort_of_source({}, *p->right));
        }
    }
}

TEST_CASE("sort derivations conclude the computed sort") {
    support::TypeGen gen(12);
    for (int i = 0; i < 200; ++i) {
        auto t = gen();
        Derivation d = source_sort_derivation({}, t);
        REQUIRE(d.sort);
        CHECK(d.sort->level() == sort_of_source({}, *t));
        CHECK(d.is_sort_judgment());
        auto c = convert_type(t, Mode::Sorted);
        CHECK(target_sort_derivation({}, c).sort->level() == sort_of_target({}, *c));
    }
    auto d = full_ground_derivation({}, src("Ref <Nat x Unit>"));
    CHECK(*d.sort == Sort::full_ground());
    CHECK(render_judgment(d) == ". |- Ref <Nat x Unit> :: fg");
}

TEST_CASE("test hook: disabling the Ref bump") {
    CHECK(ref_bump() == 1);
    {
        testing::RefBumpDisabled off;
        CHECK(ref_bump() == 0);
        CHECK(sort_of_source({}, *src("Ref (Ref Nat)")) == 0);
    }
    CHECK(ref_bump() == 1);
}
