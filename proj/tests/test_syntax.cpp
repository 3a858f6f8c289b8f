#include "support.hpp"

#include "knot/pretty.hpp"

#include <doctest.h>

#include <map>

using namespace knot;

namespace {

TermPtr var(const std::string &x) { return make_term(Var{x}); }

// Independent free-variable computation: collect occurrences in a list,
// carrying the bound names down, then sort and deduplicate at the end.
void naive_free(const Term &e, std::vector<std::string> bound, std::vector<std::string> &out) {
    auto rec = [&](const TermPtr &t) { naive_free(*t, bound, out); };
    auto under = [&](const std::string &x, const TermPtr &t) {
        auto inner = bound;
        inner.push_back(x);
        naive_free(*t, inner, out);
    };
    if (const auto *v = e.as<Var>()) {
        if (std::find(bound.begin(), bound.end(), v->name) == bound.end()) {
            out.push_back(v->name);
        }
    } else if (const auto *l = e.as<Lam>()) {
        under(l->param, l->body);
    } else if (const auto *a = e.as<App>()) {
        rec(a->fun);
        rec(a->arg);
    } else if (const auto *n = e.as<New>()) {
        rec(n->init);
    } else if (const auto *d = e.as<Deref>()) {
        rec(d->ref);
    } else if (const auto *s = e.as<Assign>()) {
        rec(s->ref);
        rec(s->value);
    } else if (const auto *q = e.as<Seq>()) {
        rec(q->first);
        rec(q->second);
    } else if (const auto *let = e.as<Let>()) {
        rec(let->bound);
        under(let->name, let->body);
    } else if (const auto *t = e.as<Tuple>()) {
        rec(t->first);
        rec(t->second);
    } else if (const auto *p = e.as<Proj>()) {
        rec(p->tuple);
    }
}

std::set<std::string> oracle_free_vars(const Term &e) {
    std::vector<std::string> out;
    naive_free(e, {}, out);
    return {out.begin(), out.end()};
}

// Renames every binder to a fresh name, consistently with its uses.
TermPtr alpha_rename(const TermPtr &e, std::map<std::string, std::string> env, int &counter) {
    auto rec = [&](const TermPtr &t) { return alpha_rename(t, env, counter); };
    auto fresh = [&](const std::string &x) {
        std::string renamed = x + "_" + std::to_string(counter++);
        auto inner = env;
        inner[x] = renamed;
        return std::make_pair(renamed, inner);
    };
    if (const auto *v = e->as<Var>()) {
        auto it = env.find(v->name);
        return var(it == env.end() ? v->name : it->second);
    }
    if (const auto *l = e->as<Lam>()) {
        auto [name, inner] = fresh(l->param);
        return make_term(Lam{name, l->param_type, alpha_rename(l->body, inner, counter), l->level});
    }
    if (const auto *let = e->as<Let>()) {
        auto bound = rec(let->bound);
        auto [name, inner] = fresh(let->name);
        return make_term(Let{name, bound, alpha_rename(let->body, inner, counter)});
    }
    if (const auto *a = e->as<App>()) {
        return make_term(App{rec(a->fun), rec(a->arg)});
    }
    if (const auto *n = e->as<New>()) {
        return make_term(New{rec(n->init)});
    }
    if (const auto *d = e->as<Deref>()) {
        return make_term(Deref{rec(d->ref)});
    }
    if (const auto *s = e->as<Assign>()) {
        return make_term(Assign{rec(s->ref), rec(s->value)});
    }
    if (const auto *q = e->as<Seq>()) {
        return make_term(Seq{rec(q->first), rec(q->second)});
    }
    if (const auto *t = e->as<Tuple>()) {
        return make_term(Tuple{rec(t->first), rec(t->second)});
    }
    if (const auto *p = e->as<Proj>()) {
        return make_term(Proj{p->index, rec(p->tuple)});
    }
    return e;
}

}  // namespace

TEST_CASE("parse: identity function") {
    auto e = parse_source("lam x : Nat . x");
    REQUIRE(e->is<Lam>());
    const auto *l = e->as<Lam>();
    CHECK(l->param == "x");
    CHECK(*l->param_type == *nat_type());
    CHECK(*l->body == *var("x"));
    CHECK_FALSE(l->level);
}

TEST_CASE("parse: the knot program's let/assign/apply chain") {
    auto e = support::corpus_program("knot.src");
    const auto *id = e->as<Let>();
    REQUIRE(id);
    CHECK(id->name == "id");
    const auto *r = id->body->as<Let>();
    REQUIRE(r);
    CHECK(r->name == "r");
    CHECK(*r->bound == *make_term(New{var("id")}));
    const auto *f = r->body->as<Let>();
    REQUIRE(f);
    CHECK(f->name == "f");
    // r := f; f 0  is  Seq(Assign(r, f), App(f, 0))
    auto expected = make_term(Seq{make_term(Assign{var("r"), var("f")}),
                                  make_term(App{var("f"), make_term(NatLit{Natural(0)})})});
    CHECK(*f->body == *expected);
    CHECK(f->body->loc.line == 5);
    CHECK(f->body->loc.column == 1);
}

TEST_CASE("parse: projection index outside the grammar") {
    CHECK_THROWS_AS(parse_source("proj3 x"), ParseError);
    CHECK_THROWS_AS(parse_source("proj0 x"), ParseError);
}

TEST_CASE("parse: errors carry a location and the expected tokens") {
    try {
        parse_source("let x = 1 in\n  lam y : . y");
        FAIL("no error");
    } catch (const ParseError &err) {
        CHECK(err.loc().line == 2);
        CHECK(err.loc().column == 11);
        CHECK_FALSE(err.expected().empty());
        CHECK(err.found() == "'.'");
    }
    CHECK_THROWS_AS(parse_source(""), ParseError);
    CHECK_THROWS_AS(parse_source("x y )"), ParseError);
    CHECK_THROWS_AS(parse_source("pack <Unit, unit> as Unit"), ParseError);
}

TEST_CASE("parse: precedence and associativity") {
    auto x = var("x"), y = var("y"), z = var("z");
    CHECK(*parse_source("x y z") == *make_term(App{make_term(App{x, y}), z}));
    CHECK(*parse_source("x; y; z") == *make_term(Seq{x, make_term(Seq{y, z})}));
    CHECK(*parse_source("x := y z; z") ==
          *make_term(Seq{make_term(Assign{x, make_term(App{y, z})}), z}));
    CHECK(*parse_source("!x y") == *make_term(App{make_term(Deref{x}), y}));
    CHECK(*parse_source("lam x : Nat . x; y") ==
          *make_term(Lam{"x", nat_type(), make_term(Seq{x, y}), std::nullopt}));
    CHECK(*parse_type("Nat -> Nat -> Nat", Language::Source) ==
          *arrow_type(nat_type(), arrow_type(nat_type(), nat_type())));
    CHECK(*parse_type("Ref Nat -> Nat", Language::Source) ==
          *arrow_type(ref_type(nat_type()), nat_type()));
}

TEST_CASE("parse: comments and arbitrary-precision literals") {
    auto e = parse_source("-- a comment\n123456789012345678901234567890 -- trailing");
    REQUIRE(e->is<NatLit>());
    CHECK(e->as<NatLit>()->value == Natural("123456789012345678901234567890"));
}

TEST_CASE("parse: lambda level annotation") {
    auto e = parse_source("lam [1] x : Nat . x");
    REQUIRE(e->as<Lam>()->level);
    CHECK(*e->as<Lam>()->level == 1);
}

TEST_CASE("parse_target: the id package") {
    auto e = parse_target(
        "pack <Unit, <(lam x:Nat. lam env:Unit. x), unit>> as exists a:Type 0. <(Nat -> a -> Nat) x a>");
    const auto *p = e->as<Pack>();
    REQUIRE(p);
    CHECK(*p->witness == *unit_type());
    auto a = type_var("a");
    CHECK(*p->type ==
          *exists_type("a", 0, product_type(arrow_type(nat_type(), arrow_type(a, nat_type())), a)));
    const auto *payload = p->payload->as<Tuple>();
    REQUIRE(payload);
    const auto *code = payload->first->as<Code>();
    REQUIRE(code);
    REQUIRE(code->params.size() == 2);
    CHECK(code->params[0].name == "x");
    CHECK(code->params[1].name == "env");
    CHECK(*code->body == *var("x"));
    CHECK(payload->second->is<UnitLit>());
}

TEST_CASE("parse_target: unit and unscoped unpack") {
    CHECK(parse_target("unit")->is<UnitLit>());
    auto e = parse_target("unpack <a, p> = e in (proj1 p)");
    const auto *u = e->as<Unpack>();
    REQUIRE(u);
    CHECK(u->type_var == "a");
    CHECK(u->var == "p");
    CHECK(*u->package == *var("e"));
}

TEST_CASE("pretty: examples") {
    CHECK(pretty(make_term(Lam{"x", nat_type(), var("x"), std::nullopt})) == "lam x : Nat . x");
    CHECK(pretty(ref_type(arrow_type(nat_type(), nat_type(), 0))) == "Ref (Nat ->[0] Nat)");
    CHECK(pretty(ref_type(ref_type(nat_type()))) == "Ref (Ref Nat)");
    CHECK(pretty(support::corpus_program("knot.src")) ==
          "let id = lam x : Nat . x in let r = new id in let f = lam x : Nat . (!r) x in r := f; f 0");
}

TEST_CASE("round trip: corpus programs, source and target") {
    for (const auto &name : support::corpus_programs()) {
        CAPTURE(name);
        auto e = support::corpus_program(name);
        CHECK(*parse_source(pretty(e)) == *e);
        CHECK(*parse_source(pretty(e, {.multiline = true})) == *e);
        if (support::accepts(e, Mode::Unrestricted)) {
            auto t = closure_convert(e, Mode::Unrestricted);
            CHECK(*parse_target(pretty(t)) == *t);
            CHECK(*parse_target(pretty(t, {.multiline = true})) == *t);
        }
    }
}

TEST_CASE("round trip: generated programs and their conversions") {
    for (Mode mode : support::kModes) {
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            auto e = generate(support::gen_config(seed, mode));
            CAPTURE(pretty(e));
            REQUIRE(*parse_source(pretty(e)) == *e);
            auto t = closure_convert(e, mode);
            REQUIRE(*parse_target(pretty(t)) == *t);
        }
    }
}

TEST_CASE("round trip: generated types") {
    support::TypeGen gen(7);
    for (int i = 0; i < 500; ++i) {
        auto t = gen();
        CAPTURE(pretty(t));
        REQUIRE(*parse_type(pretty(t), Language::Source) == *t);
        auto c = convert_type(t, Mode::Sorted);
        REQUIRE(*parse_type(pretty(c), Language::Target) == *c);
    }
}

TEST_CASE("free_vars: examples") {
    CHECK(free_vars(*parse_source("lam x : Nat . x")).empty());
    CHECK(free_vars(*parse_source("lam x : Nat . (!r) x")) == std::set<std::string>{"r"});
    auto fv = free_vars(*parse_source("let y = z in y w"));
    CHECK(std::vector<std::string>(fv.begin(), fv.end()) == std::vector<std::string>{"w", "z"});
    CHECK(free_vars(*parse_target("unpack <a, p> = q in p x")) == std::set<std::string>{"q", "x"});
    CHECK(free_vars(*parse_target("lam x : Nat . lam env : Unit . y")) == std::set<std::string>{"y"});
}

TEST_CASE("free_vars: agrees with a naive oracle and is stable under renaming") {
    for (Mode mode : support::kModes) {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            auto e = generate(support::gen_config(1000 + seed, mode));
            // Open the program up by dropping its outermost binder.
            TermPtr open = e;
            if (const auto *l = e->as<Let>()) {
                open = l->body;
            } else if (const auto *l = e->as<Lam>()) {
                open = l->body;
            }
            CAPTURE(pretty(open));
            CHECK(free_vars(*open) == oracle_free_vars(*open));
            int counter = 0;
            CHECK(free_vars(*alpha_rename(open, {}, counter)) == free_vars(*open));
        }
    }
}

TEST_CASE("syntax: equality ignores locations but not structure") {
    auto a = parse_source("lam x : Nat . x");
    auto b = parse_source("\n\n   lam x : Nat .   x");
    CHECK(*a == *b);
    CHECK_FALSE(*a == *parse_source("lam y : Nat . y"));
    CHECK(term_size(*parse_source("x y")) == 3);
    CHECK(uses_target_constructs(*parse_target("unpack <a, p> = q in p")));
    CHECK_FALSE(uses_target_constructs(*a));
}
