#include "knot/sorts.hpp"

#include "knot/derivation.hpp"
#include "knot/pretty.hpp"
#include "knot/testing.hpp"
#include "overloaded.hpp"

#include <algorithm>

namespace knot {

using detail::overloaded;

std::string Sort::render() const {
    return is_level() ? "Type " + std::to_string(level()) : "fg";
}

#ifdef KNOT_TEST_HOOKS
namespace {
thread_local bool ref_bump_disabled = false;
}

namespace testing {
RefBumpDisabled::RefBumpDisabled() : previous_(ref_bump_disabled) { ref_bump_disabled = true; }
RefBumpDisabled::~RefBumpDisabled() { ref_bump_disabled = previous_; }
}  // namespace testing

Level ref_bump() { return ref_bump_disabled ? 0 : 1; }
#else
Level ref_bump() { return 1; }
#endif

bool is_full_ground(const Type &t) {
    return std::visit(overloaded{
                          [](const NatType &) { return true; },
                          [](const UnitType &) { return true; },
                          [](const RefType &r) { return is_full_ground(*r.content); },
                          [](const ProductType &p) {
                              return is_full_ground(*p.left) && is_full_ground(*p.right);
                          },
                          [](const auto &) { return false; },
                      },
                      t.node);
}

namespace {

enum class Flavor { Source, Target };

// Both sort functions and both derivation builders share this one walk; the
// derivation variant records premises as it goes.
Level sort_walk(const Context &ctx, const TypePtr &t, Flavor flavor, Derivation *out) {
    std::vector<Derivation> premises;
    auto sub = [&](const Context &c, const TypePtr &child) {
        if (!out) {
            return sort_walk(c, child, flavor, nullptr);
        }
        premises.emplace_back();
        return sort_walk(c, child, flavor, &premises.back());
    };
    std::string rule;
    Level level = std::visit(
        overloaded{
            [&](const NatType &) -> Level {
                rule = "S-Nat";
                return 0;
            },
            [&](const UnitType &) -> Level {
                rule = "S-Unit";
                return 0;
            },
            [&](const ProductType &p) -> Level {
                rule = "S-Prod";
                Level l = sub(ctx, p.left);
                Level r = sub(ctx, p.right);
                return std::max(l, r);
            },
            [&](const RefType &r) -> Level {
                rule = "S-Ref";
                return sub(ctx, r.content) + ref_bump();
            },
            [&](const ArrowType &a) -> Level {
                if (flavor == Flavor::Target) {
                    rule = "S-Code";
                    return 0;
                }
                rule = "S-Arrow";
                if (!a.level) {
                    throw SortError(SortError::Reason::UnannotatedArrow, t,
                                    "unannotated arrow " + pretty(*t) + " has no level");
                }
                return *a.level;
            },
            [&](const ExistsType &x) -> Level {
                rule = "S-Exists";
                return sub(ctx.bind_type_var(x.var, x.level), x.body);
            },
            [&](const TypeVar &v) -> Level {
                rule = "S-TVar";
                auto level = ctx.lookup_type_var(v.name);
                if (!level) {
                    throw SortError(SortError::Reason::UnboundTypeVar, t,
                                    "unbound type variable " + v.name);
                }
                return *level;
            },
        },
        t->node);
    if (out) {
        *out = Derivation{rule, ctx, nullptr, t, Sort::at(level), std::move(premises)};
    }
    return level;
}

}  // namespace

Level sort_of_source(const Context &ctx, const Type &t) {
    // Non-owning alias; nothing retains it when no derivation is recorded.
    TypePtr alias(std::shared_ptr<const Type>{}, &t);
    return sort_walk(ctx, alias, Flavor::Source, nullptr);
}

Level sort_of_target(const Context &ctx, const Type &t) {
    TypePtr alias(std::shared_ptr<const Type>{}, &t);
    return sort_walk(ctx, alias, Flavor::Target, nullptr);
}

Derivation source_sort_derivation(const Context &ctx, const TypePtr &t) {
    Derivation d;
    sort_walk(ctx, t, Flavor::Source, &d);
    return d;
}

Derivation target_sort_derivation(const Context &ctx, const TypePtr &t) {
    Derivation d;
    sort_walk(ctx, t, Flavor::Target, &d);
    return d;
}

Derivation full_ground_derivation(const Context &ctx, const TypePtr &t) {
    Derivation d{"FG", ctx, nullptr, t, Sort::full_ground(), {}};
    std::visit(overloaded{
                   [&](const NatType &) { d.rule = "FG-Nat"; },
                   [&](const UnitType &) { d.rule = "FG-Unit"; },
                   [&](const RefType &r) {
                       d.rule = "FG-Ref";
                       d.premises.push_back(full_ground_derivation(ctx, r.content));
                   },
                   [&](const ProductType &p) {
                       d.rule = "FG-Prod";
                       d.premises.push_back(full_ground_derivation(ctx, p.left));
                       d.premises.push_back(full_ground_derivation(ctx, p.right));
                   },
                   [](const auto &) {},
               },
               t->node);
    return d;
}

}  // namespace knot
