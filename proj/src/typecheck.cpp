#include "knot/typecheck.hpp"

#include "knot/cconv.hpp"
#include "knot/pretty.hpp"
#include "knot/sorts.hpp"
#include "knot/type_ops.hpp"
#include "overloaded.hpp"

#include <algorithm>
#include <stdexcept>

namespace knot {

using detail::overloaded;

TypePtr normalize_annotation(const TypePtr &t, Mode mode, bool *defaulted) {
    if (mode == Mode::Sorted) {
        return default_levels(t, 0, defaulted);
    }
    return erase_levels(t);
}

namespace {

class SourceChecker {
public:
    SourceChecker(Mode mode, Warnings *warnings) : mode_(mode), warnings_(warnings) {}

    Derivation check(const Context &ctx, const TermPtr &e) {
        Derivation d;
        d.ctx = ctx;
        d.term = e;
        std::visit(overloaded{
                       [&](const Var &v) {
                           auto found = ctx.lookup(v.name);
                           if (!found) {
                               throw TypeError(ErrorKind::UnboundVariable, e, "a bound variable",
                                               v.name);
                           }
                           d.rule = "T-Var";
                           d.type = found->type;
                       },
                       [&](const NatLit &) {
                           d.rule = "T-Nat";
                           d.type = nat_type();
                       },
                       [&](const UnitLit &) {
                           d.rule = "T-Unit";
                           d.type = unit_type();
                       },
                       [&](const Lam &l) { lambda(ctx, e, l, d); },
                       [&](const App &a) {
                           d.rule = "T-App";
                           TypePtr fun = premise(d, ctx, a.fun).type;
                           const auto *arrow = fun->as<ArrowType>();
                           if (!arrow) {
                               throw TypeError(ErrorKind::NotAFunction, a.fun, "a function type",
                                               pretty(*fun));
                           }
                           TypePtr arg = premise(d, ctx, a.arg).type;
                           require_equal(a.arg, arrow->domain, arg);
                           d.type = arrow->codomain;
                       },
                       [&](const New &n) {
                           d.rule = "T-New";
                           d.type = ref_type(premise(d, ctx, n.init).type);
                       },
                       [&](const Deref &r) {
                           d.rule = "T-Deref";
                           d.type = ref_content(r.ref, premise(d, ctx, r.ref).type);
                       },
                       [&](const Assign &a) {
                           d.rule = "T-Assign";
                           auto content = ref_content(a.ref, premise(d, ctx, a.ref).type);
                           TypePtr value = premise(d, ctx, a.value).type;
                           require_equal(e, content, value);
                           d.type = unit_type();
                       },
                       [&](const Seq &s) {
                           d.rule = "T-Seq";
                           TypePtr first = premise(d, ctx, s.first).type;
                           if (!first->is<UnitType>()) {
                               throw TypeError(ErrorKind::Mismatch, s.first, "Unit", pretty(*first));
                           }
                           d.type = premise(d, ctx, s.second).type;
                       },
                       [&](const Let &l) {
                           d.rule = "T-Let";
                           auto bound = premise(d, ctx, l.bound).type;
                           d.type = premise(d, ctx.bind(l.name, bound), l.body).type;
                       },
                       [&](const Tuple &t) {
                           d.rule = "T-Pair";
                           auto left = premise(d, ctx, t.first).type;
                           auto right = premise(d, ctx, t.second).type;
                           d.type = product_type(left, right);
                       },
                       [&](const Proj &p) {
                           d.rule = p.index == 1 ? "T-Proj1" : "T-Proj2";
                           auto tuple = premise(d, ctx, p.tuple).type;
                           const auto *prod = tuple->as<ProductType>();
                           if (!prod) {
                               throw TypeError(ErrorKind::NotAProduct, p.tuple, "a product type",
                                               pretty(*tuple));
                           }
                           d.type = p.index == 1 ? prod->left : prod->right;
                       },
                       [&](const auto &) {
                           throw std::invalid_argument(
                               "closure-converted construct in a source program: " + pretty(*e));
                       },
                   },
                   e->node);
        if (mode_ == Mode::Sorted) {
            d.sort = Sort::at(level_of(ctx, d.type, e));
        }
        return d;
    }

private:
    // Contexts supplied by callers may hold arrows that never received a level.
    static Derivation sort_derivation(const Context &ctx, const TypePtr &t, const TermPtr &at) {
        try {
            return source_sort_derivation(ctx, t);
        } catch (const SortError &err) {
            throw TypeError(ErrorKind::UnannotatedArrow, at, "a level-annotated arrow",
                            pretty(*err.offending()));
        }
    }

    static Level level_of(const Context &ctx, const TypePtr &t, const TermPtr &at) {
        try {
            return sort_of_source(ctx, *t);
        } catch (const SortError &err) {
            throw TypeError(ErrorKind::UnannotatedArrow, at, "a level-annotated arrow",
                            pretty(*err.offending()));
        }
    }

    Derivation &premise(Derivation &d, const Context &ctx, const TermPtr &e) {
        d.premises.push_back(check(ctx, e));
        return d.premises.back();
    }

    TypePtr ref_content(const TermPtr &at, const TypePtr &t) {
        const auto *ref = t->as<RefType>();
        if (!ref) {
            throw TypeError(ErrorKind::NotARef, at, "a reference type", pretty(*t));
        }
        return ref->content;
    }

    void require_equal(const TermPtr &at, const TypePtr &expected, const TypePtr &found) {
        if (*expected == *found) {
            return;
        }
        ErrorKind kind = equivalent(*expected, *found, LevelCheck::Ignore) ? ErrorKind::SortMismatch
                                                                          : ErrorKind::Mismatch;
        throw TypeError(kind, at, pretty(*expected), pretty(*found));
    }

    void lambda(const Context &ctx, const TermPtr &e, const Lam &l, Derivation &d) {
        d.rule = "T-Lam";
        bool defaulted = false;
        TypePtr param = normalize_annotation(l.param_type, mode_, &defaulted);
        if (defaulted && warnings_) {
            warnings_->push_back(
                {e->loc, "unannotated arrow in parameter type " + pretty(*l.param_type) +
                             " defaults to level 0"});
        }

        // Captured variables are premises of the rule; unbound ones are left
        // for the body check to report.
        Level env_level = 0;
        for (const auto &name : free_vars(*e)) {
            auto found = ctx.lookup(name);
            if (!found) {
                continue;
            }
            auto var = make_term(Var{name}, e->loc);
            if (mode_ == Mode::FullGround) {
                if (!is_full_ground(*found->type)) {
                    throw TypeError(ErrorKind::NonFullGroundCapture, e,
                                    "full-ground type for captured " + name,
                                    pretty(*found->type));
                }
                d.premises.push_back(Derivation{"FV", ctx, var, found->type, Sort::full_ground(),
                                                {full_ground_derivation(ctx, found->type)}});
            } else if (mode_ == Mode::Sorted) {
                auto sort = sort_derivation(ctx, found->type, e);
                Level level = sort.sort->level();
                env_level = std::max(env_level, level);
                d.premises.push_back(
                    Derivation{"FV", ctx, var, found->type, Sort::at(level), {std::move(sort)}});
            }
        }
        if (mode_ == Mode::Sorted && l.level && *l.level != env_level) {
            throw TypeError(ErrorKind::SortMismatch, e, "Type " + std::to_string(env_level),
                            "Type " + std::to_string(*l.level));
        }

        auto body = premise(d, ctx.bind(l.param, param), l.body).type;
        std::optional<Level> level;
        if (mode_ == Mode::Sorted) {
            level = env_level;
        }
        d.type = arrow_type(param, body, level);
    }

    Mode mode_;
    Warnings *warnings_;
};

}  // namespace

Derivation derive_source(const Context &ctx, const TermPtr &e, Mode mode, Warnings *warnings) {
    return SourceChecker(mode, warnings).check(ctx, e);
}

TypePtr typecheck_source(const Context &ctx, const TermPtr &e, Mode mode, Warnings *warnings) {
    return derive_source(ctx, e, mode, warnings).type;
}

Derivation explain(const TermPtr &e, Mode mode, Language lang, const Context &ctx) {
    if (lang == Language::Target) {
        return derive_target(ctx, e, mode);
    }
    return derive_source(ctx, e, mode);
}

}  // namespace knot
