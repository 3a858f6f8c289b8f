#include "knot/cconv.hpp"
#include "knot/pretty.hpp"
#include "knot/sorts.hpp"
#include "knot/type_ops.hpp"
#include "overloaded.hpp"

#include <stdexcept>

namespace knot {

using detail::overloaded;

namespace {

std::string fresh_type_var(const std::string &base, const std::set<std::string> &avoid) {
    for (int i = 1;; ++i) {
        std::string candidate = base + std::to_string(i);
        if (!avoid.contains(candidate)) {
            return candidate;
        }
    }
}

}  // namespace

TypePtr subst_type(const TypePtr &body, const TypePtr &witness, const std::string &var) {
    return std::visit(
        overloaded{
            [&](const TypeVar &v) { return v.name == var ? witness : body; },
            [&](const ArrowType &a) {
                return arrow_type(subst_type(a.domain, witness, var),
                                  subst_type(a.codomain, witness, var), a.level);
            },
            [&](const RefType &r) { return ref_type(subst_type(r.content, witness, var)); },
            [&](const ProductType &p) {
                return product_type(subst_type(p.left, witness, var),
                                    subst_type(p.right, witness, var));
            },
            [&](const ExistsType &x) {
                if (x.var == var) {
                    return body;
                }
                auto witness_free = free_type_vars(*witness);
                if (!witness_free.contains(x.var)) {
                    return exists_type(x.var, x.level, subst_type(x.body, witness, var));
                }
                auto avoid = free_type_vars(*x.body);
                avoid.insert(witness_free.begin(), witness_free.end());
                avoid.insert(var);
                std::string renamed = fresh_type_var(x.var, avoid);
                auto inner = subst_type(x.body, type_var(renamed), x.var);
                return exists_type(renamed, x.level, subst_type(inner, witness, var));
            },
            [&](const auto &) { return body; },
        },
        body->node);
}

namespace {

class TargetChecker {
public:
    explicit TargetChecker(Mode mode) : mode_(mode) {}

    Derivation check(const Context &ctx, const TermPtr &e) {
        Derivation d;
        d.ctx = ctx;
        d.term = e;
        std::visit(
            overloaded{
                [&](const Var &v) {
                    auto found = ctx.lookup(v.name);
                    if (!found) {
                        throw TypeError(ErrorKind::UnboundVariable, e, "a bound variable", v.name);
                    }
                    if (found->behind_seal) {
                        throw TypeError(ErrorKind::ClosednessViolation, e,
                                        "a parameter of the enclosing code", v.name);
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
                [&](const Code &c) {
                    d.rule = "T-Code";
                    Context inner = ctx.sealed();
                    for (const auto &p : c.params) {
                        require_scoped(ctx, p.type, e);
                        inner = inner.bind(p.name, p.type);
                    }
                    TypePtr type = premise(d, inner, c.body).type;
                    for (auto it = c.params.rbegin(); it != c.params.rend(); ++it) {
                        type = arrow_type(it->type, type);
                    }
                    d.type = type;
                },
                [&](const Pack &p) { pack(ctx, e, p, d); },
                [&](const Unpack &u) { unpack(ctx, e, u, d); },
                [&](const App &a) {
                    d.rule = "T-App";
                    TypePtr fun = premise(d, ctx, a.fun).type;
                    const auto *arrow = fun->as<ArrowType>();
                    if (!arrow) {
                        throw TypeError(ErrorKind::NotAFunction, a.fun, "a code type",
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
                    TypePtr content = ref_content(a.ref, premise(d, ctx, a.ref).type);
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
                    TypePtr bound = premise(d, ctx, l.bound).type;
                    d.type = premise(d, ctx.bind(l.name, bound), l.body).type;
                },
                [&](const Tuple &t) {
                    d.rule = "T-Pair";
                    TypePtr left = premise(d, ctx, t.first).type;
                    TypePtr right = premise(d, ctx, t.second).type;
                    d.type = product_type(left, right);
                },
                [&](const Proj &p) {
                    d.rule = p.index == 1 ? "T-Proj1" : "T-Proj2";
                    TypePtr tuple = premise(d, ctx, p.tuple).type;
                    const auto *prod = tuple->as<ProductType>();
                    if (!prod) {
                        throw TypeError(ErrorKind::NotAProduct, p.tuple, "a product type",
                                        pretty(*tuple));
                    }
                    d.type = p.index == 1 ? prod->left : prod->right;
                },
                [&](const Lam &) {
                    throw std::invalid_argument("source lambda in a closure-converted program: " +
                                                pretty(*e));
                },
            },
            e->node);
        if (mode_ == Mode::Sorted) {
            d.sort = Sort::at(level_of(ctx, d.type, e));
        }
        return d;
    }

private:
    Derivation &premise(Derivation &d, const Context &ctx, const TermPtr &e) {
        d.premises.push_back(check(ctx, e));
        return d.premises.back();
    }

    static Level level_of(const Context &ctx, const TypePtr &t, const TermPtr &at) {
        try {
            return sort_of_target(ctx, *t);
        } catch (const SortError &err) {
            throw TypeError(ErrorKind::UnboundTypeVariable, at, "a bound type variable",
                            pretty(*err.offending()));
        }
    }

    static void require_scoped(const Context &ctx, const TypePtr &t, const TermPtr &at) {
        for (const auto &name : free_type_vars(*t)) {
            if (!ctx.lookup_type_var(name)) {
                throw TypeError(ErrorKind::UnboundTypeVariable, at, "a bound type variable", name);
            }
        }
    }

    static TypePtr ref_content(const TermPtr &at, const TypePtr &t) {
        const auto *ref = t->as<RefType>();
        if (!ref) {
            throw TypeError(ErrorKind::NotARef, at, "a reference type", pretty(*t));
        }
        return ref->content;
    }

    void require_equal(const TermPtr &at, const TypePtr &expected, const TypePtr &found) const {
        LevelCheck levels = mode_ == Mode::Sorted ? LevelCheck::Exact : LevelCheck::Ignore;
        if (equivalent(*expected, *found, levels)) {
            return;
        }
        ErrorKind kind = equivalent(*expected, *found, LevelCheck::Ignore) ? ErrorKind::SortMismatch
                                                                          : ErrorKind::Mismatch;
        throw TypeError(kind, at, pretty(*expected), pretty(*found));
    }

    void pack(const Context &ctx, const TermPtr &e, const Pack &p, Derivation &d) {
        d.rule = "T-Pack";
        require_scoped(ctx, p.witness, e);
        require_scoped(ctx, p.type, e);
        const auto *exists = p.type->as<ExistsType>();
        if (!exists) {
            throw TypeError(ErrorKind::Mismatch, e, "an existential type", pretty(*p.type));
        }
        if (mode_ == Mode::Sorted) {
            Derivation witness = target_sort_derivation(ctx, p.witness);
            Level level = witness.sort->level();
            if (level != exists->level) {
                throw TypeError(ErrorKind::SortMismatch, e,
                                "witness of sort Type " + std::to_string(exists->level),
                                pretty(*p.witness) + " :: Type " + std::to_string(level));
            }
            d.premises.push_back(std::move(witness));
        } else if (mode_ == Mode::FullGround) {
            if (!is_full_ground(*p.witness)) {
                throw TypeError(ErrorKind::NonFullGroundCapture, e, "full-ground witness",
                                pretty(*p.witness));
            }
            d.premises.push_back(full_ground_derivation(ctx, p.witness));
        }
        TypePtr payload = premise(d, ctx, p.payload).type;
        require_equal(p.payload, subst_type(exists->body, p.witness, exists->var), payload);
        d.type = p.type;
    }

    void unpack(const Context &ctx, const TermPtr &e, const Unpack &u, Derivation &d) {
        d.rule = "T-Unpack";
        TypePtr package = premise(d, ctx, u.package).type;
        const auto *exists = package->as<ExistsType>();
        if (!exists) {
            throw TypeError(ErrorKind::NotAPackage, u.package, "an existential type",
                            pretty(*package));
        }
        if (free_type_vars(*package).contains(u.type_var)) {
            throw TypeError(ErrorKind::TypeVarEscape, e, "a type variable not free in the package",
                            u.type_var);
        }
        TypePtr opened = subst_type(exists->body, type_var(u.type_var), exists->var);
        Context inner = ctx.bind_type_var(u.type_var, exists->level).bind(u.var, opened);
        TypePtr body = premise(d, inner, u.body).type;
        if (free_type_vars(*body).contains(u.type_var)) {
            throw TypeError(ErrorKind::TypeVarEscape, e,
                            "a result type not mentioning " + u.type_var, pretty(*body));
        }
        d.type = body;
    }

    Mode mode_;
};

}  // namespace

Derivation derive_target(const Context &ctx, const TermPtr &e, Mode mode) {
    return TargetChecker(mode).check(ctx, e);
}

TypePtr typecheck_target(const Context &ctx, const TermPtr &e, Mode mode) {
    return derive_target(ctx, e, mode).type;
}

}  // namespace knot
