#include "knot/cconv.hpp"

#include "knot/sorts.hpp"
#include "knot/type_ops.hpp"
#include "knot/typecheck.hpp"
#include "overloaded.hpp"

#include <algorithm>
#include <stdexcept>

namespace knot {

using detail::overloaded;

TypePtr convert_type(const TypePtr &t, Mode mode) {
    return std::visit(
        overloaded{
            [&](const ArrowType &a) {
                Level level = 0;
                if (mode == Mode::Sorted) {
                    if (!a.level) {
                        throw SortError(SortError::Reason::UnannotatedArrow, t,
                                        "closure conversion needs a level on every arrow");
                    }
                    level = *a.level;
                }
                auto env = type_var("a");
                auto code = arrow_type(convert_type(a.domain, mode),
                                       arrow_type(env, convert_type(a.codomain, mode)));
                return exists_type("a", level, product_type(code, env));
            },
            [&](const RefType &r) { return ref_type(convert_type(r.content, mode)); },
            [&](const ProductType &p) {
                return product_type(convert_type(p.left, mode), convert_type(p.right, mode));
            },
            [&](const auto &) { return t; },
        },
        t->node);
}

Context convert_context(const Context &ctx, Mode mode) {
    Context out;
    for (const auto &entry : ctx.entries()) {
        switch (entry.kind) {
        case Context::Entry::Kind::Term:
            out = out.bind(entry.name, convert_type(entry.type, mode));
            break;
        case Context::Entry::Kind::TypeVar:
            out = out.bind_type_var(entry.name, entry.level);
            break;
        case Context::Entry::Kind::Seal:
            out = out.sealed();
            break;
        }
    }
    return out;
}

ClosureLayout closure_layout(const Context &ctx, const TermPtr &lambda, Mode mode) {
    if (!lambda->is<Lam>()) {
        throw std::invalid_argument("closure_layout expects a lambda");
    }
    ClosureLayout layout;
    for (const auto &name : free_vars(*lambda)) {
        auto found = ctx.lookup(name);
        if (!found) {
            throw std::invalid_argument("closure_layout: unbound variable " + name);
        }
        layout.members.emplace_back(name, found->type);
        // Outside SORTED the arrows carry no level; they count as level 0.
        TypePtr leveled = mode == Mode::Sorted ? found->type : default_levels(found->type, 0);
        layout.env_level = std::max(layout.env_level, sort_of_source(ctx, *leveled));
    }
    TypePtr env = unit_type();
    for (auto it = layout.members.rbegin(); it != layout.members.rend(); ++it) {
        env = product_type(convert_type(it->second, mode), env);
    }
    layout.env_type = env;
    return layout;
}

namespace {

std::string fresh_name(const std::string &base, const std::set<std::string> &avoid) {
    if (!avoid.contains(base)) {
        return base;
    }
    for (int i = 1;; ++i) {
        std::string candidate = base + std::to_string(i);
        if (!avoid.contains(candidate)) {
            return candidate;
        }
    }
}

class Converter {
public:
    explicit Converter(Mode mode) : mode_(mode) {}

    TermPtr convert(const Context &ctx, const TermPtr &e) {
        SourceLoc loc = e->loc;
        return std::visit(
            overloaded{
                [&](const Var &) { return e; },
                [&](const NatLit &) { return e; },
                [&](const UnitLit &) { return e; },
                [&](const Lam &l) { return lambda(ctx, e, l); },
                [&](const App &a) { return application(ctx, a, loc); },
                [&](const New &n) { return make_term(New{convert(ctx, n.init)}, loc); },
                [&](const Deref &r) { return make_term(Deref{convert(ctx, r.ref)}, loc); },
                [&](const Assign &a) {
                    return make_term(Assign{convert(ctx, a.ref), convert(ctx, a.value)}, loc);
                },
                [&](const Seq &s) {
                    return make_term(Seq{convert(ctx, s.first), convert(ctx, s.second)}, loc);
                },
                [&](const Let &l) {
                    TypePtr bound = typecheck_source(ctx, l.bound, mode_);
                    return make_term(Let{l.name, convert(ctx, l.bound),
                                         convert(ctx.bind(l.name, bound), l.body)},
                                     loc);
                },
                [&](const Tuple &t) {
                    return make_term(Tuple{convert(ctx, t.first), convert(ctx, t.second)}, loc);
                },
                [&](const Proj &p) { return make_term(Proj{p.index, convert(ctx, p.tuple)}, loc); },
                [&](const auto &) -> TermPtr {
                    throw std::invalid_argument("closure_convert expects a source program");
                },
            },
            e->node);
    }

private:
    TermPtr lambda(const Context &ctx, const TermPtr &e, const Lam &l) {
        SourceLoc loc = e->loc;
        ClosureLayout layout = closure_layout(ctx, e, mode_);
        TypePtr fun_type = typecheck_source(ctx, e, mode_);
        TypePtr param = fun_type->as<ArrowType>()->domain;

        std::set<std::string> taken;
        for (const auto &[name, type] : layout.members) {
            taken.insert(name);
        }
        taken.insert(l.param);
        std::string env = fresh_name("env", taken);

        // Captured variables are rebound from the environment, innermost last:
        //   let v_i = proj1 (proj2^i env) in ...
        TermPtr body = convert(ctx.bind(l.param, param), l.body);
        for (std::size_t i = layout.members.size(); i-- > 0;) {
            TermPtr path = make_term(Var{env}, loc);
            for (std::size_t k = 0; k < i; ++k) {
                path = make_term(Proj{2, path}, loc);
            }
            path = make_term(Proj{1, path}, loc);
            body = make_term(Let{layout.members[i].first, path, body}, loc);
        }

        TermPtr code = make_term(
            Code{{{l.param, convert_type(param, mode_)}, {env, layout.env_type}}, body}, loc);
        TermPtr env_tuple = make_term(UnitLit{}, loc);
        for (auto it = layout.members.rbegin(); it != layout.members.rend(); ++it) {
            env_tuple = make_term(Tuple{make_term(Var{it->first}, loc), env_tuple}, loc);
        }
        return make_term(Pack{layout.env_type, make_term(Tuple{code, env_tuple}, loc),
                              convert_type(fun_type, mode_)},
                         loc);
    }

    TermPtr application(const Context &ctx, const App &a, SourceLoc loc) {
        TermPtr fun = convert(ctx, a.fun);
        TermPtr arg = convert(ctx, a.arg);
        std::string package = fresh_name("p", free_vars(*arg));
        auto p = [&] { return make_term(Var{package}, loc); };
        TermPtr call = make_term(
            App{make_term(App{make_term(Proj{1, p()}, loc), arg}, loc), make_term(Proj{2, p()}, loc)},
            loc);
        return make_term(Unpack{"a", package, fun, call}, loc);
    }

    Mode mode_;
};

}  // namespace

TermPtr closure_convert(const TermPtr &e, Mode mode, const Context &ctx) {
    return Converter(mode).convert(ctx, e);
}

}  // namespace knot
