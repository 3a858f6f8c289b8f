#pragma once

// Typed closure conversion. A source function becomes an existential
// package hiding its environment type:
//
//   lam x:A. e   ~~>   pack <Env, <(lam x:[[A]]. lam env:Env. e'), env-tuple>>
//                        as exists a : Type j . <([[A]] -> a -> [[B]]) x a>
//
// and application opens the package before calling the code:
//
//   f v   ~~>   unpack <a, p> = [[f]] in (proj1 p) [[v]] (proj2 p)

#include "knot/context.hpp"
#include "knot/derivation.hpp"
#include "knot/diagnostics.hpp"
#include "knot/syntax.hpp"

#include <string>
#include <utility>
#include <vector>

namespace knot {

// How one lambda's captured variables are laid out in its environment.
struct ClosureLayout {
    // Lexicographic, as returned by free_vars; source types.
    std::vector<std::pair<std::string, TypePtr>> members;
    // <[[T1]] x <[[T2]] x ... Unit>>, or Unit when nothing is captured.
    TypePtr env_type;
    // Max of the members' levels, 0 when empty.
    Level env_level = 0;
};

// `lambda` must be a Lam node that typechecks in `ctx` under `mode`.
ClosureLayout closure_layout(const Context &ctx, const TermPtr &lambda, Mode mode);

// Nat, Unit, Ref and products map structurally; A ->[j] B becomes
// exists a : Type j . <([[A]] -> a -> [[B]]) x a>. Outside SORTED the level is
// always 0. Throws SortError on an arrow without a level in SORTED mode.
TypePtr convert_type(const TypePtr &t, Mode mode);

// Converts every binding of a source context.
Context convert_context(const Context &ctx, Mode mode);

// Precondition: the let-bound expressions and lambdas of `e` typecheck in
// `mode` (checking the whole program is the caller's job).
TermPtr closure_convert(const TermPtr &e, Mode mode, const Context &ctx = {});

// Capture-avoiding substitution of `witness` for the type variable `var`.
TypePtr subst_type(const TypePtr &body, const TypePtr &witness, const std::string &var);

// Target-language checking. Throws TypeError.
Derivation derive_target(const Context &ctx, const TermPtr &e, Mode mode);
TypePtr typecheck_target(const Context &ctx, const TermPtr &e, Mode mode);

inline TypePtr typecheck_target(const TermPtr &e, Mode mode) {
    return typecheck_target(Context{}, e, mode);
}

}  // namespace knot
