#pragma once

#include "knot/context.hpp"
#include "knot/derivation.hpp"
#include "knot/diagnostics.hpp"
#include "knot/syntax.hpp"

namespace knot {

// Brings a parameter annotation into the form the given mode compares:
// SORTED fills unannotated arrows with level 0 (setting *defaulted), the
// other modes drop level annotations entirely.
TypePtr normalize_annotation(const TypePtr &t, Mode mode, bool *defaulted = nullptr);

// Full derivation of `ctx |- e : T` in the given discipline. In SORTED mode
// every typing judgment carries the sort of its type and every lambda lists
// its captured variables as premises. Throws TypeError.
Derivation derive_source(const Context &ctx, const TermPtr &e, Mode mode,
                         Warnings *warnings = nullptr);

TypePtr typecheck_source(const Context &ctx, const TermPtr &e, Mode mode,
                         Warnings *warnings = nullptr);

inline TypePtr typecheck_source(const TermPtr &e, Mode mode) {
    return typecheck_source(Context{}, e, mode);
}

// Derivation tree for a source or closure-converted program.
Derivation explain(const TermPtr &e, Mode mode, Language lang = Language::Source,
                   const Context &ctx = {});

}  // namespace knot
