#pragma once

#include "knot/context.hpp"
#include "knot/sorts.hpp"
#include "knot/syntax.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace knot {

// One judgment plus the premises that justify it. Typing judgments carry a
// term (`ctx |- e : T`, optionally `:: S`); sort judgments have no term
// (`ctx |- T :: S`).
struct Derivation {
    std::string rule;
    Context ctx;
    TermPtr term;
    TypePtr type;
    std::optional<Sort> sort;
    std::vector<Derivation> premises;

    bool is_sort_judgment() const { return term == nullptr; }
};

// The conclusion line without indentation or rule name.
std::string render_judgment(const Derivation &d);

// Indented text, one judgment per line, rule name in brackets:
//   [T-Pack] . |- pack <Unit, ...> as ... : exists a : Type 0 . ... :: Type 0
//     [S-Unit] . |- Unit :: Type 0
std::string render(const Derivation &d);

// Pre-order search.
const Derivation *find_node(const Derivation &root,
                            const std::function<bool(const Derivation &)> &pred);

// Sort derivations for the judgment `ctx |- t :: Type j` (SORTED) or
// `ctx |- t :: fg` (FULL_GROUND witnesses). Throw SortError like the
// corresponding sort_of_* functions.
Derivation source_sort_derivation(const Context &ctx, const TypePtr &t);
Derivation target_sort_derivation(const Context &ctx, const TypePtr &t);
Derivation full_ground_derivation(const Context &ctx, const TypePtr &t);

}  // namespace knot
