#pragma once

#include "knot/syntax.hpp"

namespace knot {

enum class LevelCheck { Exact, Ignore };

// Equality up to renaming of existential binders. With LevelCheck::Ignore,
// arrow levels and existential sort annotations are not compared.
bool equivalent(const Type &a, const Type &b, LevelCheck levels);

// Drops every arrow level annotation.
TypePtr erase_levels(const TypePtr &t);

// Fills unannotated arrows with `level`; sets *changed if any was filled.
TypePtr default_levels(const TypePtr &t, Level level, bool *changed = nullptr);

bool has_arrow(const Type &t);

// Longest chain of directly nested Ref constructors anywhere in `t`.
int ref_depth(const Type &t);

}  // namespace knot
