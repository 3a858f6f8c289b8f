#pragma once

#include "knot/syntax.hpp"

#include <string>

namespace knot {

struct PrettyOptions {
    // Break let/unpack/sequence chains onto separate lines.
    bool multiline = false;
};

// Output re-parses (in the matching language) to a structurally equal tree.
std::string pretty(const Term &e, PrettyOptions opts = {});
std::string pretty(const Type &t);

inline std::string pretty(const TermPtr &e, PrettyOptions opts = {}) { return pretty(*e, opts); }
inline std::string pretty(const TypePtr &t) { return pretty(*t); }

}  // namespace knot
