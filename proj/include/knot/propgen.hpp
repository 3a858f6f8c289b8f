#pragma once

// Random well-typed source programs for the property suites, and a greedy
// shrinker for counterexamples.

#include "knot/diagnostics.hpp"
#include "knot/syntax.hpp"

#include <cstdint>
#include <functional>
#include <string_view>

namespace knot {

// Relative frequencies of the productions. Lambdas and the reference forms
// (new, !, :=) each get a quarter of the table.
struct GenWeights {
    unsigned var = 10;
    unsigned literal = 5;
    unsigned lambda = 25;
    unsigned app = 10;
    unsigned let = 10;
    unsigned alloc = 10;
    unsigned deref = 8;
    unsigned assign = 7;
    unsigned seq = 5;
    unsigned tuple = 5;
    unsigned proj = 5;
};

struct GenConfig {
    std::uint64_t seed = 0;
    unsigned max_depth = 5;   // at most 8
    unsigned max_allocs = 4;  // `new` nodes per program
    Mode mode = Mode::Unrestricted;
    Level level_cap = 2;      // at most 3; bounds every type's level
    GenWeights weights;
};

// Key-value text, one `key = value` per line, `#` comments:
//   seed, max_depth, max_allocs, mode, level_cap, and w_<production> for
//   each weight (w_var, w_lambda, ...). Unknown keys and out-of-range values
//   throw std::invalid_argument.
GenConfig parse_gen_config(std::string_view text, GenConfig base = {});

// A program that typechecks in cfg.mode. Same config, same program. Falls
// back to a literal if no attempt succeeds.
TermPtr generate(const GenConfig &cfg);

// Greedily replaces nodes by their children and literals by smaller ones,
// keeping only steps that still satisfy `failing` and make the term smaller.
// Precondition: failing(e).
TermPtr shrink(const TermPtr &e, const std::function<bool(const TermPtr &)> &failing);

}  // namespace knot
