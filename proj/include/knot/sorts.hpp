#pragma once

// Universe sorts. A type is either classified full-ground (the first
// restricted discipline) or assigned a level j, read "lives in Type j".
// Base types sit at level 0 and Ref A sits exactly one level above A.

#include "knot/context.hpp"
#include "knot/syntax.hpp"

#include <stdexcept>
#include <string>
#include <variant>

namespace knot {

struct FullGround {
    bool operator==(const FullGround &) const = default;
};

struct Sort {
    std::variant<FullGround, Level> value;

    static Sort full_ground() { return Sort{FullGround{}}; }
    static Sort at(Level j) { return Sort{j}; }

    bool is_level() const { return std::holds_alternative<Level>(value); }
    Level level() const { return std::get<Level>(value); }

    // "fg" or "Type j"
    std::string render() const;

    bool operator==(const Sort &) const = default;
};

class SortError : public std::runtime_error {
public:
    enum class Reason { UnannotatedArrow, UnboundTypeVar };

    SortError(Reason reason, TypePtr offending, const std::string &message)
        : std::runtime_error(message), reason_(reason), offending_(std::move(offending)) {}

    Reason reason() const { return reason_; }
    const TypePtr &offending() const { return offending_; }

private:
    Reason reason_;
    TypePtr offending_;
};

// g ::= Nat | Unit | <g x g> | Ref g
bool is_full_ground(const Type &t);

// Nat, Unit -> 0; products -> max; Ref A -> sort(A) + 1; A ->[j] B -> j.
// Throws SortError on an arrow without a level.
Level sort_of_source(const Context &ctx, const Type &t);

// As above, plus: type variables take their declared level, an existential
// takes the level of its body with the bound variable in scope, and code
// arrows are level 0. Throws SortError on an unbound type variable.
Level sort_of_target(const Context &ctx, const Type &t);

// The increment applied by the Ref rule. Always 1 outside test builds.
Level ref_bump();

}  // namespace knot
