#pragma once

#include "knot/syntax.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace knot {

// Typing discipline for a check run.
enum class Mode {
    Unrestricted,  // plain STLC with references; the knot type-checks
    FullGround,    // closures may capture only full-ground variables
    Sorted,        // closures live at the max level of what they capture
};

std::string_view mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

enum class ErrorKind {
    Mismatch,
    UnboundVariable,
    NonFullGroundCapture,
    SortMismatch,
    UnannotatedArrow,
    NotAFunction,
    NotARef,
    NotAProduct,
    NotAPackage,
    ClosednessViolation,
    UnboundTypeVariable,
    TypeVarEscape,
};

std::string_view kind_name(ErrorKind k);

class TypeError : public std::runtime_error {
public:
    TypeError(ErrorKind kind, TermPtr subterm, std::string expected, std::string found);

    ErrorKind kind() const { return kind_; }
    const TermPtr &subterm() const { return subterm_; }
    const std::string &expected() const { return expected_; }
    const std::string &found() const { return found_; }
    SourceLoc loc() const { return subterm_ ? subterm_->loc : SourceLoc{}; }

    // <file>:<line>:<col>: <KIND>: expected <T1>, found <T2>
    std::string render(std::string_view file) const;

private:
    ErrorKind kind_;
    TermPtr subterm_;
    std::string expected_;
    std::string found_;
};

struct Warning {
    SourceLoc loc;
    std::string message;
};

using Warnings = std::vector<Warning>;

}  // namespace knot
