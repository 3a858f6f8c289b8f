#include "knot/diagnostics.hpp"

namespace knot {

std::string_view mode_name(Mode m) {
    switch (m) {
    case Mode::Unrestricted:
        return "unrestricted";
    case Mode::FullGround:
        return "full_ground";
    case Mode::Sorted:
        return "sorted";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
    for (Mode m : {Mode::Unrestricted, Mode::FullGround, Mode::Sorted}) {
        if (mode_name(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

std::string_view kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Mismatch:
        return "Mismatch";
    case ErrorKind::UnboundVariable:
        return "UnboundVariable";
    case ErrorKind::NonFullGroundCapture:
        return "NonFullGroundCapture";
    case ErrorKind::SortMismatch:
        return "SortMismatch";
    case ErrorKind::UnannotatedArrow:
        return "UnannotatedArrow";
    case ErrorKind::NotAFunction:
        return "NotAFunction";
    case ErrorKind::NotARef:
        return "NotARef";
    case ErrorKind::NotAProduct:
        return "NotAProduct";
    case ErrorKind::NotAPackage:
        return "NotAPackage";
    case ErrorKind::ClosednessViolation:
        return "ClosednessViolation";
    case ErrorKind::UnboundTypeVariable:
        return "UnboundTypeVariable";
    case ErrorKind::TypeVarEscape:
        return "TypeVarEscape";
    }
    return "?";
}

namespace {

std::string location_prefix(std::string_view file, SourceLoc loc) {
    return std::string(file) + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

}  // namespace

TypeError::TypeError(ErrorKind kind, TermPtr subterm, std::string expected, std::string found)
    : std::runtime_error(std::string(kind_name(kind)) + ": expected " + expected + ", found " +
                         found),
      kind_(kind),
      subterm_(std::move(subterm)),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string TypeError::render(std::string_view file) const {
    return location_prefix(file, loc()) + ": " + what();
}

}  // namespace knot
