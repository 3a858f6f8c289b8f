#pragma once

#include "knot/syntax.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace knot {

class ParseError : public std::runtime_error {
public:
    ParseError(SourceLoc loc, std::vector<std::string> expected, std::string found);

    SourceLoc loc() const { return loc_; }
    const std::vector<std::string> &expected() const { return expected_; }
    const std::string &found() const { return found_; }

    // "expected <set>, found <token>" without the location prefix.
    std::string detail() const;

private:
    SourceLoc loc_;
    std::vector<std::string> expected_;
    std::string found_;
};

// Whitespace-insensitive; `--` starts a line comment. Throws ParseError.
TermPtr parse_source(std::string_view text);
TermPtr parse_target(std::string_view text);
TermPtr parse(std::string_view text, Language lang);

// A standalone type, e.g. for tests and context files.
TypePtr parse_type(std::string_view text, Language lang);

}  // namespace knot
