#include "knot/parser.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_set>

namespace knot {

namespace {

std::string describe_expected(const std::vector<std::string> &expected, const std::string &found) {
    std::string out = "expected ";
    if (expected.size() == 1) {
        out += expected.front();
    } else {
        out += "one of {";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            out += (i ? ", " : "") + expected[i];
        }
        out += "}";
    }
    return out + ", found " + found;
}

}  // namespace

ParseError::ParseError(SourceLoc loc, std::vector<std::string> expected, std::string found)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " +
                         describe_expected(expected, found)),
      loc_(loc),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string ParseError::detail() const { return describe_expected(expected_, found_); }

namespace {

enum class Tok { Ident, Keyword, Nat, Symbol, End };

struct Token {
    Tok kind;
    std::string text;
    SourceLoc loc;
};

const std::unordered_set<std::string> &keywords() {
    static const std::unordered_set<std::string> k = {
        "lam", "let", "in", "new", "unit", "proj1", "proj2", "pack", "unpack",
        "as", "exists", "Type", "Nat", "Unit", "Ref"};
    return k;
}

std::string describe(const Token &t) {
    switch (t.kind) {
    case Tok::End:
        return "end of input";
    case Tok::Nat:
        return "number " + t.text;
    case Tok::Ident:
        return "identifier '" + t.text + "'";
    default:
        return "'" + t.text + "'";
    }
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    SourceLoc loc{1, 1};
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++loc.line;
                loc.column = 1;
            } else {
                ++loc.column;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "--") {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        SourceLoc start = loc;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
                ++j;
            }
            std::string word(src.substr(i, j - i));
            if (word.size() > 4 && word.starts_with("proj") &&
                std::all_of(word.begin() + 4, word.end(),
                            [](char d) { return std::isdigit(static_cast<unsigned char>(d)); }) &&
                !keywords().contains(word)) {
                throw ParseError(start, {"proj1", "proj2"}, "'" + word + "'");
            }
            out.push_back({keywords().contains(word) ? Tok::Keyword : Tok::Ident, word, start});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            out.push_back({Tok::Nat, std::string(src.substr(i, j - i)), start});
            advance(j - i);
            continue;
        }
        for (std::string_view sym : {":=", "->", ":", ".", ";", "[", "]", "<", ">", ",", "(", ")", "!", "="}) {
            if (src.substr(i, sym.size()) == sym) {
                out.push_back({Tok::Symbol, std::string(sym), start});
                advance(sym.size());
                goto next;
            }
        }
        throw ParseError(start, {"a token"}, "character '" + std::string(1, c) + "'");
    next:;
    }
    out.push_back({Tok::End, "", loc});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, Language lang) : tokens_(lex(text)), lang_(lang) {}

    TermPtr whole_term() {
        auto t = term();
        expect_end();
        return t;
    }

    TypePtr whole_type() {
        auto t = type();
        expect_end();
        return t;
    }

private:
    const Token &peek() const { return tokens_[pos_]; }

    bool at(Tok kind, std::string_view text) const {
        return peek().kind == kind && peek().text == text;
    }
    bool at_symbol(std::string_view s) const { return at(Tok::Symbol, s); }
    bool at_keyword(std::string_view s) const { return at(Tok::Keyword, s); }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw ParseError(peek().loc, std::move(expected), describe(peek()));
    }

    Token take() { return tokens_[pos_++]; }

    void expect_symbol(std::string_view s) {
        if (!at_symbol(s)) {
            fail({"'" + std::string(s) + "'"});
        }
        ++pos_;
    }

    void expect_keyword(std::string_view s) {
        if (!at_keyword(s)) {
            fail({"'" + std::string(s) + "'"});
        }
        ++pos_;
    }

    void expect_end() const {
        if (peek().kind != Tok::End) {
            fail({"end of input"});
        }
    }

    std::string ident() {
        if (peek().kind != Tok::Ident) {
            fail({"identifier"});
        }
        return take().text;
    }

    Natural nat_literal() {
        if (peek().kind != Tok::Nat) {
            fail({"number"});
        }
        return Natural(take().text);
    }

    Level level() {
        SourceLoc loc = peek().loc;
        Natural n = nat_literal();
        if (n > std::numeric_limits<Level>::max()) {
            throw ParseError(loc, {"a level below 2^32"}, "number " + n.str());
        }
        return static_cast<Level>(n);
    }

    bool target() const { return lang_ == Language::Target; }

    void require_target(std::string_view what) const {
        if (!target()) {
            throw ParseError(peek().loc, {"a source-language form"},
                             "target-only '" + std::string(what) + "'");
        }
    }

    // term ::= lam | let | assign (";" term)?
    TermPtr term() {
        SourceLoc loc = peek().loc;
        if (at_keyword("lam")) {
            return target() ? code() : lambda();
        }
        if (at_keyword("let")) {
            ++pos_;
            std::string name = ident();
            expect_symbol("=");
            auto bound = term();
            expect_keyword("in");
            auto body = term();
            return make_term(Let{std::move(name), std::move(bound), std::move(body)}, loc);
        }
        auto first = assign();
        if (at_symbol(";")) {
            ++pos_;
            auto second = term();
            return make_term(Seq{std::move(first), std::move(second)}, loc);
        }
        return first;
    }

    TermPtr lambda() {
        SourceLoc loc = take().loc;
        std::optional<Level> lvl;
        if (at_symbol("[")) {
            ++pos_;
            lvl = level();
            expect_symbol("]");
        }
        std::string name = ident();
        expect_symbol(":");
        auto ty = type();
        expect_symbol(".");
        auto body = term();
        return make_term(Lam{std::move(name), std::move(ty), std::move(body), lvl}, loc);
    }

    // A run of `lam x : T .` binders followed directly by another `lam`
    // forms one multi-parameter code block.
    TermPtr code() {
        SourceLoc loc = peek().loc;
        std::vector<Param> params;
        while (at_keyword("lam")) {
            ++pos_;
            std::string name = ident();
            expect_symbol(":");
            auto ty = type();
            expect_symbol(".");
            params.push_back({std::move(name), std::move(ty)});
        }
        auto body = term();
        return make_term(Code{std::move(params), std::move(body)}, loc);
    }

    // assign ::= app (":=" app)?
    TermPtr assign() {
        SourceLoc loc = peek().loc;
        auto lhs = app();
        if (at_symbol(":=")) {
            ++pos_;
            auto rhs = app();
            return make_term(Assign{std::move(lhs), std::move(rhs)}, loc);
        }
        return lhs;
    }

    bool starts_atom() const {
        const Token &t = peek();
        switch (t.kind) {
        case Tok::Ident:
        case Tok::Nat:
            return true;
        case Tok::Keyword:
            return t.text == "unit" || t.text == "new" || t.text == "proj1" ||
                   t.text == "proj2" || (target() && (t.text == "pack" || t.text == "unpack"));
        case Tok::Symbol:
            return t.text == "!" || t.text == "<" || t.text == "(";
        default:
            return false;
        }
    }

    // app ::= atom+
    TermPtr app() {
        SourceLoc loc = peek().loc;
        auto fun = atom();
        while (starts_atom()) {
            auto arg = atom();
            fun = make_term(App{std::move(fun), std::move(arg)}, loc);
        }
        return fun;
    }

    TermPtr atom() {
        const Token &t = peek();
        SourceLoc loc = t.loc;
        if (t.kind == Tok::Ident) {
            return make_term(Var{take().text}, loc);
        }
        if (t.kind == Tok::Nat) {
            return make_term(NatLit{nat_literal()}, loc);
        }
        if (at_keyword("unit")) {
            ++pos_;
            return make_term(UnitLit{}, loc);
        }
        if (at_keyword("new")) {
            ++pos_;
            return make_term(New{atom()}, loc);
        }
        if (at_symbol("!")) {
            ++pos_;
            return make_term(Deref{atom()}, loc);
        }
        if (at_keyword("proj1") || at_keyword("proj2")) {
            int index = take().text == "proj1" ? 1 : 2;
            return make_term(Proj{index, atom()}, loc);
        }
        if (at_symbol("<")) {
            ++pos_;
            auto first = term();
            expect_symbol(",");
            auto second = term();
            expect_symbol(">");
            return make_term(Tuple{std::move(first), std::move(second)}, loc);
        }
        if (at_symbol("(")) {
            ++pos_;
            auto inner = term();
            expect_symbol(")");
            return inner;
        }
        if (at_keyword("pack")) {
            require_target("pack");
            ++pos_;
            expect_symbol("<");
            auto witness = type();
            expect_symbol(",");
            auto payload = term();
            expect_symbol(">");
            expect_keyword("as");
            auto ty = type();
            return make_term(Pack{std::move(witness), std::move(payload), std::move(ty)}, loc);
        }
        if (at_keyword("unpack")) {
            require_target("unpack");
            ++pos_;
            expect_symbol("<");
            std::string tv = ident();
            expect_symbol(",");
            std::string var = ident();
            expect_symbol(">");
            expect_symbol("=");
            auto package = term();
            expect_keyword("in");
            auto body = term();
            return make_term(Unpack{std::move(tv), std::move(var), std::move(package), std::move(body)},
                             loc);
        }
        std::vector<std::string> expected = {"identifier", "number", "'unit'", "'new'", "'!'",
                                             "'<'", "'proj1'", "'proj2'", "'('"};
        if (target()) {
            expected.push_back("'pack'");
            expected.push_back("'unpack'");
        }
        fail(std::move(expected));
    }

    // type ::= btype ("->" ("[" nat "]")? type)? | "exists" ident ":" "Type" nat "." type
    TypePtr type() {
        if (at_keyword("exists")) {
            require_target("exists");
            ++pos_;
            std::string var = ident();
            if (var == "x") {
                throw ParseError(tokens_[pos_ - 1].loc, {"type variable"}, "reserved 'x'");
            }
            expect_symbol(":");
            expect_keyword("Type");
            Level lvl = level();
            expect_symbol(".");
            auto body = type();
            return exists_type(std::move(var), lvl, std::move(body));
        }
        auto dom = btype();
        if (at_symbol("->")) {
            ++pos_;
            std::optional<Level> lvl;
            if (at_symbol("[")) {
                if (target()) {
                    throw ParseError(peek().loc, {"type"}, "level annotation on a code arrow");
                }
                ++pos_;
                lvl = level();
                expect_symbol("]");
            }
            auto cod = type();
            return arrow_type(std::move(dom), std::move(cod), lvl);
        }
        return dom;
    }

    TypePtr btype() {
        if (at_keyword("Nat")) {
            ++pos_;
            return nat_type();
        }
        if (at_keyword("Unit")) {
            ++pos_;
            return unit_type();
        }
        if (at_keyword("Ref")) {
            ++pos_;
            return ref_type(btype());
        }
        if (at_symbol("<")) {
            ++pos_;
            auto left = type();
            if (!at(Tok::Ident, "x")) {
                fail({"'x'"});
            }
            ++pos_;
            auto right = type();
            expect_symbol(">");
            return product_type(std::move(left), std::move(right));
        }
        if (at_symbol("(")) {
            ++pos_;
            auto inner = type();
            expect_symbol(")");
            return inner;
        }
        if (target() && peek().kind == Tok::Ident && peek().text != "x") {
            return type_var(take().text);
        }
        std::vector<std::string> expected = {"'Nat'", "'Unit'", "'Ref'", "'<'", "'('"};
        if (target()) {
            expected.push_back("'exists'");
            expected.push_back("type variable");
        }
        fail(std::move(expected));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Language lang_;
};

}  // namespace

TermPtr parse_source(std::string_view text) { return Parser(text, Language::Source).whole_term(); }

TermPtr parse_target(std::string_view text) { return Parser(text, Language::Target).whole_term(); }

TermPtr parse(std::string_view text, Language lang) { return Parser(text, lang).whole_term(); }

TypePtr parse_type(std::string_view text, Language lang) {
    return Parser(text, lang).whole_type();
}

}  // namespace knot
