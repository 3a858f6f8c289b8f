#pragma once

// Abstract syntax shared by the source language (STLC with references) and
// the closure-converted target language (adds pack, unpack and closed code).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace knot {

using Natural = boost::multiprecision::cpp_int;
using Level = std::uint32_t;

enum class Language { Source, Target };

struct SourceLoc {
    int line = 0;
    int column = 0;

    bool known() const { return line > 0 && column > 0; }
};

// ------------------------------
// types
// ------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct NatType {};
struct UnitType {};

// Source arrows may carry a level; target arrows are closed code types and
// never do.
struct ArrowType {
    TypePtr domain;
    TypePtr codomain;
    std::optional<Level> level;
};

struct RefType {
    TypePtr content;
};

struct ProductType {
    TypePtr left;
    TypePtr right;
};

struct ExistsType {
    std::string var;
    Level level = 0;
    TypePtr body;
};

struct TypeVar {
    std::string name;
};

struct Type {
    using Node = std::variant<NatType, UnitType, ArrowType, RefType, ProductType,
                              ExistsType, TypeVar>;
    Node node;

    template <typename T>
    const T *as() const { return std::get_if<T>(&node); }
    template <typename T>
    bool is() const { return std::holds_alternative<T>(node); }
};

TypePtr nat_type();
TypePtr unit_type();
TypePtr arrow_type(TypePtr domain, TypePtr codomain, std::optional<Level> level = std::nullopt);
TypePtr ref_type(TypePtr content);
TypePtr product_type(TypePtr left, TypePtr right);
TypePtr exists_type(std::string var, Level level, TypePtr body);
TypePtr type_var(std::string name);

// Exact structural equality: binder names and levels must match.
bool operator==(const Type &a, const Type &b);

// ------------------------------
// terms
// ------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
    std::string name;
};

struct NatLit {
    Natural value;
};

struct UnitLit {};

// Source lambda. `level` is the optional `lam [k]` annotation.
struct Lam {
    std::string param;
    TypePtr param_type;
    TermPtr body;
    std::optional<Level> level;
};

struct App {
    TermPtr fun;
    TermPtr arg;
};

struct New {
    TermPtr init;
};

struct Deref {
    TermPtr ref;
};

struct Assign {
    TermPtr ref;
    TermPtr value;
};

struct Seq {
    TermPtr first;
    TermPtr second;
};

struct Let {
    std::string name;
    TermPtr bound;
    TermPtr body;
};

struct Tuple {
    TermPtr first;
    TermPtr second;
};

struct Proj {
    int index = 1;  // 1 or 2
    TermPtr tuple;
};

struct Pack {
    TypePtr witness;
    TermPtr payload;
    TypePtr type;  // the annotated existential
};

struct Unpack {
    std::string type_var;
    std::string var;
    TermPtr package;
    TermPtr body;
};

struct Param {
    std::string name;
    TypePtr type;
};

// Closed code: a multi-parameter lambda whose body may mention only its
// parameters. Concrete syntax is a run of `lam`s.
struct Code {
    std::vector<Param> params;
    TermPtr body;
};

struct Term {
    using Node = std::variant<Var, NatLit, UnitLit, Lam, App, New, Deref, Assign, Seq,
                              Let, Tuple, Proj, Pack, Unpack, Code>;
    Node node;
    SourceLoc loc;

    template <typename T>
    const T *as() const { return std::get_if<T>(&node); }
    template <typename T>
    bool is() const { return std::holds_alternative<T>(node); }
};

TermPtr make_term(Term::Node node, SourceLoc loc = {});

// Structural equality ignoring source locations.
bool operator==(const Term &a, const Term &b);

inline bool same(const TermPtr &a, const TermPtr &b) { return *a == *b; }
inline bool same(const TypePtr &a, const TypePtr &b) { return *a == *b; }

// Variables occurring free in `e`, lexicographically ordered.
std::set<std::string> free_vars(const Term &e);

// Type variables occurring free in `t`.
std::set<std::string> free_type_vars(const Type &t);

bool uses_target_constructs(const Term &e);

// Number of nodes; used as the shrinking measure.
std::size_t term_size(const Term &e);

}  // namespace knot
