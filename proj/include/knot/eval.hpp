#pragma once

// Call-by-value, left-to-right evaluation with a mutable store and a fuel
// budget. One unit of fuel is consumed by each beta step (a closure call, or
// the call that saturates a code block), dereference, assignment,
// allocation, projection, let binding and unpack. Everything else is free,
// so step counts are exact and reproducible.

#include "knot/syntax.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace knot {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// Persistent variable environment; closures capture it by sharing.
class Env {
public:
    Env bind(std::string name, ValuePtr value) const;
    const ValuePtr *lookup(std::string_view name) const;

private:
    struct Node {
        std::string name;
        ValuePtr value;
        std::shared_ptr<const Node> next;
    };
    std::shared_ptr<const Node> head_;
};

struct NumValue {
    Natural value;
};
struct UnitValue {};
struct LocValue {
    std::size_t index;
};
struct ClosureValue {
    TermPtr lambda;  // a Lam node
    Env env;
};
struct TupleValue {
    ValuePtr first;
    ValuePtr second;
};
struct PackageValue {
    TypePtr witness;
    ValuePtr payload;
};
// Code applied to fewer arguments than it has parameters.
struct CodeValue {
    TermPtr code;  // a Code node
    std::vector<ValuePtr> args;
};

struct Value {
    std::variant<NumValue, UnitValue, LocValue, ClosureValue, TupleValue, PackageValue, CodeValue>
        node;

    template <typename T>
    const T *as() const { return std::get_if<T>(&node); }
};

// Append-only; a location is an index.
using Store = std::vector<ValuePtr>;

struct Result {
    ValuePtr value;
    Store store;
    std::uint64_t steps = 0;
};

struct FuelExhausted {
    std::uint64_t steps = 0;
};

struct Stuck {
    std::string description;
    TermPtr redex;
    std::uint64_t steps = 0;
};

using Outcome = std::variant<Result, FuelExhausted, Stuck>;

struct StepRecord {
    std::uint64_t index = 0;  // 1-based
    std::string rule;         // beta, deref, assign, alloc, proj, let, unpack
    std::size_t store_size = 0;
    std::vector<std::size_t> touched;
    std::string redex;
};

struct Trace {
    std::vector<StepRecord> steps;
    Outcome outcome;
};

// `fuel` must be at least 1.
Outcome eval_source(const TermPtr &e, std::uint64_t fuel);
Outcome eval_target(const TermPtr &e, std::uint64_t fuel);

// Evaluates like the above, recording the first `limit` steps.
Trace trace(const TermPtr &e, std::uint64_t fuel, std::size_t limit);

std::string show(const Value &v);

// "<index>\t<rule>\t<store size>\t<touched, comma separated or ->"
std::string render(const StepRecord &r);

}  // namespace knot
