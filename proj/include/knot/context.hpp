#pragma once

#include "knot/syntax.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace knot {

// Typing context: an immutable, innermost-first list of term bindings and
// type-variable bindings. Extending returns a new context sharing the tail,
// so derivation nodes can keep the context they were checked under.
class Context {
public:
    struct Entry {
        enum class Kind { Term, TypeVar, Seal };
        Kind kind;
        std::string name;
        TypePtr type;     // Term
        Level level = 0;  // TypeVar
    };

    struct Lookup {
        TypePtr type;
        // The binding lies outside an enclosing code block.
        bool behind_seal = false;
    };

    Context() = default;

    Context bind(std::string name, TypePtr type) const;
    Context bind_type_var(std::string name, Level level) const;

    // Term bindings made before the seal stay in the context (for error
    // reporting) but count as out of scope; type variables remain visible.
    Context sealed() const;

    std::optional<Lookup> lookup(std::string_view name) const;
    std::optional<Level> lookup_type_var(std::string_view name) const;

    // Outermost first, seals included.
    std::vector<Entry> entries() const;

    bool empty() const { return head_ == nullptr; }

    // `r : Ref Nat, a : Type 0`, or `.` when empty. Term bindings hidden by a
    // seal are omitted.
    std::string render() const;

private:
    struct Node {
        Entry entry;
        std::shared_ptr<const Node> next;
    };

    explicit Context(std::shared_ptr<const Node> head) : head_(std::move(head)) {}
    Context push(Entry e) const;

    std::shared_ptr<const Node> head_;
};

}  // namespace knot
