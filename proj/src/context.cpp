#include "knot/context.hpp"

#include "knot/pretty.hpp"

#include <algorithm>

namespace knot {

Context Context::push(Entry e) const {
    return Context(std::make_shared<const Node>(Node{std::move(e), head_}));
}

Context Context::bind(std::string name, TypePtr type) const {
    return push({Entry::Kind::Term, std::move(name), std::move(type), 0});
}

Context Context::bind_type_var(std::string name, Level level) const {
    return push({Entry::Kind::TypeVar, std::move(name), nullptr, level});
}

Context Context::sealed() const { return push({Entry::Kind::Seal, "", nullptr, 0}); }

std::optional<Context::Lookup> Context::lookup(std::string_view name) const {
    bool sealed = false;
    for (const Node *n = head_.get(); n; n = n->next.get()) {
        if (n->entry.kind == Entry::Kind::Seal) {
            sealed = true;
        } else if (n->entry.kind == Entry::Kind::Term && n->entry.name == name) {
            return Lookup{n->entry.type, sealed};
        }
    }
    return std::nullopt;
}

std::optional<Level> Context::lookup_type_var(std::string_view name) const {
    for (const Node *n = head_.get(); n; n = n->next.get()) {
        if (n->entry.kind == Entry::Kind::TypeVar && n->entry.name == name) {
            return n->entry.level;
        }
    }
    return std::nullopt;
}

std::vector<Context::Entry> Context::entries() const {
    std::vector<Entry> out;
    for (const Node *n = head_.get(); n; n = n->next.get()) {
        out.push_back(n->entry);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string Context::render() const {
    std::vector<std::string> visible;
    bool sealed = false;
    for (const Node *n = head_.get(); n; n = n->next.get()) {
        const Entry &e = n->entry;
        if (e.kind == Entry::Kind::Seal) {
            sealed = true;
        } else if (e.kind == Entry::Kind::TypeVar) {
            visible.push_back(e.name + " : Type " + std::to_string(e.level));
        } else if (!sealed) {
            visible.push_back(e.name + " : " + pretty(*e.type));
        }
    }
    if (visible.empty()) {
        return ".";
    }
    std::string out;
    for (auto it = visible.rbegin(); it != visible.rend(); ++it) {
        out += (out.empty() ? "" : ", ") + *it;
    }
    return out;
}

}  // namespace knot
