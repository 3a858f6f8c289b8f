#include "knot/type_ops.hpp"

#include "overloaded.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace knot {

using detail::overloaded;

namespace {

using Binders = std::vector<std::pair<std::string, std::string>>;

// Two type variables match when bound at the same depth, or both free with
// the same name.
bool same_var(const std::string &a, const std::string &b, const Binders &bound) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
        if (it->first == a || it->second == b) {
            return it->first == a && it->second == b;
        }
    }
    return a == b;
}

bool equiv(const Type &a, const Type &b, LevelCheck levels, Binders &bound) {
    if (a.node.index() != b.node.index()) {
        return false;
    }
    return std::visit(
        overloaded{
            [](const NatType &) { return true; },
            [](const UnitType &) { return true; },
            [&](const ArrowType &x) {
                const auto &y = std::get<ArrowType>(b.node);
                if (levels == LevelCheck::Exact && x.level != y.level) {
                    return false;
                }
                return equiv(*x.domain, *y.domain, levels, bound) &&
                       equiv(*x.codomain, *y.codomain, levels, bound);
            },
            [&](const RefType &x) {
                return equiv(*x.content, *std::get<RefType>(b.node).content, levels, bound);
            },
            [&](const ProductType &x) {
                const auto &y = std::get<ProductType>(b.node);
                return equiv(*x.left, *y.left, levels, bound) &&
                       equiv(*x.right, *y.right, levels, bound);
            },
            [&](const ExistsType &x) {
                const auto &y = std::get<ExistsType>(b.node);
                if (levels == LevelCheck::Exact && x.level != y.level) {
                    return false;
                }
                bound.emplace_back(x.var, y.var);
                bool result = equiv(*x.body, *y.body, levels, bound);
                bound.pop_back();
                return result;
            },
            [&](const TypeVar &x) { return same_var(x.name, std::get<TypeVar>(b.node).name, bound); },
        },
        a.node);
}

template <typename F>
TypePtr map_arrows(const TypePtr &t, F &&on_arrow) {
    return std::visit(
        overloaded{
            [&](const ArrowType &a) {
                return on_arrow(map_arrows(a.domain, on_arrow), map_arrows(a.codomain, on_arrow),
                                a.level);
            },
            [&](const RefType &r) { return ref_type(map_arrows(r.content, on_arrow)); },
            [&](const ProductType &p) {
                return product_type(map_arrows(p.left, on_arrow), map_arrows(p.right, on_arrow));
            },
            [&](const ExistsType &x) {
                return exists_type(x.var, x.level, map_arrows(x.body, on_arrow));
            },
            [&](const auto &) { return t; },
        },
        t->node);
}

}  // namespace

bool equivalent(const Type &a, const Type &b, LevelCheck levels) {
    Binders bound;
    return equiv(a, b, levels, bound);
}

TypePtr erase_levels(const TypePtr &t) {
    return map_arrows(t, [](TypePtr d, TypePtr c, std::optional<Level>) {
        return arrow_type(std::move(d), std::move(c), std::nullopt);
    });
}

TypePtr default_levels(const TypePtr &t, Level level, bool *changed) {
    return map_arrows(t, [&](TypePtr d, TypePtr c, std::optional<Level> l) {
        if (!l && changed) {
            *changed = true;
        }
        return arrow_type(std::move(d), std::move(c), l.value_or(level));
    });
}

bool has_arrow(const Type &t) {
    return std::visit(overloaded{
                          [](const ArrowType &) { return true; },
                          [](const RefType &r) { return has_arrow(*r.content); },
                          [](const ProductType &p) { return has_arrow(*p.left) || has_arrow(*p.right); },
                          [](const ExistsType &x) { return has_arrow(*x.body); },
                          [](const auto &) { return false; },
                      },
                      t.node);
}

int ref_depth(const Type &t) {
    return std::visit(overloaded{
                          [](const RefType &r) { return 1 + ref_depth(*r.content); },
                          [](const ArrowType &a) {
                              return std::max(ref_depth(*a.domain), ref_depth(*a.codomain));
                          },
                          [](const ProductType &p) {
                              return std::max(ref_depth(*p.left), ref_depth(*p.right));
                          },
                          [](const ExistsType &x) { return ref_depth(*x.body); },
                          [](const auto &) { return 0; },
                      },
                      t.node);
}

}  // namespace knot
