#include "knot/syntax.hpp"

#include "overloaded.hpp"

namespace knot {

using detail::overloaded;

namespace {

template <typename T>
TypePtr make_type(T node) {
    return std::make_shared<const Type>(Type{std::move(node)});
}

bool eq(const TypePtr &a, const TypePtr &b) { return *a == *b; }
bool eq(const TermPtr &a, const TermPtr &b) { return *a == *b; }

}  // namespace

TypePtr nat_type() {
    static const TypePtr t = make_type(NatType{});
    return t;
}

TypePtr unit_type() {
    static const TypePtr t = make_type(UnitType{});
    return t;
}

TypePtr arrow_type(TypePtr domain, TypePtr codomain, std::optional<Level> level) {
    return make_type(ArrowType{std::move(domain), std::move(codomain), level});
}

TypePtr ref_type(TypePtr content) { return make_type(RefType{std::move(content)}); }

TypePtr product_type(TypePtr left, TypePtr right) {
    return make_type(ProductType{std::move(left), std::move(right)});
}

TypePtr exists_type(std::string var, Level level, TypePtr body) {
    return make_type(ExistsType{std::move(var), level, std::move(body)});
}

TypePtr type_var(std::string name) { return make_type(TypeVar{std::move(name)}); }

bool operator==(const Type &a, const Type &b) {
    if (a.node.index() != b.node.index()) {
        return false;
    }
    return std::visit(
        overloaded{
            [](const NatType &) { return true; },
            [](const UnitType &) { return true; },
            [&](const ArrowType &x) {
                const auto &y = std::get<ArrowType>(b.node);
                return x.level == y.level && eq(x.domain, y.domain) &&
                       eq(x.codomain, y.codomain);
            },
            [&](const RefType &x) { return eq(x.content, std::get<RefType>(b.node).content); },
            [&](const ProductType &x) {
                const auto &y = std::get<ProductType>(b.node);
                return eq(x.left, y.left) && eq(x.right, y.right);
            },
            [&](const ExistsType &x) {
                const auto &y = std::get<ExistsType>(b.node);
                return x.var == y.var && x.level == y.level && eq(x.body, y.body);
            },
            [&](const TypeVar &x) { return x.name == std::get<TypeVar>(b.node).name; },
        },
        a.node);
}

TermPtr make_term(Term::Node node, SourceLoc loc) {
    return std::make_shared<const Term>(Term{std::move(node), loc});
}

bool operator==(const Term &a, const Term &b) {
    if (a.node.index() != b.node.index()) {
        return false;
    }
    return std::visit(
        overloaded{
            [&](const Var &x) { return x.name == std::get<Var>(b.node).name; },
            [&](const NatLit &x) { return x.value == std::get<NatLit>(b.node).value; },
            [](const UnitLit &) { return true; },
            [&](const Lam &x) {
                const auto &y = std::get<Lam>(b.node);
                return x.param == y.param && x.level == y.level &&
                       eq(x.param_type, y.param_type) && eq(x.body, y.body);
            },
            [&](const App &x) {
                const auto &y = std::get<App>(b.node);
                return eq(x.fun, y.fun) && eq(x.arg, y.arg);
            },
            [&](const New &x) { return eq(x.init, std::get<New>(b.node).init); },
            [&](const Deref &x) { return eq(x.ref, std::get<Deref>(b.node).ref); },
            [&](const Assign &x) {
                const auto &y = std::get<Assign>(b.node);
                return eq(x.ref, y.ref) && eq(x.value, y.value);
            },
            [&](const Seq &x) {
                const auto &y = std::get<Seq>(b.node);
                return eq(x.first, y.first) && eq(x.second, y.second);
            },
            [&](const Let &x) {
                const auto &y = std::get<Let>(b.node);
                return x.name == y.name && eq(x.bound, y.bound) && eq(x.body, y.body);
            },
            [&](const Tuple &x) {
                const auto &y = std::get<Tuple>(b.node);
                return eq(x.first, y.first) && eq(x.second, y.second);
            },
            [&](const Proj &x) {
                const auto &y = std::get<Proj>(b.node);
                return x.index == y.index && eq(x.tuple, y.tuple);
            },
            [&](const Pack &x) {
                const auto &y = std::get<Pack>(b.node);
                return eq(x.witness, y.witness) && eq(x.payload, y.payload) &&
                       eq(x.type, y.type);
            },
            [&](const Unpack &x) {
                const auto &y = std::get<Unpack>(b.node);
                return x.type_var == y.type_var && x.var == y.var &&
                       eq(x.package, y.package) && eq(x.body, y.body);
            },
            [&](const Code &x) {
                const auto &y = std::get<Code>(b.node);
                if (x.params.size() != y.params.size()) {
                    return false;
                }
                for (std::size_t i = 0; i < x.params.size(); ++i) {
                    if (x.params[i].name != y.params[i].name ||
                        !eq(x.params[i].type, y.params[i].type)) {
                        return false;
                    }
                }
                return eq(x.body, y.body);
            },
        },
        a.node);
}

namespace {

void collect_free(const Term &e, std::multiset<std::string> &bound, std::set<std::string> &out) {
    auto under = [&](const std::string &name, const TermPtr &body) {
        auto it = bound.insert(name);
        collect_free(*body, bound, out);
        bound.erase(it);
    };
    std::visit(overloaded{
                   [&](const Var &x) {
                       if (!bound.contains(x.name)) {
                           out.insert(x.name);
                       }
                   },
                   [](const NatLit &) {},
                   [](const UnitLit &) {},
                   [&](const Lam &x) { under(x.param, x.body); },
                   [&](const App &x) {
                       collect_free(*x.fun, bound, out);
                       collect_free(*x.arg, bound, out);
                   },
                   [&](const New &x) { collect_free(*x.init, bound, out); },
                   [&](const Deref &x) { collect_free(*x.ref, bound, out); },
                   [&](const Assign &x) {
                       collect_free(*x.ref, bound, out);
                       collect_free(*x.value, bound, out);
                   },
                   [&](const Seq &x) {
                       collect_free(*x.first, bound, out);
                       collect_free(*x.second, bound, out);
                   },
                   [&](const Let &x) {
                       collect_free(*x.bound, bound, out);
                       under(x.name, x.body);
                   },
                   [&](const Tuple &x) {
                       collect_free(*x.first, bound, out);
                       collect_free(*x.second, bound, out);
                   },
                   [&](const Proj &x) { collect_free(*x.tuple, bound, out); },
                   [&](const Pack &x) { collect_free(*x.payload, bound, out); },
                   [&](const Unpack &x) {
                       collect_free(*x.package, bound, out);
                       under(x.var, x.body);
                   },
                   [&](const Code &x) {
                       std::vector<std::multiset<std::string>::iterator> marks;
                       for (const auto &p : x.params) {
                           marks.push_back(bound.insert(p.name));
                       }
                       collect_free(*x.body, bound, out);
                       for (auto it : marks) {
                           bound.erase(it);
                       }
                   },
               },
               e.node);
}

void collect_free_types(const Type &t, std::multiset<std::string> &bound,
                        std::set<std::string> &out) {
    std::visit(overloaded{
                   [](const NatType &) {},
                   [](const UnitType &) {},
                   [&](const ArrowType &x) {
                       collect_free_types(*x.domain, bound, out);
                       collect_free_types(*x.codomain, bound, out);
                   },
                   [&](const RefType &x) { collect_free_types(*x.content, bound, out); },
                   [&](const ProductType &x) {
                       collect_free_types(*x.left, bound, out);
                       collect_free_types(*x.right, bound, out);
                   },
                   [&](const ExistsType &x) {
                       auto it = bound.insert(x.var);
                       collect_free_types(*x.body, bound, out);
                       bound.erase(it);
                   },
                   [&](const TypeVar &x) {
                       if (!bound.contains(x.name)) {
                           out.insert(x.name);
                       }
                   },
               },
               t.node);
}

template <typename F>
void for_each_child(const Term &e, F &&f) {
    std::visit(overloaded{
                   [](const Var &) {},
                   [](const NatLit &) {},
                   [](const UnitLit &) {},
                   [&](const Lam &x) { f(*x.body); },
                   [&](const App &x) { f(*x.fun); f(*x.arg); },
                   [&](const New &x) { f(*x.init); },
                   [&](const Deref &x) { f(*x.ref); },
                   [&](const Assign &x) { f(*x.ref); f(*x.value); },
                   [&](const Seq &x) { f(*x.first); f(*x.second); },
                   [&](const Let &x) { f(*x.bound); f(*x.body); },
                   [&](const Tuple &x) { f(*x.first); f(*x.second); },
                   [&](const Proj &x) { f(*x.tuple); },
                   [&](const Pack &x) { f(*x.payload); },
                   [&](const Unpack &x) { f(*x.package); f(*x.body); },
                   [&](const Code &x) { f(*x.body); },
               },
               e.node);
}

}  // namespace

std::set<std::string> free_vars(const Term &e) {
    std::multiset<std::string> bound;
    std::set<std::string> out;
    collect_free(e, bound, out);
    return out;
}

std::set<std::string> free_type_vars(const Type &t) {
    std::multiset<std::string> bound;
    std::set<std::string> out;
    collect_free_types(t, bound, out);
    return out;
}

bool uses_target_constructs(const Term &e) {
    if (e.is<Pack>() || e.is<Unpack>() || e.is<Code>()) {
        return true;
    }
    bool found = false;
    for_each_child(e, [&](const Term &child) { found = found || uses_target_constructs(child); });
    return found;
}

std::size_t term_size(const Term &e) {
    std::size_t n = 1;
    for_each_child(e, [&](const Term &child) { n += term_size(child); });
    return n;
}

}  // namespace knot
