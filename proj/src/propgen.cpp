#include "knot/propgen.hpp"

#include "knot/sorts.hpp"
#include "knot/type_ops.hpp"
#include "knot/typecheck.hpp"
#include "overloaded.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace knot {

using detail::overloaded;

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) {
        return {};
    }
    auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

std::uint64_t to_number(const std::string &key, const std::string &value) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("config: " + key + " needs a number, got '" + value + "'");
    }
    return out;
}

}  // namespace

GenConfig parse_gen_config(std::string_view text, GenConfig cfg) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected key = value, got '" + line + "'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        GenWeights &w = cfg.weights;
        std::pair<const char *, unsigned *> weights[] = {
            {"w_var", &w.var},       {"w_literal", &w.literal}, {"w_lambda", &w.lambda},
            {"w_app", &w.app},       {"w_let", &w.let},         {"w_alloc", &w.alloc},
            {"w_deref", &w.deref},   {"w_assign", &w.assign},   {"w_seq", &w.seq},
            {"w_tuple", &w.tuple},   {"w_proj", &w.proj},
        };
        if (key == "seed") {
            cfg.seed = to_number(key, value);
        } else if (key == "max_depth") {
            cfg.max_depth = static_cast<unsigned>(to_number(key, value));
            if (cfg.max_depth > 8) {
                throw std::invalid_argument("config: max_depth is at most 8");
            }
        } else if (key == "max_allocs") {
            cfg.max_allocs = static_cast<unsigned>(to_number(key, value));
        } else if (key == "level_cap") {
            cfg.level_cap = static_cast<Level>(to_number(key, value));
            if (cfg.level_cap > 3) {
                throw std::invalid_argument("config: level_cap is at most 3");
            }
        } else if (key == "mode") {
            auto mode = parse_mode(value);
            if (!mode) {
                throw std::invalid_argument("config: unknown mode '" + value + "'");
            }
            cfg.mode = *mode;
        } else {
            auto it = std::find_if(std::begin(weights), std::end(weights),
                                   [&](const auto &kw) { return key == kw.first; });
            if (it == std::end(weights)) {
                throw std::invalid_argument("config: unknown key '" + key + "'");
            }
            *it->second = static_cast<unsigned>(to_number(key, value));
        }
    }
    return cfg;
}

namespace {

// No production fits; the caller tries another or gives up on the attempt.
struct NoFit {};

// The attempt has done too much work backtracking; start a new one.
struct GiveUp {};

struct Binding {
    std::string name;
    TypePtr type;
    Level level;
};

using Scope = std::vector<Binding>;

constexpr int kAttempts = 50;
constexpr unsigned kWork = 5000;

enum class Prod { Var, Literal, Lambda, App, Let, Alloc, Deref, Assign, Seq, Tuple, Proj };

class Generator {
public:
    Generator(const GenConfig &cfg, std::mt19937_64 &rng) : cfg_(cfg), rng_(rng) {}

    TermPtr program() {
        TypePtr goal;
        if (cfg_.max_depth == 0) {
            goal = coin() ? nat_type() : unit_type();
        } else {
            goal = coin() ? nat_type() : random_type({}, 3, false);
        }
        return gen({}, goal, cfg_.max_depth);
    }

private:
    bool sorted() const { return cfg_.mode == Mode::Sorted; }

    bool coin() { return pick(2) == 0; }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    // Outside SORTED, arrows count as level 0 for the level cap.
    Level level_of(const TypePtr &t) const {
        return sort_of_source({}, sorted() ? *t : *default_levels(t, 0));
    }

    // Whether Ref content stays within the level cap, both by sort and by
    // syntactic Ref nesting (arrows hide the latter from the sort).
    bool fits_cap(const TypePtr &content) const {
        return level_of(content) + 1 <= cfg_.level_cap &&
               static_cast<Level>(ref_depth(*content)) + 1 <= cfg_.level_cap;
    }

    TypePtr arrow(TypePtr a, TypePtr b, Level j) const {
        return arrow_type(std::move(a), std::move(b), sorted() ? std::optional<Level>(j) : std::nullopt);
    }

    bool same_type(const TypePtr &a, const TypePtr &b) const {
        return equivalent(*a, *b, sorted() ? LevelCheck::Exact : LevelCheck::Ignore);
    }

    // Levels an arrow may be given: 0, plus any level a variable in scope has.
    std::vector<Level> arrow_levels(const Scope &scope) const {
        std::vector<Level> out{0};
        if (sorted()) {
            for (const auto &b : scope) {
                if (b.level <= cfg_.level_cap && std::find(out.begin(), out.end(), b.level) == out.end()) {
                    out.push_back(b.level);
                }
            }
        }
        return out;
    }

    // `param` types are written unannotated, so SORTED reads their arrows at
    // level 0.
    TypePtr random_type(const Scope &scope, int size, bool param) {
        std::vector<int> choices{0, 0, 1};
        if (size > 0) {
            choices.insert(choices.end(), {2, 3, 4});
        }
        for (int attempt = 0; attempt < 8; ++attempt) {
            switch (choices[pick(choices.size())]) {
            case 0:
                return nat_type();
            case 1:
                return unit_type();
            case 2: {
                if (allocs_ >= cfg_.max_allocs) {
                    break;
                }
                TypePtr content = random_type(scope, size - 1, param);
                if (fits_cap(content)) {
                    return ref_type(content);
                }
                break;
            }
            case 3:
                return product_type(random_type(scope, size - 1, param),
                                    random_type(scope, size - 1, param));
            case 4: {
                auto levels = param ? std::vector<Level>{0} : arrow_levels(scope);
                Level j = levels[pick(levels.size())];
                return arrow(random_type(scope, size - 1, true), random_type(scope, size - 1, param), j);
            }
            }
        }
        return nat_type();
    }

    std::string fresh(char prefix) { return prefix + std::to_string(counter_++); }

    // Cheap necessary condition once the allocation budget is spent: every
    // Ref the goal demands outside a lambda must come from a variable.
    bool inhabitable(const Scope &scope, const TypePtr &goal) const {
        if (allocs_ < cfg_.max_allocs || goal->is<NatType>() || goal->is<UnitType>()) {
            return true;
        }
        for (const auto &b : scope) {
            if (same_type(b.type, goal)) {
                return true;
            }
        }
        if (const auto *p = goal->as<ProductType>()) {
            return inhabitable(scope, p->left) && inhabitable(scope, p->right);
        }
        if (const auto *a = goal->as<ArrowType>()) {
            Scope inner = scope;
            inner.push_back({"", a->domain, 0});
            return inhabitable(inner, a->codomain);
        }
        return false;
    }

    TermPtr gen(const Scope &scope, const TypePtr &goal, unsigned depth) {
        if (!inhabitable(scope, goal)) {
            throw NoFit{};
        }
        if (depth == 0) {
            if (auto v = pick_var(scope, goal)) {
                return v;
            }
            return canonical(scope, goal);
        }
        std::vector<std::pair<Prod, unsigned>> table = productions(goal);
        while (!table.empty()) {
            unsigned total = 0;
            for (const auto &[p, w] : table) {
                total += w;
            }
            if (total == 0) {
                break;
            }
            unsigned roll = static_cast<unsigned>(pick(total));
            std::size_t i = 0;
            for (; roll >= table[i].second; ++i) {
                roll -= table[i].second;
            }
            Prod p = table[i].first;
            table.erase(table.begin() + static_cast<std::ptrdiff_t>(i));
            if (++work_ > kWork) {
                throw GiveUp{};
            }
            unsigned allocs = allocs_;
            try {
                return produce(p, scope, goal, depth);
            } catch (const NoFit &) {
                allocs_ = allocs;
            }
        }
        return canonical(scope, goal);
    }

    std::vector<std::pair<Prod, unsigned>> productions(const TypePtr &goal) const {
        const GenWeights &w = cfg_.weights;
        std::vector<std::pair<Prod, unsigned>> out{
            {Prod::Var, w.var}, {Prod::App, w.app}, {Prod::Let, w.let},
            {Prod::Deref, w.deref}, {Prod::Seq, w.seq}, {Prod::Proj, w.proj},
        };
        if (goal->is<NatType>()) {
            out.emplace_back(Prod::Literal, w.literal);
        }
        if (goal->is<UnitType>()) {
            out.emplace_back(Prod::Literal, w.literal);
            out.emplace_back(Prod::Assign, w.assign);
        }
        if (goal->is<ArrowType>()) {
            out.emplace_back(Prod::Lambda, w.lambda);
        }
        if (goal->is<RefType>()) {
            out.emplace_back(Prod::Alloc, w.alloc);
        }
        if (goal->is<ProductType>()) {
            out.emplace_back(Prod::Tuple, w.tuple);
        }
        return out;
    }

    TermPtr pick_var(const Scope &scope, const TypePtr &goal) {
        std::vector<const Binding *> fits;
        for (const auto &b : scope) {
            if (same_type(b.type, goal)) {
                fits.push_back(&b);
            }
        }
        if (fits.empty()) {
            return nullptr;
        }
        return make_term(Var{fits[pick(fits.size())]->name});
    }

    Scope bind(Scope scope, const std::string &name, const TypePtr &type) const {
        // Shadowed names leave the scope so lookups stay unambiguous.
        std::erase_if(scope, [&](const Binding &b) { return b.name == name; });
        scope.push_back({name, type, level_of(type)});
        return scope;
    }

    TermPtr produce(Prod p, const Scope &scope, const TypePtr &goal, unsigned depth) {
        switch (p) {
        case Prod::Var:
            if (auto v = pick_var(scope, goal)) {
                return v;
            }
            throw NoFit{};
        case Prod::Literal:
            if (goal->is<NatType>()) {
                return make_term(NatLit{Natural(pick(10))});
            }
            return make_term(UnitLit{});
        case Prod::Lambda: {
            const auto *a = goal->as<ArrowType>();
            return lambda(scope, *a, [&](const Scope &inner) { return gen(inner, a->codomain, depth - 1); });
        }
        case Prod::App: {
            auto levels = arrow_levels(scope);
            TypePtr param = random_type(scope, 2, true);
            TypePtr fun_type = arrow(param, goal, levels[pick(levels.size())]);
            TermPtr fun = gen(scope, fun_type, depth - 1);
            TermPtr arg = gen(scope, param, depth - 1);
            return make_term(App{fun, arg});
        }
        case Prod::Let: {
            TypePtr bound_type = random_type(scope, 2, false);
            std::string name = fresh('v');
            TermPtr bound = gen(scope, bound_type, depth - 1);
            TermPtr body = gen(bind(scope, name, bound_type), goal, depth - 1);
            return make_term(Let{name, bound, body});
        }
        case Prod::Alloc: {
            if (allocs_ >= cfg_.max_allocs) {
                throw NoFit{};
            }
            ++allocs_;
            return make_term(New{gen(scope, goal->as<RefType>()->content, depth - 1)});
        }
        case Prod::Deref:
            if (!fits_cap(goal)) {
                throw NoFit{};
            }
            return make_term(Deref{gen(scope, ref_type(goal), depth - 1)});
        case Prod::Assign: {
            TypePtr content = random_type(scope, 2, false);
            if (!fits_cap(content)) {
                throw NoFit{};
            }
            TermPtr ref = gen(scope, ref_type(content), depth - 1);
            TermPtr value = gen(scope, content, depth - 1);
            return make_term(Assign{ref, value});
        }
        case Prod::Seq: {
            TermPtr first = gen(scope, unit_type(), depth - 1);
            return make_term(Seq{first, gen(scope, goal, depth - 1)});
        }
        case Prod::Tuple: {
            const auto *prod = goal->as<ProductType>();
            TermPtr first = gen(scope, prod->left, depth - 1);
            return make_term(Tuple{first, gen(scope, prod->right, depth - 1)});
        }
        case Prod::Proj: {
            TypePtr other = random_type(scope, 1, false);
            int index = coin() ? 1 : 2;
            TypePtr tuple = index == 1 ? product_type(goal, other) : product_type(other, goal);
            return make_term(Proj{index, gen(scope, tuple, depth - 1)});
        }
        }
        throw NoFit{};
    }

    // lam x : A . body, with the scope cut down to what the discipline lets
    // the lambda capture. In SORTED the captured levels must reach the
    // arrow's level exactly; `let dN = v in` pulls in a witness if needed.
    template <typename Body>
    TermPtr lambda(const Scope &scope, const ArrowType &a, Body &&make_body) {
        Level j = sorted() ? a.level.value_or(0) : 0;
        Scope inner;
        for (const auto &b : scope) {
            bool ok = cfg_.mode == Mode::Unrestricted ||
                      (cfg_.mode == Mode::FullGround && is_full_ground(*b.type)) ||
                      (sorted() && b.level <= j);
            if (ok) {
                inner.push_back(b);
            }
        }
        std::string param = fresh('x');
        TermPtr body = make_body(bind(inner, param, a.domain));
        if (sorted()) {
            Level reached = 0;
            for (const auto &name : free_vars(*body)) {
                if (name == param) {
                    continue;
                }
                for (const auto &b : inner) {
                    if (b.name == name) {
                        reached = std::max(reached, b.level);
                    }
                }
            }
            if (reached < j) {
                std::vector<const Binding *> witnesses;
                for (const auto &b : inner) {
                    if (b.level == j) {
                        witnesses.push_back(&b);
                    }
                }
                if (witnesses.empty()) {
                    throw NoFit{};
                }
                body = make_term(Let{fresh('d'), make_term(Var{witnesses[pick(witnesses.size())]->name}), body});
            }
        }
        // Annotations stay off; SORTED reads the arrows in them at level 0.
        return make_term(Lam{param, erase_levels(a.domain), body, std::nullopt});
    }

    // Smallest inhabitant, preferring a variable of the right type.
    TermPtr canonical(const Scope &scope, const TypePtr &goal) {
        if (auto v = pick_var(scope, goal)) {
            return v;
        }
        return std::visit(
            overloaded{
                [&](const NatType &) { return make_term(NatLit{Natural(0)}); },
                [&](const UnitType &) { return make_term(UnitLit{}); },
                [&](const ProductType &p) {
                    TermPtr first = canonical(scope, p.left);
                    return make_term(Tuple{first, canonical(scope, p.right)});
                },
                [&](const RefType &r) {
                    if (allocs_ >= cfg_.max_allocs) {
                        throw NoFit{};
                    }
                    ++allocs_;
                    return make_term(New{canonical(scope, r.content)});
                },
                [&](const ArrowType &a) {
                    return lambda(scope, a, [&](const Scope &inner) { return canonical(inner, a.codomain); });
                },
                [&](const auto &) -> TermPtr { throw NoFit{}; },
            },
            goal->node);
    }

    const GenConfig &cfg_;
    std::mt19937_64 &rng_;
    unsigned counter_ = 0;
    unsigned allocs_ = 0;
    unsigned work_ = 0;
};

}  // namespace

TermPtr generate(const GenConfig &cfg) {
    std::mt19937_64 rng(cfg.seed);
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        Generator gen(cfg, rng);
        try {
            TermPtr e = gen.program();
            typecheck_source(e, cfg.mode);
            return e;
        } catch (const NoFit &) {
        } catch (const GiveUp &) {
        } catch (const TypeError &) {
        }
    }
    return make_term(NatLit{Natural(0)});
}

// ------------------------------
// shrinking
// ------------------------------

namespace {

std::vector<TermPtr> children(const Term &e) {
    return std::visit(
        overloaded{
            [](const Lam &l) { return std::vector<TermPtr>{l.body}; },
            [](const App &a) { return std::vector<TermPtr>{a.fun, a.arg}; },
            [](const New &n) { return std::vector<TermPtr>{n.init}; },
            [](const Deref &d) { return std::vector<TermPtr>{d.ref}; },
            [](const Assign &a) { return std::vector<TermPtr>{a.ref, a.value}; },
            [](const Seq &s) { return std::vector<TermPtr>{s.first, s.second}; },
            [](const Let &l) { return std::vector<TermPtr>{l.bound, l.body}; },
            [](const Tuple &t) { return std::vector<TermPtr>{t.first, t.second}; },
            [](const Proj &p) { return std::vector<TermPtr>{p.tuple}; },
            [](const Pack &p) { return std::vector<TermPtr>{p.payload}; },
            [](const Unpack &u) { return std::vector<TermPtr>{u.package, u.body}; },
            [](const Code &c) { return std::vector<TermPtr>{c.body}; },
            [](const auto &) { return std::vector<TermPtr>{}; },
        },
        e.node);
}

TermPtr with_children(const TermPtr &e, const std::vector<TermPtr> &k) {
    Term::Node node = std::visit(
        overloaded{
            [&](const Lam &l) -> Term::Node { return Lam{l.param, l.param_type, k[0], l.level}; },
            [&](const App &) -> Term::Node { return App{k[0], k[1]}; },
            [&](const New &) -> Term::Node { return New{k[0]}; },
            [&](const Deref &) -> Term::Node { return Deref{k[0]}; },
            [&](const Assign &) -> Term::Node { return Assign{k[0], k[1]}; },
            [&](const Seq &) -> Term::Node { return Seq{k[0], k[1]}; },
            [&](const Let &l) -> Term::Node { return Let{l.name, k[0], k[1]}; },
            [&](const Tuple &) -> Term::Node { return Tuple{k[0], k[1]}; },
            [&](const Proj &p) -> Term::Node { return Proj{p.index, k[0]}; },
            [&](const Pack &p) -> Term::Node { return Pack{p.witness, k[0], p.type}; },
            [&](const Unpack &u) -> Term::Node { return Unpack{u.type_var, u.var, k[0], k[1]}; },
            [&](const Code &c) -> Term::Node { return Code{c.params, k[0]}; },
            [&](const auto &) -> Term::Node { return e->node; },
        },
        e->node);
    return make_term(std::move(node), e->loc);
}

// Simplifications of the root node alone.
std::vector<TermPtr> local_candidates(const TermPtr &e) {
    std::vector<TermPtr> out = children(*e);
    if (const auto *n = e->as<NatLit>(); n && n->value > 0) {
        out.push_back(make_term(NatLit{Natural(0)}, e->loc));
        if (n->value > 1) {
            out.push_back(make_term(NatLit{Natural(n->value / 2)}, e->loc));
        }
    }
    return out;
}

// Every term obtained by simplifying exactly one node, outermost first.
void candidates(const TermPtr &e, std::vector<TermPtr> &out) {
    for (auto &c : local_candidates(e)) {
        out.push_back(std::move(c));
    }
    auto kids = children(*e);
    for (std::size_t i = 0; i < kids.size(); ++i) {
        std::vector<TermPtr> inner;
        candidates(kids[i], inner);
        for (auto &c : inner) {
            auto replaced = kids;
            replaced[i] = std::move(c);
            out.push_back(with_children(e, replaced));
        }
    }
}

Natural literal_mass(const Term &e) {
    Natural total = 0;
    if (const auto *n = e.as<NatLit>()) {
        total += n->value;
    }
    for (const auto &c : children(e)) {
        total += literal_mass(*c);
    }
    return total;
}

bool smaller(const TermPtr &a, const TermPtr &b) {
    auto sa = term_size(*a);
    auto sb = term_size(*b);
    return sa < sb || (sa == sb && literal_mass(*a) < literal_mass(*b));
}

}  // namespace

TermPtr shrink(const TermPtr &e, const std::function<bool(const TermPtr &)> &failing) {
    TermPtr current = e;
    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<TermPtr> next;
        candidates(current, next);
        for (const auto &c : next) {
            if (smaller(c, current) && failing(c)) {
                current = c;
                progress = true;
                break;
            }
        }
    }
    return current;
}

}  // namespace knot
