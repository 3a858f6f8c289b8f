#include "knot/eval.hpp"

#include "knot/pretty.hpp"
#include "overloaded.hpp"

#include <optional>
#include <stdexcept>

namespace knot {

using detail::overloaded;

Env Env::bind(std::string name, ValuePtr value) const {
    Env out;
    out.head_ = std::make_shared<const Node>(Node{std::move(name), std::move(value), head_});
    return out;
}

const ValuePtr *Env::lookup(std::string_view name) const {
    for (const Node *n = head_.get(); n; n = n->next.get()) {
        if (n->name == name) {
            return &n->value;
        }
    }
    return nullptr;
}

namespace {

ValuePtr make_value(decltype(Value::node) node) {
    return std::make_shared<const Value>(Value{std::move(node)});
}

// Continuation frames. Each remembers the term it belongs to so that the
// step it eventually performs can be reported against that redex.
struct AppFun {
    TermPtr app;
    Env env;
};
struct AppArg {
    TermPtr app;
    ValuePtr fun;
};
struct NewFrame {
    TermPtr term;
};
struct DerefFrame {
    TermPtr term;
};
struct AssignRef {
    TermPtr term;
    Env env;
};
struct AssignVal {
    TermPtr term;
    ValuePtr ref;
};
struct SeqFrame {
    TermPtr term;
    Env env;
};
struct LetFrame {
    TermPtr term;
    Env env;
};
struct TupleFst {
    TermPtr term;
    Env env;
};
struct TupleSnd {
    ValuePtr first;
};
struct ProjFrame {
    TermPtr term;
};
struct PackFrame {
    TermPtr term;
};
struct UnpackFrame {
    TermPtr term;
    Env env;
};

using Frame = std::variant<AppFun, AppArg, NewFrame, DerefFrame, AssignRef, AssignVal, SeqFrame,
                           LetFrame, TupleFst, TupleSnd, ProjFrame, PackFrame, UnpackFrame>;

class Machine {
public:
    Machine(std::uint64_t fuel, std::vector<StepRecord> *records, std::size_t limit)
        : fuel_(fuel), records_(records), limit_(limit) {
        if (fuel == 0) {
            throw std::invalid_argument("fuel must be at least 1");
        }
    }

    Outcome run(const TermPtr &program) {
        term_ = program;
        env_ = Env{};
        evaluating_ = true;
        while (true) {
            std::optional<Outcome> done = evaluating_ ? eval_step() : return_step();
            if (done) {
                return std::move(*done);
            }
        }
    }

private:
    // Either a final outcome or nothing (keep going).
    using Step = std::optional<Outcome>;

    Step stuck(std::string description, const TermPtr &redex) {
        return Outcome{Stuck{std::move(description), redex, used_}};
    }

    // Consumes one unit of fuel; false when the budget is spent.
    bool tick(const char *rule, const TermPtr &redex, std::vector<std::size_t> touched = {}) {
        if (used_ == fuel_) {
            return false;
        }
        ++used_;
        if (records_ && records_->size() < limit_) {
            records_->push_back(StepRecord{used_, rule, store_.size(), std::move(touched),
                                           pretty(*redex)});
        }
        return true;
    }

    // After a tick that changes the store, the record's size must reflect it.
    void note_store_size() {
        if (records_ && !records_->empty() && records_->back().index == used_) {
            records_->back().store_size = store_.size();
        }
    }

    Step exhausted() { return Outcome{FuelExhausted{used_}}; }

    void eval(TermPtr t, Env env) {
        term_ = std::move(t);
        env_ = std::move(env);
        evaluating_ = true;
    }

    void give(ValuePtr v) {
        value_ = std::move(v);
        evaluating_ = false;
    }

    Step eval_step() {
        const TermPtr t = term_;
        return std::visit(
            overloaded{
                [&](const Var &v) -> Step {
                    const ValuePtr *found = env_.lookup(v.name);
                    if (!found) {
                        return stuck("unbound variable " + v.name, t);
                    }
                    give(*found);
                    return {};
                },
                [&](const NatLit &n) -> Step {
                    give(make_value(NumValue{n.value}));
                    return {};
                },
                [&](const UnitLit &) -> Step {
                    give(make_value(UnitValue{}));
                    return {};
                },
                [&](const Lam &) -> Step {
                    give(make_value(ClosureValue{t, env_}));
                    return {};
                },
                [&](const Code &) -> Step {
                    give(make_value(CodeValue{t, {}}));
                    return {};
                },
                [&](const App &a) -> Step {
                    stack_.push_back(AppFun{t, env_});
                    term_ = a.fun;
                    return {};
                },
                [&](const New &n) -> Step {
                    stack_.push_back(NewFrame{t});
                    term_ = n.init;
                    return {};
                },
                [&](const Deref &d) -> Step {
                    stack_.push_back(DerefFrame{t});
                    term_ = d.ref;
                    return {};
                },
                [&](const Assign &a) -> Step {
                    stack_.push_back(AssignRef{t, env_});
                    term_ = a.ref;
                    return {};
                },
                [&](const Seq &s) -> Step {
                    stack_.push_back(SeqFrame{t, env_});
                    term_ = s.first;
                    return {};
                },
                [&](const Let &l) -> Step {
                    stack_.push_back(LetFrame{t, env_});
                    term_ = l.bound;
                    return {};
                },
                [&](const Tuple &p) -> Step {
                    stack_.push_back(TupleFst{t, env_});
                    term_ = p.first;
                    return {};
                },
                [&](const Proj &p) -> Step {
                    stack_.push_back(ProjFrame{t});
                    term_ = p.tuple;
                    return {};
                },
                [&](const Pack &p) -> Step {
                    stack_.push_back(PackFrame{t});
                    term_ = p.payload;
                    return {};
                },
                [&](const Unpack &u) -> Step {
                    stack_.push_back(UnpackFrame{t, env_});
                    term_ = u.package;
                    return {};
                },
            },
            t->node);
    }

    Step return_step() {
        if (stack_.empty()) {
            return Outcome{Result{value_, std::move(store_), used_}};
        }
        Frame frame = std::move(stack_.back());
        stack_.pop_back();
        ValuePtr v = value_;
        return std::visit(
            overloaded{
                [&](AppFun &f) -> Step {
                    stack_.push_back(AppArg{f.app, v});
                    eval(f.app->as<App>()->arg, std::move(f.env));
                    return {};
                },
                [&](AppArg &f) -> Step { return apply(f.app, f.fun, v); },
                [&](NewFrame &f) -> Step {
                    if (!tick("alloc", f.term, {store_.size()})) {
                        return exhausted();
                    }
                    store_.push_back(v);
                    note_store_size();
                    give(make_value(LocValue{store_.size() - 1}));
                    return {};
                },
                [&](DerefFrame &f) -> Step {
                    const auto *loc = v->as<LocValue>();
                    if (!loc || loc->index >= store_.size()) {
                        return stuck("dereference of a non-location " + show(*v), f.term);
                    }
                    if (!tick("deref", f.term, {loc->index})) {
                        return exhausted();
                    }
                    give(store_[loc->index]);
                    return {};
                },
                [&](AssignRef &f) -> Step {
                    stack_.push_back(AssignVal{f.term, v});
                    eval(f.term->as<Assign>()->value, std::move(f.env));
                    return {};
                },
                [&](AssignVal &f) -> Step {
                    const auto *loc = f.ref->as<LocValue>();
                    if (!loc || loc->index >= store_.size()) {
                        return stuck("assignment to a non-location " + show(*f.ref), f.term);
                    }
                    if (!tick("assign", f.term, {loc->index})) {
                        return exhausted();
                    }
                    store_[loc->index] = v;
                    give(make_value(UnitValue{}));
                    return {};
                },
                [&](SeqFrame &f) -> Step {
                    eval(f.term->as<Seq>()->second, std::move(f.env));
                    return {};
                },
                [&](LetFrame &f) -> Step {
                    if (!tick("let", f.term)) {
                        return exhausted();
                    }
                    const auto *l = f.term->as<Let>();
                    eval(l->body, f.env.bind(l->name, v));
                    return {};
                },
                [&](TupleFst &f) -> Step {
                    stack_.push_back(TupleSnd{v});
                    eval(f.term->as<Tuple>()->second, std::move(f.env));
                    return {};
                },
                [&](TupleSnd &f) -> Step {
                    give(make_value(TupleValue{f.first, v}));
                    return {};
                },
                [&](ProjFrame &f) -> Step {
                    const auto *tuple = v->as<TupleValue>();
                    if (!tuple) {
                        return stuck("projection from a non-tuple " + show(*v), f.term);
                    }
                    if (!tick("proj", f.term)) {
                        return exhausted();
                    }
                    give(f.term->as<Proj>()->index == 1 ? tuple->first : tuple->second);
                    return {};
                },
                [&](PackFrame &f) -> Step {
                    give(make_value(PackageValue{f.term->as<Pack>()->witness, v}));
                    return {};
                },
                [&](UnpackFrame &f) -> Step {
                    const auto *package = v->as<PackageValue>();
                    if (!package) {
                        return stuck("unpack of a non-package " + show(*v), f.term);
                    }
                    if (!tick("unpack", f.term)) {
                        return exhausted();
                    }
                    const auto *u = f.term->as<Unpack>();
                    eval(u->body, f.env.bind(u->var, package->payload));
                    return {};
                },
            },
            frame);
    }

    Step apply(const TermPtr &app, const ValuePtr &fun, const ValuePtr &arg) {
        if (const auto *closure = fun->as<ClosureValue>()) {
            if (!tick("beta", app)) {
                return exhausted();
            }
            const auto *lam = closure->lambda->as<Lam>();
            eval(lam->body, closure->env.bind(lam->param, arg));
            return {};
        }
        if (const auto *code = fun->as<CodeValue>()) {
            const auto *c = code->code->as<Code>();
            std::vector<ValuePtr> args = code->args;
            args.push_back(arg);
            if (args.size() < c->params.size()) {
                give(make_value(CodeValue{code->code, std::move(args)}));
                return {};
            }
            if (!tick("beta", app)) {
                return exhausted();
            }
            // Code runs in an environment holding only its parameters.
            Env env;
            for (std::size_t i = 0; i < args.size(); ++i) {
                env = env.bind(c->params[i].name, args[i]);
            }
            eval(c->body, std::move(env));
            return {};
        }
        return stuck("application of a non-function " + show(*fun), app);
    }

    std::uint64_t fuel_;
    std::uint64_t used_ = 0;
    std::vector<StepRecord> *records_;
    std::size_t limit_;

    Store store_;
    std::vector<Frame> stack_;
    bool evaluating_ = true;
    TermPtr term_;
    Env env_;
    ValuePtr value_;
};

}  // namespace

Outcome eval_source(const TermPtr &e, std::uint64_t fuel) { return Machine(fuel, nullptr, 0).run(e); }

Outcome eval_target(const TermPtr &e, std::uint64_t fuel) { return Machine(fuel, nullptr, 0).run(e); }

Trace trace(const TermPtr &e, std::uint64_t fuel, std::size_t limit) {
    Trace out;
    out.outcome = Machine(fuel, &out.steps, limit).run(e);
    return out;
}

std::string show(const Value &v) {
    return std::visit(overloaded{
                          [](const NumValue &n) { return n.value.str(); },
                          [](const UnitValue &) { return std::string("unit"); },
                          [](const LocValue &l) { return "loc#" + std::to_string(l.index); },
                          [](const ClosureValue &) { return std::string("<closure>"); },
                          [](const TupleValue &t) {
                              return "<" + show(*t.first) + ", " + show(*t.second) + ">";
                          },
                          [](const PackageValue &) { return std::string("<package>"); },
                          [](const CodeValue &) { return std::string("<code>"); },
                      },
                      v.node);
}

std::string render(const StepRecord &r) {
    std::string touched;
    for (std::size_t loc : r.touched) {
        touched += (touched.empty() ? "" : ",") + std::to_string(loc);
    }
    return std::to_string(r.index) + "\t" + r.rule + "\t" + std::to_string(r.store_size) + "\t" +
           (touched.empty() ? "-" : touched);
}

}  // namespace knot
