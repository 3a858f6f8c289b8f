#include "knot/pretty.hpp"

#include "overloaded.hpp"

namespace knot {

using detail::overloaded;

namespace {

// Precedence of the grammar nonterminal a position accepts.
enum Prec { TermLevel = 0, AssignLevel = 1, AppLevel = 2, AtomLevel = 3 };

void print_type(const Type &t, bool atomic, std::string &out);

void print_btype(const TypePtr &t, std::string &out) { print_type(*t, true, out); }

void print_type(const Type &t, bool atomic, std::string &out) {
    std::visit(overloaded{
                   [&](const NatType &) { out += "Nat"; },
                   [&](const UnitType &) { out += "Unit"; },
                   [&](const TypeVar &v) { out += v.name; },
                   [&](const ProductType &p) {
                       out += "<";
                       print_type(*p.left, true, out);
                       out += " x ";
                       print_type(*p.right, true, out);
                       out += ">";
                   },
                   [&](const RefType &r) {
                       out += "Ref ";
                       // Ref argument is a btype; parenthesise anything with a keyword head.
                       if (r.content->is<RefType>()) {
                           out += "(";
                           print_type(*r.content, false, out);
                           out += ")";
                       } else {
                           print_btype(r.content, out);
                       }
                   },
                   [&](const ArrowType &a) {
                       if (atomic) {
                           out += "(";
                       }
                       print_btype(a.domain, out);
                       out += " ->";
                       if (a.level) {
                           out += "[" + std::to_string(*a.level) + "]";
                       }
                       out += " ";
                       print_type(*a.codomain, false, out);
                       if (atomic) {
                           out += ")";
                       }
                   },
                   [&](const ExistsType &x) {
                       if (atomic) {
                           out += "(";
                       }
                       out += "exists " + x.var + " : Type " + std::to_string(x.level) + " . ";
                       print_type(*x.body, false, out);
                       if (atomic) {
                           out += ")";
                       }
                   },
               },
               t.node);
}

class Printer {
public:
    explicit Printer(PrettyOptions opts) : opts_(opts) {}

    std::string run(const Term &e) {
        print(e, TermLevel, true);
        return std::move(out_);
    }

private:
    void newline() {
        if (opts_.multiline) {
            out_ += "\n";
        } else {
            out_ += " ";
        }
    }

    // `statement` is true where a multi-line layout may break the chain.
    void print(const Term &e, Prec prec, bool statement = false) {
        std::visit(overloaded{
                       [&](const Var &x) { out_ += x.name; },
                       [&](const NatLit &n) { out_ += n.value.str(); },
                       [&](const UnitLit &) { out_ += "unit"; },
                       [&](const Lam &l) {
                           open(prec, TermLevel);
                           out_ += "lam ";
                           if (l.level) {
                               out_ += "[" + std::to_string(*l.level) + "] ";
                           }
                           out_ += l.param + " : ";
                           print_type(*l.param_type, false, out_);
                           out_ += " . ";
                           print(*l.body, TermLevel);
                           close(prec, TermLevel);
                       },
                       [&](const Code &c) {
                           open(prec, TermLevel);
                           for (const auto &p : c.params) {
                               out_ += "lam " + p.name + " : ";
                               print_type(*p.type, false, out_);
                               out_ += " . ";
                           }
                           // A body that is itself a lambda must not merge into this run.
                           bool fence = c.body->is<Code>() || c.body->is<Lam>();
                           print(*c.body, fence ? AtomLevel : TermLevel);
                           close(prec, TermLevel);
                       },
                       [&](const Let &l) {
                           bool stmt = statement && prec == TermLevel;
                           open(prec, TermLevel);
                           out_ += "let " + l.name + " = ";
                           print(*l.bound, TermLevel);
                           out_ += " in";
                           stmt ? newline() : void(out_ += " ");
                           print(*l.body, TermLevel, stmt);
                           close(prec, TermLevel);
                       },
                       [&](const Unpack &u) {
                           bool stmt = statement && prec == TermLevel;
                           open(prec, TermLevel);
                           out_ += "unpack <" + u.type_var + ", " + u.var + "> = ";
                           print(*u.package, TermLevel);
                           out_ += " in";
                           stmt ? newline() : void(out_ += " ");
                           print(*u.body, TermLevel, stmt);
                           close(prec, TermLevel);
                       },
                       [&](const Seq &s) {
                           bool stmt = statement && prec == TermLevel;
                           open(prec, TermLevel);
                           print(*s.first, AssignLevel);
                           out_ += ";";
                           stmt ? newline() : void(out_ += " ");
                           print(*s.second, TermLevel, stmt);
                           close(prec, TermLevel);
                       },
                       [&](const Assign &a) {
                           open(prec, AssignLevel);
                           print(*a.ref, AppLevel);
                           out_ += " := ";
                           print(*a.value, AppLevel);
                           close(prec, AssignLevel);
                       },
                       [&](const App &a) {
                           open(prec, AppLevel);
                           operand(*a.fun, AppLevel);
                           out_ += " ";
                           operand(*a.arg, AtomLevel);
                           close(prec, AppLevel);
                       },
                       [&](const Pack &p) {
                           // Grammatically an atom, but its trailing type reads badly
                           // next to an argument.
                           open(prec, AppLevel);
                           out_ += "pack <";
                           print_type(*p.witness, false, out_);
                           out_ += ", ";
                           print(*p.payload, TermLevel);
                           out_ += "> as ";
                           print_type(*p.type, false, out_);
                           close(prec, AppLevel);
                       },
                       [&](const New &n) {
                           out_ += "new ";
                           operand(*n.init, AtomLevel);
                       },
                       [&](const Deref &d) {
                           out_ += "!";
                           operand(*d.ref, AtomLevel);
                       },
                       [&](const Proj &p) {
                           out_ += p.index == 1 ? "proj1 " : "proj2 ";
                           operand(*p.tuple, AtomLevel);
                       },
                       [&](const Tuple &t) {
                           out_ += "<";
                           component(*t.first);
                           out_ += ", ";
                           component(*t.second);
                           out_ += ">";
                       },
                   },
                   e.node);
    }

    // `(!r) x` and `(proj1 p) 0 (proj2 p)` rather than the bare prefix forms;
    // both parse the same.
    void operand(const Term &e, Prec prec) {
        bool prefix = e.is<Deref>() || e.is<Proj>() || e.is<New>();
        if (prefix) {
            out_ += "(";
        }
        print(e, prefix ? TermLevel : prec);
        if (prefix) {
            out_ += ")";
        }
    }

    void component(const Term &e) {
        bool fence = e.is<Lam>() || e.is<Code>();
        print(e, fence ? AtomLevel : TermLevel);
    }

    void open(Prec ctx, Prec own) {
        if (ctx > own) {
            out_ += "(";
        }
    }
    void close(Prec ctx, Prec own) {
        if (ctx > own) {
            out_ += ")";
        }
    }

    PrettyOptions opts_;
    std::string out_;
};

}  // namespace

std::string pretty(const Term &e, PrettyOptions opts) { return Printer(opts).run(e); }

std::string pretty(const Type &t) {
    std::string out;
    print_type(t, false, out);
    return out;
}

}  // namespace knot
