#include "knot/derivation.hpp"

#include "knot/pretty.hpp"

namespace knot {

std::string render_judgment(const Derivation &d) {
    std::string out = d.ctx.render() + " |- ";
    if (d.term) {
        out += pretty(*d.term) + " : ";
    }
    out += pretty(*d.type);
    if (d.sort) {
        out += " :: " + d.sort->render();
    }
    return out;
}

namespace {

void render_into(const Derivation &d, int depth, std::string &out) {
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
    out += "[" + d.rule + "] " + render_judgment(d) + "\n";
    for (const auto &p : d.premises) {
        render_into(p, depth + 1, out);
    }
}

}  // namespace

std::string render(const Derivation &d) {
    std::string out;
    render_into(d, 0, out);
    return out;
}

const Derivation *find_node(const Derivation &root,
                            const std::function<bool(const Derivation &)> &pred) {
    if (pred(root)) {
        return &root;
    }
    for (const auto &p : root.premises) {
        if (const Derivation *hit = find_node(p, pred)) {
            return hit;
        }
    }
    return nullptr;
}

}  // namespace knot
