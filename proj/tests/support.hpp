#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include "knot/cconv.hpp"
#include "knot/eval.hpp"
#include "knot/parser.hpp"
#include "knot/propgen.hpp"
#include "knot/sorts.hpp"
#include "knot/typecheck.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace support {

inline std::filesystem::path corpus_dir() { return KNOT_CORPUS_DIR; }

inline std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline knot::TermPtr corpus_program(const std::string &name) {
    return knot::parse_source(read_file(corpus_dir() / name));
}

// Every non-empty .src file in the corpus, sorted by name.
inline std::vector<std::string> corpus_programs() {
    std::vector<std::string> out;
    for (const auto &entry : std::filesystem::directory_iterator(corpus_dir())) {
        if (entry.path().extension() == ".src" && entry.file_size() > 0) {
            out.push_back(entry.path().filename().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline const knot::Result *as_result(const knot::Outcome &o) { return std::get_if<knot::Result>(&o); }

inline bool is_exhausted(const knot::Outcome &o) {
    return std::holds_alternative<knot::FuelExhausted>(o);
}

inline bool is_stuck(const knot::Outcome &o) { return std::holds_alternative<knot::Stuck>(o); }

// Numeral of a Result, or -1.
inline long long numeral(const knot::Outcome &o) {
    const auto *r = as_result(o);
    if (!r) {
        return -1;
    }
    const auto *n = r->value->as<knot::NumValue>();
    return n ? static_cast<long long>(n->value) : -1;
}

inline bool accepts(const knot::TermPtr &e, knot::Mode mode) {
    try {
        knot::typecheck_source(e, mode);
        return true;
    } catch (const knot::TypeError &) {
        return false;
    }
}

// Random source types with every arrow annotated, levels at most `max_level`.
class TypeGen {
public:
    explicit TypeGen(std::uint64_t seed) : rng_(seed) {}

    knot::TypePtr operator()(int size = 4) {
        int choice = static_cast<int>(pick(size > 0 ? 5 : 2));
        switch (choice) {
        case 0:
            return knot::nat_type();
        case 1:
            return knot::unit_type();
        case 2:
            return knot::ref_type((*this)(size - 1));
        case 3:
            return knot::product_type((*this)(size - 1), (*this)(size - 1));
        default:
            return knot::arrow_type((*this)(size - 1), (*this)(size - 1),
                                    static_cast<knot::Level>(pick(4)));
        }
    }

private:
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    std::mt19937_64 rng_;
};

inline knot::GenConfig gen_config(std::uint64_t seed, knot::Mode mode, unsigned depth = 5,
                                  knot::Level cap = 2) {
    knot::GenConfig cfg;
    cfg.seed = seed;
    cfg.mode = mode;
    cfg.max_depth = depth;
    cfg.level_cap = cap;
    return cfg;
}

constexpr knot::Mode kModes[] = {knot::Mode::Unrestricted, knot::Mode::FullGround, knot::Mode::Sorted};

}  // namespace support
