#pragma once

// Random inputs shared by property tests and the acceptance suite.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mathfind/formula/opt.hpp"

namespace mathfind::testing {

/// Random LaTeX from the supported grammar; every output parses and
/// translates to an operator tree.
class FormulaGenerator {
  public:
    explicit FormulaGenerator(std::uint64_t seed) : m_rng(seed) {}

    std::string formula(int max_depth = 3)
    {
        if (pick(4) == 0) {
            return expr(max_depth) + " " + relation() + " " + expr(max_depth - 1);
        }
        return expr(max_depth);
    }

    std::string expr(int depth)
    {
        if (depth <= 0) {
            return atom();
        }
        switch (pick(10)) {
        case 0: return expr(depth - 1) + "+" + expr(depth - 1);
        case 1: return expr(depth - 1) + "-" + atom();
        case 2: return factor(depth - 1) + " \\times " + factor(depth - 1);
        case 3: return "\\frac{" + expr(depth - 1) + "}{" + expr(depth - 1) + "}";
        case 4: return atom_var() + "^{" + expr(depth - 1) + "}";
        case 5: return atom_var() + "_{" + atom() + "}";
        case 6: return "(" + expr(depth - 1) + ")";
        case 7: return "\\sqrt{" + expr(depth - 1) + "}";
        case 8: return atom_var() + " " + atom_var();
        default: return "\\sin(" + expr(depth - 1) + ")";
        }
    }

    std::string atom()
    {
        return pick(3) == 0 ? std::to_string(pick(20)) : atom_var();
    }

    std::string atom_var()
    {
        static char const* const vars[] = {"a", "b", "c", "x", "y", "z", "n", "\\alpha", "\\pi"};
        return vars[pick(9)];
    }

  private:
    std::string factor(int depth)
    {
        auto e = expr(depth);
        return "(" + e + ")";
    }
    std::string relation()
    {
        static char const* const rels[] = {"=", "<", "\\leq", "\\geq"};
        return rels[pick(4)];
    }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(m_rng); }

    std::mt19937_64 m_rng;
};

/// Random binary arithmetic operator tree over numeric leaves (1..9) and
/// binding tokens n1..n3, with at most `max_nodes` nodes.
inline OptTree random_arith_tree(std::mt19937_64& rng, int max_nodes)
{
    static char const* const ops[] = {"+", "-", "times", "divide"};
    OptTree t;
    std::uniform_int_distribution<int> coin(0, 99);
    std::uniform_int_distribution<int> digit(1, 9);
    std::uniform_int_distribution<int> opi(0, 3);
    std::uniform_int_distribution<int> tok(1, 3);
    int budget = max_nodes;
    auto leaf = [&]() {
        if (coin(rng) < 30) {
            return t.add_node({"n" + std::to_string(tok(rng)), SymbolKind::Variable});
        }
        return t.add_node({std::to_string(digit(rng)), SymbolKind::Number});
    };
    std::function<NodeId(int)> build = [&](int room) -> NodeId {
        if (room < 3 || coin(rng) < 35) {
            return leaf();
        }
        int left_room = std::uniform_int_distribution<int>(1, room - 2)(rng);
        NodeId l = build(left_room);
        NodeId r = build(room - 1 - left_room);
        std::string op = ops[opi(rng)];
        return t.add_node({op, opt_operator_kind(op)}, {l, r});
    };
    t.set_root(build(budget));
    return t;
}

}  // namespace mathfind::testing
