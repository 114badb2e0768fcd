#include "mathfind/formula/canonical.hpp"

#include <algorithm>
#include <map>

namespace mathfind {

std::string enumerated_label(std::size_t index)
{
    return "#" + std::to_string(index);
}

namespace {

template <typename Tree>
void enumerate_in_order(Tree& tree, std::vector<NodeId> const& order)
{
    std::map<std::string, std::size_t> seen;
    for (auto id : order) {
        auto& sym = tree.node(id).symbol;
        if (sym.kind != SymbolKind::Variable) {
            continue;
        }
        auto [it, inserted] = seen.try_emplace(sym.label, seen.size() + 1);
        sym.label = enumerated_label(it->second);
    }
}

template <typename Tree>
void replace_constants(Tree& tree, std::vector<NodeId> const& order)
{
    for (auto id : order) {
        auto& sym = tree.node(id).symbol;
        if (sym.kind == SymbolKind::Number) {
            sym.label = kConstLabel;
        }
    }
}

std::string sort_subtree(OptTree& opt, NodeId id)
{
    auto& kids = opt.node(id).children;
    std::vector<std::pair<std::string, NodeId>> keyed;
    keyed.reserve(kids.size());
    for (auto c : kids) {
        keyed.emplace_back(sort_subtree(opt, c), c);
    }
    if (opt.symbol(id).kind == SymbolKind::OpUnordered) {
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](auto const& a, auto const& b) { return a.first < b.first; });
        auto& node_kids = opt.node(id).children;
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            node_kids[i] = keyed[i].second;
        }
    }
    return linearize_prefix(opt, id);
}

std::string alias_label(std::string const& label)
{
    if (label == "\\prec") {
        return "<";
    }
    if (label == "\\preceq") {
        return "\\leq";
    }
    if (label == "cdot" || label == "ast") {
        return "times";
    }
    return label;
}

}  // namespace

SltTree enumerate_variables(SltTree const& slt)
{
    SltTree out = slt;
    enumerate_in_order(out, out.reading_order());
    return out;
}

OptTree enumerate_variables(OptTree const& opt)
{
    OptTree out = opt;
    enumerate_in_order(out, out.preorder());
    return out;
}

SltTree enumerate_constants(SltTree const& slt)
{
    SltTree out = slt;
    replace_constants(out, out.preorder());
    return out;
}

OptTree enumerate_constants(OptTree const& opt)
{
    OptTree out = opt;
    replace_constants(out, out.preorder());
    return out;
}

OptTree sort_unordered_args(OptTree const& opt)
{
    OptTree out = opt;
    if (out.root() != kNoNode) {
        sort_subtree(out, out.root());
    }
    return out;
}

OptTree normalize_equivalences(OptTree const& opt)
{
    OptTree out = opt;
    if (out.root() == kNoNode) {
        return out;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto id : out.preorder()) {
            auto& n = out.node(id);
            auto aliased = alias_label(n.symbol.label);
            if (aliased != n.symbol.label) {
                n.symbol.label = aliased;
                n.symbol.kind = opt_operator_kind(aliased);
                changed = true;
            }
            if ((n.symbol.label == "\\geq" || n.symbol.label == ">") && n.children.size() == 2) {
                n.symbol.label = n.symbol.label == ">" ? "<" : "\\leq";
                std::swap(n.children[0], n.children[1]);
                changed = true;
            }
            if (n.symbol.kind == SymbolKind::OpUnordered) {
                std::vector<NodeId> flat;
                bool spliced = false;
                for (auto c : n.children) {
                    auto const& cn = out.node(c);
                    if (cn.symbol.label == n.symbol.label && !cn.parenthesized &&
                        cn.children.size() >= 2 && n.symbol.label != "\\neq") {
                        flat.insert(flat.end(), cn.children.begin(), cn.children.end());
                        spliced = true;
                    } else {
                        flat.push_back(c);
                    }
                }
                if (spliced) {
                    out.node(id).children = std::move(flat);
                    changed = true;
                }
            }
        }
    }
    return out.compact();
}

SltTree normalize_equivalences(SltTree const& slt)
{
    SltTree out = slt;
    for (auto id : out.preorder()) {
        auto& sym = out.node(id).symbol;
        if (sym.label == "\\cdot" || sym.label == "*") {
            sym.label = "\\times";
        } else if (sym.label == "\\prec") {
            sym.label = "<";
        } else if (sym.label == "\\preceq") {
            sym.label = "\\leq";
        }
    }
    return out;
}

OptTree tag_types(OptTree const& opt)
{
    OptTree out = opt;
    for (auto id : out.preorder()) {
        auto& sym = out.node(id).symbol;
        sym.label = std::string(1, kind_tag(sym.kind)) + "!" + sym.label;
    }
    return out;
}

OptTree canonicalize(OptTree const& opt, CanonicalOptions const& options)
{
    OptTree out = opt;
    if (options.normalize_equivalences) {
        out = normalize_equivalences(out);
    }
    if (options.enumerate_variables) {
        out = enumerate_variables(out);
    }
    if (options.enumerate_constants) {
        out = enumerate_constants(out);
    }
    if (options.sort_unordered) {
        out = sort_unordered_args(out);
    }
    if (options.type_tags) {
        out = tag_types(out);
    }
    return out;
}

}  // namespace mathfind
