#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mathfind/formula/slt.hpp"
#include "mathfind/formula/symbol.hpp"

namespace mathfind {

/// Operator Tree: operators at internal nodes, operands at leaves.
///
/// `parenthesized` records that the source wrapped the subtree in explicit
/// brackets. The brackets themselves are not nodes; the flag only feeds
/// representations that keep source grouping (WikiMirs terms).
/// `synthesized` marks operator nodes that have no symbol in the layout tree
/// (implicit multiplication, sub/sup/presub/presup).
class OptTree {
  public:
    struct Node {
        MathSymbol symbol;
        std::vector<NodeId> children;
        bool parenthesized = false;
        bool synthesized = false;
    };

    NodeId add_node(MathSymbol symbol, std::vector<NodeId> children = {});
    void set_root(NodeId id) { m_root = id; }

    [[nodiscard]] bool empty() const noexcept { return m_nodes.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return m_nodes.size(); }
    [[nodiscard]] NodeId root() const noexcept { return m_root; }
    [[nodiscard]] Node const& node(NodeId id) const { return m_nodes.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] Node& node(NodeId id) { return m_nodes.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] MathSymbol const& symbol(NodeId id) const { return node(id).symbol; }
    [[nodiscard]] std::vector<NodeId> const& children(NodeId id) const { return node(id).children; }
    [[nodiscard]] bool is_leaf(NodeId id) const { return node(id).children.empty(); }
    [[nodiscard]] bool is_ordered(NodeId id) const
    {
        return symbol(id).kind != SymbolKind::OpUnordered;
    }

    /// Reachable nodes from the root in preorder.
    [[nodiscard]] std::vector<NodeId> preorder() const;
    [[nodiscard]] std::vector<NodeId> parents() const;
    [[nodiscard]] std::size_t synthesized_count() const;

    /// Copy keeping only nodes reachable from the root, renumbered in preorder.
    [[nodiscard]] OptTree compact() const;

    friend bool operator==(OptTree const& a, OptTree const& b);

  private:
    std::vector<Node> m_nodes;
    NodeId m_root = kNoNode;
};

/// Prefix string `label(child,child)`; parenthesized subtrees are prefixed
/// with `()`. Used as the collation key for unordered arguments.
[[nodiscard]] std::string linearize_prefix(OptTree const& opt, NodeId id);
[[nodiscard]] std::string linearize_prefix(OptTree const& opt);

/// Translate a layout tree into an operator tree. Throws TranslateError.
[[nodiscard]] OptTree slt_to_opt(SltTree const& slt);

/// Operator kind for an OPT label produced by slt_to_opt.
[[nodiscard]] SymbolKind opt_operator_kind(std::string const& label);

}  // namespace mathfind
