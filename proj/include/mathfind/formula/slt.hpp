#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mathfind/formula/symbol.hpp"

namespace mathfind {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// Symbol Layout Tree: symbols connected by spatial relations. Every
/// (parent, relation) slot holds at most one child; NEXT links the
/// writing-line successor.
class SltTree {
  public:
    struct Node {
        MathSymbol symbol;
        NodeId parent = kNoNode;
        Relation relation = Relation::Next;  // relation from parent; meaningless for the root
        std::array<NodeId, kRelationCount> children{kNoNode, kNoNode, kNoNode, kNoNode,
                                                    kNoNode, kNoNode, kNoNode, kNoNode};
    };

    NodeId add_node(MathSymbol symbol);
    /// Throws std::logic_error if the slot is taken or `child` already has a parent.
    void attach(NodeId parent, Relation rel, NodeId child);
    void set_root(NodeId id) { m_root = id; }

    [[nodiscard]] bool empty() const noexcept { return m_nodes.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return m_nodes.size(); }
    [[nodiscard]] NodeId root() const noexcept { return m_root; }
    [[nodiscard]] Node const& node(NodeId id) const { return m_nodes.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] Node& node(NodeId id) { return m_nodes.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] MathSymbol const& symbol(NodeId id) const { return node(id).symbol; }
    [[nodiscard]] NodeId child(NodeId id, Relation rel) const
    {
        return node(id).children[relation_index(rel)];
    }

    /// Children as (relation, child) pairs in relation-name order.
    [[nodiscard]] std::vector<std::pair<Relation, NodeId>> children(NodeId id) const;
    [[nodiscard]] std::size_t edge_count() const noexcept
    {
        return m_nodes.empty() ? 0 : m_nodes.size() - 1;
    }

    /// Nodes in preorder with children visited in relation-name order.
    [[nodiscard]] std::vector<NodeId> preorder() const;

    /// Nodes in visual reading order: prefix scripts, the symbol, its
    /// above/inside/below content, subscript, superscript, then NEXT.
    [[nodiscard]] std::vector<NodeId> reading_order() const;

    /// Structural equality from the roots; node numbering is irrelevant.
    friend bool operator==(SltTree const& a, SltTree const& b);

  private:
    std::vector<Node> m_nodes;
    NodeId m_root = kNoNode;
};

/// Deterministic prefix serialization `label(K)[REL:child,...]` with children
/// sorted by relation name. Empty tree serializes to the empty string.
[[nodiscard]] std::string serialize(SltTree const& slt);

/// LaTeX that parses back to an equal tree.
[[nodiscard]] std::string to_latex(SltTree const& slt);

}  // namespace mathfind
