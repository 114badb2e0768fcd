#include "mathfind/formula/slt.hpp"

#include <functional>
#include <stdexcept>

#include "latex_tables.hpp"

namespace mathfind {

NodeId SltTree::add_node(MathSymbol symbol)
{
    m_nodes.push_back(Node{std::move(symbol)});
    return static_cast<NodeId>(m_nodes.size() - 1);
}

void SltTree::attach(NodeId parent, Relation rel, NodeId child)
{
    auto& slot = node(parent).children[relation_index(rel)];
    if (slot != kNoNode) {
        throw std::logic_error("SltTree: relation slot already occupied");
    }
    if (node(child).parent != kNoNode) {
        throw std::logic_error("SltTree: child already has a parent");
    }
    slot = child;
    node(child).parent = parent;
    node(child).relation = rel;
}

std::vector<std::pair<Relation, NodeId>> SltTree::children(NodeId id) const
{
    std::vector<std::pair<Relation, NodeId>> out;
    for (auto rel : kRelationsByName) {
        if (auto c = child(id, rel); c != kNoNode) {
            out.emplace_back(rel, c);
        }
    }
    return out;
}

std::vector<NodeId> SltTree::preorder() const
{
    std::vector<NodeId> order;
    if (m_root == kNoNode) {
        return order;
    }
    std::vector<NodeId> stack{m_root};
    while (!stack.empty()) {
        auto id = stack.back();
        stack.pop_back();
        order.push_back(id);
        auto kids = children(id);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            stack.push_back(it->second);
        }
    }
    return order;
}

std::vector<NodeId> SltTree::reading_order() const
{
    std::vector<NodeId> order;
    std::function<void(NodeId)> visit = [&](NodeId id) {
        for (NodeId cur = id; cur != kNoNode; cur = child(cur, Relation::Next)) {
            for (auto rel : {Relation::PreSub, Relation::PreSup}) {
                if (auto c = child(cur, rel); c != kNoNode) {
                    visit(c);
                }
            }
            order.push_back(cur);
            for (auto rel : {Relation::Above, Relation::Below, Relation::Inside, Relation::Sub,
                             Relation::Sup}) {
                if (auto c = child(cur, rel); c != kNoNode) {
                    visit(c);
                }
            }
        }
    };
    if (m_root != kNoNode) {
        visit(m_root);
    }
    return order;
}

namespace {

bool subtree_equal(SltTree const& a, NodeId x, SltTree const& b, NodeId y)
{
    if (a.symbol(x) != b.symbol(y)) {
        return false;
    }
    for (auto rel : kAllRelations) {
        auto cx = a.child(x, rel);
        auto cy = b.child(y, rel);
        if ((cx == kNoNode) != (cy == kNoNode)) {
            return false;
        }
        if (cx != kNoNode && !subtree_equal(a, cx, b, cy)) {
            return false;
        }
    }
    return true;
}

void serialize_into(SltTree const& slt, NodeId id, std::string& out)
{
    auto const& sym = slt.symbol(id);
    out += sym.label;
    out += '(';
    out += kind_tag(sym.kind);
    out += ")[";
    bool first = true;
    for (auto [rel, c] : slt.children(id)) {
        if (!first) {
            out += ',';
        }
        first = false;
        out += relation_name(rel);
        out += ':';
        serialize_into(slt, c, out);
    }
    out += ']';
}

using detail::is_big_operator;
using detail::named_function_commands;

void latex_line(SltTree const& slt, NodeId head, std::string& out);

void latex_group(SltTree const& slt, NodeId head, std::string& out)
{
    out += '{';
    if (head != kNoNode) {
        latex_line(slt, head, out);
    }
    out += '}';
}

void latex_line(SltTree const& slt, NodeId head, std::string& out)
{
    for (NodeId cur = head; cur != kNoNode; cur = slt.child(cur, Relation::Next)) {
        if (cur != head) {
            out += ' ';
        }
        auto presub = slt.child(cur, Relation::PreSub);
        auto presup = slt.child(cur, Relation::PreSup);
        if (presub != kNoNode || presup != kNoNode) {
            out += "{}";
            if (presub != kNoNode) {
                out += '_';
                latex_group(slt, presub, out);
            }
            if (presup != kNoNode) {
                out += '^';
                latex_group(slt, presup, out);
            }
        }
        auto const& sym = slt.symbol(cur);
        if (sym.label == "\\frac") {
            out += "\\frac";
            latex_group(slt, slt.child(cur, Relation::Above), out);
            latex_group(slt, slt.child(cur, Relation::Below), out);
        } else if (sym.label == "\\sqrt") {
            out += "\\sqrt";
            latex_group(slt, slt.child(cur, Relation::Inside), out);
        } else if (is_big_operator(sym.label)) {
            out += sym.label;
            if (auto below = slt.child(cur, Relation::Below); below != kNoNode) {
                out += '_';
                latex_group(slt, below, out);
            }
            if (auto above = slt.child(cur, Relation::Above); above != kNoNode) {
                out += '^';
                latex_group(slt, above, out);
            }
        } else if (sym.kind == SymbolKind::Function && named_function_commands().contains(sym.label)) {
            out += '\\';
            out += sym.label;
            out += ' ';
        } else {
            out += sym.label;
            if (sym.label.front() == '\\') {
                out += ' ';
            }
        }
        if (auto sub = slt.child(cur, Relation::Sub); sub != kNoNode) {
            out += '_';
            latex_group(slt, sub, out);
        }
        if (auto sup = slt.child(cur, Relation::Sup); sup != kNoNode) {
            out += '^';
            latex_group(slt, sup, out);
        }
    }
}

}  // namespace

bool operator==(SltTree const& a, SltTree const& b)
{
    if (a.empty() || b.empty()) {
        return a.empty() && b.empty();
    }
    return a.size() == b.size() && subtree_equal(a, a.root(), b, b.root());
}

std::string serialize(SltTree const& slt)
{
    std::string out;
    if (!slt.empty()) {
        serialize_into(slt, slt.root(), out);
    }
    return out;
}

std::string to_latex(SltTree const& slt)
{
    std::string out;
    if (!slt.empty()) {
        latex_line(slt, slt.root(), out);
    }
    return out;
}

}  // namespace mathfind
