#include "mathfind/formula/opt.hpp"

#include <functional>
#include <map>

#include "latex_tables.hpp"
#include "mathfind/error.hpp"

namespace mathfind {

NodeId OptTree::add_node(MathSymbol symbol, std::vector<NodeId> children)
{
    m_nodes.push_back(Node{std::move(symbol), std::move(children)});
    return static_cast<NodeId>(m_nodes.size() - 1);
}

std::vector<NodeId> OptTree::preorder() const
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
        auto const& kids = children(id);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            stack.push_back(*it);
        }
    }
    return order;
}

std::vector<NodeId> OptTree::parents() const
{
    std::vector<NodeId> parent(m_nodes.size(), kNoNode);
    for (std::size_t i = 0; i < m_nodes.size(); ++i) {
        for (auto c : m_nodes[i].children) {
            parent[static_cast<std::size_t>(c)] = static_cast<NodeId>(i);
        }
    }
    return parent;
}

std::size_t OptTree::synthesized_count() const
{
    std::size_t n = 0;
    for (auto id : preorder()) {
        n += node(id).synthesized ? 1 : 0;
    }
    return n;
}

OptTree OptTree::compact() const
{
    OptTree out;
    if (m_root == kNoNode) {
        return out;
    }
    std::function<NodeId(NodeId)> copy = [&](NodeId id) {
        auto const& src = node(id);
        NodeId dst = out.add_node(src.symbol);
        out.node(dst).parenthesized = src.parenthesized;
        out.node(dst).synthesized = src.synthesized;
        std::vector<NodeId> kids;
        kids.reserve(src.children.size());
        for (auto c : src.children) {
            kids.push_back(copy(c));
        }
        out.node(dst).children = std::move(kids);
        return dst;
    };
    out.set_root(copy(m_root));
    return out;
}

namespace {

bool subtree_equal(OptTree const& a, NodeId x, OptTree const& b, NodeId y)
{
    auto const& nx = a.node(x);
    auto const& ny = b.node(y);
    if (nx.symbol != ny.symbol || nx.parenthesized != ny.parenthesized ||
        nx.children.size() != ny.children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < nx.children.size(); ++i) {
        if (!subtree_equal(a, nx.children[i], b, ny.children[i])) {
            return false;
        }
    }
    return true;
}

void prefix_into(OptTree const& opt, NodeId id, std::string& out)
{
    auto const& n = opt.node(id);
    if (n.parenthesized) {
        out += "()";
    }
    out += n.symbol.label;
    if (!n.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            prefix_into(opt, n.children[i], out);
        }
        out += ')';
    }
}

}  // namespace

bool operator==(OptTree const& a, OptTree const& b)
{
    if (a.empty() || b.empty() || a.root() == kNoNode || b.root() == kNoNode) {
        return a.root() == kNoNode && b.root() == kNoNode;
    }
    return subtree_equal(a, a.root(), b, b.root());
}

std::string linearize_prefix(OptTree const& opt, NodeId id)
{
    std::string out;
    prefix_into(opt, id, out);
    return out;
}

std::string linearize_prefix(OptTree const& opt)
{
    return opt.root() == kNoNode ? std::string{} : linearize_prefix(opt, opt.root());
}

SymbolKind opt_operator_kind(std::string const& label)
{
    static std::map<std::string, SymbolKind, std::less<>> const kinds = {
        {"+", SymbolKind::OpUnordered},     {"times", SymbolKind::OpUnordered},
        {"cdot", SymbolKind::OpUnordered},  {"ast", SymbolKind::OpUnordered},
        {"=", SymbolKind::OpUnordered},     {"\\neq", SymbolKind::OpUnordered},
        {"-", SymbolKind::OpOrdered},       {"divide", SymbolKind::OpOrdered},
        {"<", SymbolKind::OpOrdered},       {">", SymbolKind::OpOrdered},
        {"\\leq", SymbolKind::OpOrdered},   {"\\geq", SymbolKind::OpOrdered},
        {"\\prec", SymbolKind::OpOrdered},  {"\\preceq", SymbolKind::OpOrdered},
        {",", SymbolKind::OpOrdered},       {"sub", SymbolKind::OpOrdered},
        {"sup", SymbolKind::OpOrdered},
    };
    if (auto it = kinds.find(label); it != kinds.end()) {
        return it->second;
    }
    return SymbolKind::Function;
}

namespace {

bool is_relation(std::string_view label)
{
    return label == "=" || label == "<" || label == ">" || label == "\\leq" || label == "\\geq" ||
           label == "\\neq" || label == "\\prec" || label == "\\preceq";
}

bool is_open(std::string_view label) { return label == "(" || label == "["; }
bool is_close(std::string_view label) { return label == ")" || label == "]"; }

class OptBuilder {
  public:
    explicit OptBuilder(SltTree const& slt) : m_slt(slt) {}

    OptTree run()
    {
        if (!m_slt.empty() && m_slt.root() != kNoNode) {
            m_out.set_root(convert_line(m_slt.root()));
        }
        return std::move(m_out);
    }

  private:
    struct Cursor {
        std::vector<NodeId> nodes;
        std::size_t pos = 0;
        std::size_t end = 0;

        [[nodiscard]] bool done() const { return pos >= end; }
    };

    [[nodiscard]] MathSymbol const& sym(Cursor const& c) const { return m_slt.symbol(c.nodes[c.pos]); }
    [[nodiscard]] bool at_label(Cursor const& c, std::string_view label) const
    {
        return !c.done() && sym(c).label == label;
    }

    NodeId make(std::string const& label, std::vector<NodeId> children, bool synthesized = false)
    {
        NodeId id = m_out.add_node(MathSymbol{label, opt_operator_kind(label)}, std::move(children));
        m_out.node(id).synthesized = synthesized;
        return id;
    }

    // Append `rhs` to `lhs` when lhs is an unparenthesized node with the same
    // flattenable label; otherwise create a new binary node.
    NodeId combine(std::string const& label, NodeId lhs, NodeId rhs, bool flatten, bool synthesized)
    {
        if (flatten) {
            auto& n = m_out.node(lhs);
            if (n.symbol.label == label && !n.parenthesized && n.children.size() >= 2) {
                n.children.push_back(rhs);
                return lhs;
            }
        }
        return make(label, {lhs, rhs}, synthesized);
    }

    NodeId convert_line(NodeId head)
    {
        Cursor cur;
        for (NodeId id = head; id != kNoNode; id = m_slt.child(id, Relation::Next)) {
            cur.nodes.push_back(id);
        }
        cur.end = cur.nodes.size();
        NodeId result = parse_list(cur);
        if (!cur.done()) {
            throw TranslateError("unexpected symbol '" + sym(cur).label + "'");
        }
        return result;
    }

    NodeId parse_list(Cursor& cur)
    {
        NodeId first = parse_relation(cur);
        if (!at_label(cur, ",")) {
            return first;
        }
        std::vector<NodeId> items{first};
        while (at_label(cur, ",")) {
            check_no_scripts(cur.nodes[cur.pos]);
            ++cur.pos;
            items.push_back(parse_relation(cur));
        }
        return make(",", std::move(items));
    }

    NodeId parse_relation(Cursor& cur)
    {
        NodeId lhs = parse_additive(cur);
        while (!cur.done() && is_relation(sym(cur).label)) {
            check_no_scripts(cur.nodes[cur.pos]);
            std::string label = sym(cur).label;
            ++cur.pos;
            NodeId rhs = parse_additive(cur);
            lhs = combine(label, lhs, rhs, label == "=", false);
        }
        return lhs;
    }

    NodeId parse_additive(Cursor& cur)
    {
        NodeId lhs = kNoNode;
        if (at_label(cur, "-") || at_label(cur, "+")) {
            check_no_scripts(cur.nodes[cur.pos]);
            bool negate = sym(cur).label == "-";
            ++cur.pos;
            NodeId term = parse_term(cur);
            lhs = negate ? make("-", {term}) : term;
        } else {
            lhs = parse_term(cur);
        }
        while (at_label(cur, "+") || at_label(cur, "-")) {
            check_no_scripts(cur.nodes[cur.pos]);
            std::string label = sym(cur).label;
            ++cur.pos;
            NodeId rhs = parse_term(cur);
            lhs = combine(label, lhs, rhs, label == "+", false);
        }
        return lhs;
    }

    [[nodiscard]] bool starts_operand(Cursor const& cur) const
    {
        if (cur.done()) {
            return false;
        }
        auto const& s = sym(cur);
        switch (s.kind) {
        case SymbolKind::Variable:
        case SymbolKind::Number:
        case SymbolKind::Function:
        case SymbolKind::Wildcard:
            return true;
        case SymbolKind::Container:
            return is_open(s.label);
        default:
            return s.label == "\\frac";
        }
    }

    NodeId parse_term(Cursor& cur)
    {
        NodeId lhs = parse_factor(cur);
        while (!cur.done()) {
            auto const& label = sym(cur).label;
            std::string op;
            if (label == "\\times") {
                op = "times";
            } else if (label == "\\cdot") {
                op = "cdot";
            } else if (label == "*") {
                op = "ast";
            } else if (label == "/" || label == "\\div") {
                op = "divide";
            }
            if (!op.empty()) {
                check_no_scripts(cur.nodes[cur.pos]);
                ++cur.pos;
                NodeId rhs = parse_factor(cur);
                lhs = combine(op, lhs, rhs, op != "divide", false);
            } else if (starts_operand(cur)) {
                NodeId rhs = parse_factor(cur);
                lhs = combine("times", lhs, rhs, true, true);
            } else {
                break;
            }
        }
        return lhs;
    }

    NodeId parse_factor(Cursor& cur)
    {
        if (at_label(cur, "-")) {
            check_no_scripts(cur.nodes[cur.pos]);
            ++cur.pos;
            return make("-", {parse_factor(cur)});
        }
        return parse_primary(cur);
    }

    std::size_t matching_close(Cursor const& cur, std::size_t open) const
    {
        int depth = 0;
        for (std::size_t i = open; i < cur.end; ++i) {
            auto const& label = m_slt.symbol(cur.nodes[i]).label;
            if (is_open(label)) {
                ++depth;
            } else if (is_close(label)) {
                if (--depth == 0) {
                    return i;
                }
            }
        }
        throw TranslateError("unbalanced bracket");
    }

    // Parses the bracket group starting at cur.pos; leaves cur after the
    // closing bracket. Returns the comma-separated items.
    std::vector<NodeId> parse_group_items(Cursor& cur, NodeId& close_node)
    {
        std::size_t open = cur.pos;
        check_no_scripts(cur.nodes[open]);
        std::size_t close = matching_close(cur, open);
        if (close == open + 1) {
            throw TranslateError("empty brackets");
        }
        Cursor inner{cur.nodes, open + 1, close};
        std::vector<NodeId> items{parse_relation(inner)};
        while (at_label(inner, ",")) {
            check_no_scripts(inner.nodes[inner.pos]);
            ++inner.pos;
            items.push_back(parse_relation(inner));
        }
        if (!inner.done()) {
            throw TranslateError("unexpected symbol '" + sym(inner).label + "' in brackets");
        }
        cur.pos = close + 1;
        close_node = cur.nodes[close];
        return items;
    }

    NodeId parse_primary(Cursor& cur)
    {
        if (cur.done()) {
            throw TranslateError("missing operand");
        }
        NodeId slt_id = cur.nodes[cur.pos];
        auto const& s = m_slt.symbol(slt_id);

        if (s.kind == SymbolKind::Container) {
            if (!is_open(s.label)) {
                throw TranslateError("unbalanced bracket");
            }
            NodeId close = kNoNode;
            auto items = parse_group_items(cur, close);
            NodeId inner = items.size() == 1 ? items.front() : make(",", std::move(items));
            m_out.node(inner).parenthesized = true;
            return apply_scripts(inner, close);
        }
        if (s.kind == SymbolKind::Variable || s.kind == SymbolKind::Number ||
            s.kind == SymbolKind::Wildcard) {
            ++cur.pos;
            check_no_structure(slt_id);
            NodeId leaf = m_out.add_node(s);
            return apply_scripts(leaf, slt_id);
        }
        if (s.label == "\\frac") {
            ++cur.pos;
            auto num = m_slt.child(slt_id, Relation::Above);
            auto den = m_slt.child(slt_id, Relation::Below);
            if (num == kNoNode || den == kNoNode) {
                throw TranslateError("fraction without numerator or denominator");
            }
            NodeId n = convert_line(num);
            NodeId d = convert_line(den);
            return apply_scripts(make("divide", {n, d}), slt_id);
        }
        if (s.label == "\\sqrt") {
            ++cur.pos;
            auto body = m_slt.child(slt_id, Relation::Inside);
            if (body == kNoNode) {
                throw TranslateError("radical without body");
            }
            return apply_scripts(make("sqrt", {convert_line(body)}), slt_id);
        }
        if (detail::is_big_operator(s.label)) {
            ++cur.pos;
            std::vector<NodeId> args;
            if (auto below = m_slt.child(slt_id, Relation::Below); below != kNoNode) {
                args.push_back(convert_line(below));
            }
            if (auto above = m_slt.child(slt_id, Relation::Above); above != kNoNode) {
                args.push_back(convert_line(above));
            }
            if (!starts_operand(cur)) {
                throw TranslateError("big operator '" + s.label + "' without body");
            }
            args.push_back(parse_term(cur));
            return make(s.label.substr(1), std::move(args));
        }
        if (s.kind == SymbolKind::Function) {
            ++cur.pos;
            check_no_structure(slt_id);
            std::vector<NodeId> args;
            NodeId close = kNoNode;
            if (!cur.done() && is_open(sym(cur).label)) {
                args = parse_group_items(cur, close);
            } else if (starts_operand(cur)) {
                args.push_back(parse_factor(cur));
            } else {
                throw TranslateError("function '" + s.label + "' without argument");
            }
            NodeId applied = make(s.label, std::move(args));
            if (close != kNoNode) {
                applied = apply_scripts(applied, close);
            }
            return apply_scripts(applied, slt_id);
        }
        throw TranslateError("operator '" + s.label + "' where an operand was expected");
    }

    void check_no_scripts(NodeId slt_id) const
    {
        for (auto [rel, c] : m_slt.children(slt_id)) {
            if (rel != Relation::Next) {
                throw TranslateError("dangling " + std::string(relation_name(rel)) + " on '" +
                                     m_slt.symbol(slt_id).label + "'");
            }
        }
    }

    void check_no_structure(NodeId slt_id) const
    {
        for (auto rel : {Relation::Above, Relation::Below, Relation::Inside}) {
            if (m_slt.child(slt_id, rel) != kNoNode) {
                throw TranslateError("dangling " + std::string(relation_name(rel)) + " on '" +
                                     m_slt.symbol(slt_id).label + "'");
            }
        }
    }

    NodeId apply_scripts(NodeId base, NodeId slt_id)
    {
        static constexpr std::pair<Relation, char const*> kScripts[] = {
            {Relation::PreSub, "presub"},
            {Relation::PreSup, "presup"},
            {Relation::Sub, "sub"},
            {Relation::Sup, "sup"},
        };
        for (auto [rel, label] : kScripts) {
            if (auto c = m_slt.child(slt_id, rel); c != kNoNode) {
                base = make(label, {base, convert_line(c)}, true);
            }
        }
        return base;
    }

    SltTree const& m_slt;
    OptTree m_out;
};

}  // namespace

OptTree slt_to_opt(SltTree const& slt)
{
    return OptBuilder(slt).run();
}

}  // namespace mathfind
