#include "mathfind/formula/latex.hpp"

#include <cctype>
#include <optional>

#include "latex_tables.hpp"
#include "mathfind/error.hpp"

namespace mathfind {

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct Line {
    NodeId head = kNoNode;
    NodeId tail = kNoNode;
};

class LatexParser {
  public:
    explicit LatexParser(std::string_view src) : m_src(src) {}

    SltTree run()
    {
        Line line = parse_line(false);
        if (line.head != kNoNode) {
            m_tree.set_root(line.head);
        }
        return std::move(m_tree);
    }

  private:
    [[nodiscard]] bool at_end() const { return m_pos >= m_src.size(); }
    [[nodiscard]] char peek(std::size_t ahead = 0) const
    {
        return m_pos + ahead < m_src.size() ? m_src[m_pos + ahead] : '\0';
    }
    void skip_space()
    {
        while (!at_end() && is_space(m_src[m_pos])) {
            ++m_pos;
        }
    }
    [[noreturn]] void fail(std::string const& what, std::size_t at) const { throw ParseError(what, at); }

    NodeId make(std::string label, SymbolKind kind)
    {
        return m_tree.add_node(MathSymbol{std::move(label), kind});
    }

    void append(Line& line, NodeId id)
    {
        if (line.tail == kNoNode) {
            line.head = id;
        } else {
            m_tree.attach(line.tail, Relation::Next, id);
        }
        line.tail = id;
    }

    Line parse_line(bool in_group)
    {
        Line line;
        NodeId pending_presub = kNoNode;
        NodeId pending_presup = kNoNode;
        std::size_t pending_at = 0;
        while (true) {
            skip_space();
            if (at_end()) {
                break;
            }
            char c = peek();
            std::size_t start = m_pos;
            if (c == '}') {
                if (!in_group) {
                    fail("unbalanced '}'", start);
                }
                break;
            }
            if (c == '^' || c == '_') {
                if (pending_presub != kNoNode || pending_presup != kNoNode) {
                    fail("prefix script without a base", pending_at);
                }
                if (line.tail == kNoNode) {
                    fail("script without a base", start);
                }
                ++m_pos;
                NodeId arg = read_argument();
                bool big = detail::is_big_operator(m_tree.symbol(line.tail).label);
                Relation rel = c == '^' ? (big ? Relation::Above : Relation::Sup)
                                        : (big ? Relation::Below : Relation::Sub);
                if (m_tree.child(line.tail, rel) != kNoNode) {
                    fail(c == '^' ? "double superscript" : "double subscript", start);
                }
                m_tree.attach(line.tail, rel, arg);
                continue;
            }
            if (c == '{') {
                if (starts_prefix_scripts()) {
                    pending_at = start;
                    read_prefix_scripts(pending_presub, pending_presup);
                    continue;
                }
                ++m_pos;
                Line inner = parse_line(true);
                expect_close(start);
                if (inner.head != kNoNode) {
                    if (pending_presub != kNoNode || pending_presup != kNoNode) {
                        fail("prefix scripts must precede a single symbol", pending_at);
                    }
                    if (line.tail == kNoNode) {
                        line.head = inner.head;
                    } else {
                        m_tree.attach(line.tail, Relation::Next, inner.head);
                    }
                    line.tail = inner.tail;
                }
                continue;
            }
            auto atom = parse_symbol(false);
            if (!atom) {
                continue;
            }
            if (pending_presub != kNoNode) {
                m_tree.attach(*atom, Relation::PreSub, pending_presub);
                pending_presub = kNoNode;
            }
            if (pending_presup != kNoNode) {
                m_tree.attach(*atom, Relation::PreSup, pending_presup);
                pending_presup = kNoNode;
            }
            append(line, *atom);
        }
        if (pending_presub != kNoNode || pending_presup != kNoNode) {
            fail("prefix script without a base", pending_at);
        }
        return line;
    }

    void expect_close(std::size_t open_at)
    {
        if (peek() != '}') {
            fail("unbalanced '{'", open_at);
        }
        ++m_pos;
    }

    // `{}` followed by `^` or `_`.
    [[nodiscard]] bool starts_prefix_scripts() const
    {
        std::size_t p = m_pos + 1;
        while (p < m_src.size() && is_space(m_src[p])) {
            ++p;
        }
        if (p >= m_src.size() || m_src[p] != '}') {
            return false;
        }
        ++p;
        while (p < m_src.size() && is_space(m_src[p])) {
            ++p;
        }
        return p < m_src.size() && (m_src[p] == '^' || m_src[p] == '_');
    }

    void read_prefix_scripts(NodeId& presub, NodeId& presup)
    {
        m_pos = m_src.find('}', m_pos) + 1;
        while (true) {
            skip_space();
            char c = peek();
            if (c != '^' && c != '_') {
                break;
            }
            std::size_t at = m_pos;
            ++m_pos;
            NodeId arg = read_argument();
            NodeId& slot = c == '^' ? presup : presub;
            if (slot != kNoNode) {
                fail("double prefix script", at);
            }
            slot = arg;
        }
    }

    NodeId read_argument()
    {
        while (true) {
            skip_space();
            std::size_t start = m_pos;
            if (at_end()) {
                fail("missing argument", start);
            }
            if (peek() == '{') {
                ++m_pos;
                Line inner = parse_line(true);
                expect_close(start);
                if (inner.head == kNoNode) {
                    fail("empty group", start);
                }
                return inner.head;
            }
            if (peek() == '}') {
                fail("missing argument", start);
            }
            if (auto atom = parse_symbol(true)) {
                return *atom;
            }
        }
    }

    // One symbol (possibly with structural children). Returns nullopt for
    // tokens that produce no node (spacing, \left, \right).
    std::optional<NodeId> parse_symbol(bool single)
    {
        std::size_t start = m_pos;
        char c = peek();
        if (is_letter(c)) {
            if (!single) {
                std::size_t end = m_pos;
                while (end < m_src.size() && is_letter(m_src[end])) {
                    ++end;
                }
                std::size_t after = end;
                while (after < m_src.size() && is_space(m_src[after])) {
                    ++after;
                }
                if (end - m_pos >= 2 && after < m_src.size() && m_src[after] == '(') {
                    std::string name(m_src.substr(m_pos, end - m_pos));
                    m_pos = end;
                    return make(std::move(name), SymbolKind::Function);
                }
            }
            ++m_pos;
            return make(std::string(1, c), SymbolKind::Variable);
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
            if (single) {
                ++m_pos;
                return make(std::string(1, c), SymbolKind::Number);
            }
            std::size_t end = m_pos;
            while (end < m_src.size() && is_digit(m_src[end])) {
                ++end;
            }
            if (end < m_src.size() && m_src[end] == '.' && end + 1 < m_src.size() &&
                is_digit(m_src[end + 1])) {
                ++end;
                while (end < m_src.size() && is_digit(m_src[end])) {
                    ++end;
                }
            }
            std::string number(m_src.substr(m_pos, end - m_pos));
            m_pos = end;
            return make(std::move(number), SymbolKind::Number);
        }
        switch (c) {
        case '+':
        case '=':
        case '*':
            ++m_pos;
            return make(std::string(1, c), SymbolKind::OpUnordered);
        case '-':
        case '<':
        case '>':
        case '/':
        case ',':
            ++m_pos;
            return make(std::string(1, c), SymbolKind::OpOrdered);
        case '(':
        case ')':
        case '[':
        case ']':
            ++m_pos;
            return make(std::string(1, c), SymbolKind::Container);
        case '\\':
            return parse_command(single);
        default:
            break;
        }
        fail(std::string("unsupported character '") + c + "'", start);
    }

    std::optional<NodeId> parse_command(bool single)
    {
        std::size_t start = m_pos;
        ++m_pos;
        std::size_t end = m_pos;
        while (end < m_src.size() && is_letter(m_src[end])) {
            ++end;
        }
        if (end == m_pos) {
            char c = peek();
            if (c == ',' || c == ';' || c == '!' || c == ':' || c == ' ') {
                ++m_pos;
                return std::nullopt;
            }
            fail("unsupported command", start);
        }
        std::string name(m_src.substr(m_pos, end - m_pos));
        m_pos = end;

        if (name == "quad" || name == "qquad") {
            return std::nullopt;
        }
        if (name == "left" || name == "right") {
            if (single) {
                fail("delimiter command used as an argument", start);
            }
            skip_space();
            if (peek() == '.') {
                ++m_pos;
            }
            return std::nullopt;
        }
        if (name == "frac") {
            NodeId num = read_argument();
            NodeId den = read_argument();
            NodeId frac = make("\\frac", SymbolKind::OpOrdered);
            m_tree.attach(frac, Relation::Above, num);
            m_tree.attach(frac, Relation::Below, den);
            return frac;
        }
        if (name == "sqrt") {
            skip_space();
            if (peek() == '[') {
                fail("radical index is not supported", m_pos);
            }
            NodeId body = read_argument();
            NodeId root = make("\\sqrt", SymbolKind::Function);
            m_tree.attach(root, Relation::Inside, body);
            return root;
        }
        if (name == "sum" || name == "prod" || name == "int") {
            return make("\\" + name, SymbolKind::Function);
        }
        if (name == "times" || name == "cdot" || name == "neq") {
            return make("\\" + name, SymbolKind::OpUnordered);
        }
        if (name == "ast") {
            return make("*", SymbolKind::OpUnordered);
        }
        if (name == "div") {
            return make("\\div", SymbolKind::OpOrdered);
        }
        if (name == "le" || name == "leq") {
            return make("\\leq", SymbolKind::OpOrdered);
        }
        if (name == "ge" || name == "geq") {
            return make("\\geq", SymbolKind::OpOrdered);
        }
        if (name == "lt") {
            return make("<", SymbolKind::OpOrdered);
        }
        if (name == "gt") {
            return make(">", SymbolKind::OpOrdered);
        }
        if (name == "prec" || name == "preceq") {
            return make("\\" + name, SymbolKind::OpOrdered);
        }
        if (name == "infty") {
            return make("\\infty", SymbolKind::Number);
        }
        if (detail::greek_commands().contains(name)) {
            return make("\\" + name, SymbolKind::Variable);
        }
        if (detail::named_function_commands().contains(name)) {
            return make(name, SymbolKind::Function);
        }
        fail("unsupported command \\" + name, start);
    }

    std::string_view m_src;
    std::size_t m_pos = 0;
    SltTree m_tree;
};

}  // namespace

SltTree parse_latex(std::string_view latex)
{
    return LatexParser(latex).run();
}

}  // namespace mathfind
