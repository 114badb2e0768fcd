#include "mathfind/formula/linearize.hpp"

#include <map>

#include "latex_tables.hpp"
#include "mathfind/error.hpp"
#include "mathfind/formula/latex.hpp"

namespace mathfind {

std::string dlmf_token(std::string_view label)
{
    static std::map<std::string, std::string, std::less<>> const names = {
        {"+", "plus"},
        {"-", "minus"},
        {"=", "Equal"},
        {"<", "LessThan"},
        {">", "GreaterThan"},
        {"\\leq", "LessEqual"},
        {"\\geq", "GreaterEqual"},
        {"\\neq", "NotEqual"},
        {"\\prec", "Precedes"},
        {"\\preceq", "PrecedesEqual"},
        {"\\times", "times"},
        {"\\cdot", "cdot"},
        {"*", "ast"},
        {"/", "slash"},
        {"\\div", "div"},
        {",", "comma"},
        {"(", "LeftParenthesis"},
        {")", "RightParenthesis"},
        {"[", "LeftBracket"},
        {"]", "RightBracket"},
        {"\\infty", "infinity"},
        {"\\sum", "sum"},
        {"\\prod", "prod"},
        {"\\int", "int"},
    };
    if (auto it = names.find(label); it != names.end()) {
        return it->second;
    }
    if (!label.empty() && label.front() == '\\') {
        return std::string(label.substr(1));
    }
    return std::string(label);
}

namespace {

class DlmfLinearizer {
  public:
    explicit DlmfLinearizer(SltTree const& slt) : m_slt(slt) {}

    std::vector<std::string> run()
    {
        if (!m_slt.empty() && m_slt.root() != kNoNode) {
            line(m_slt.root());
        }
        return std::move(m_out);
    }

  private:
    void wrapped(NodeId head, char const* begin, char const* end)
    {
        if (head == kNoNode) {
            return;
        }
        m_out.emplace_back(begin);
        line(head);
        m_out.emplace_back(end);
    }

    void line(NodeId head)
    {
        for (NodeId cur = head; cur != kNoNode; cur = m_slt.child(cur, Relation::Next)) {
            wrapped(m_slt.child(cur, Relation::PreSub), "BeginPresubscript", "EndPresubscript");
            wrapped(m_slt.child(cur, Relation::PreSup), "BeginPresuperscript", "EndPresuperscript");
            auto const& label = m_slt.symbol(cur).label;
            if (label == "\\frac") {
                m_out.emplace_back("BeginFraction");
                line(m_slt.child(cur, Relation::Above));
                m_out.emplace_back("Over");
                line(m_slt.child(cur, Relation::Below));
                m_out.emplace_back("EndFraction");
            } else if (label == "\\sqrt") {
                wrapped(m_slt.child(cur, Relation::Inside), "BeginRadical", "EndRadical");
            } else {
                m_out.push_back(dlmf_token(label));
                wrapped(m_slt.child(cur, Relation::Above), "BeginUpperLimit", "EndUpperLimit");
                wrapped(m_slt.child(cur, Relation::Below), "BeginLowerLimit", "EndLowerLimit");
                wrapped(m_slt.child(cur, Relation::Inside), "BeginInside", "EndInside");
            }
            wrapped(m_slt.child(cur, Relation::Sub), "BeginSubscript", "EndSubscript");
            wrapped(m_slt.child(cur, Relation::Sup), "BeginExponent", "EndExponent");
        }
    }

    SltTree const& m_slt;
    std::vector<std::string> m_out;
};

}  // namespace

std::vector<std::string> linearize_dlmf(SltTree const& slt)
{
    return DlmfLinearizer(slt).run();
}

std::string visual_id(SltTree const& slt)
{
    return serialize(slt);
}

std::string visual_id(std::string_view latex)
{
    try {
        return serialize(parse_latex(latex));
    } catch (ParseError const&) {
        return std::string(latex);
    }
}

}  // namespace mathfind
