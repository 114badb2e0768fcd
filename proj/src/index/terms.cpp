#include "mathfind/index/terms.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

#include "mathfind/error.hpp"
#include "mathfind/formula/canonical.hpp"
#include "mathfind/formula/latex.hpp"
#include "mathfind/formula/linearize.hpp"

namespace mathfind {

std::string path_code(std::vector<Relation> const& path)
{
    std::string out;
    for (auto r : path) {
        out += relation_code(r);
    }
    return out;
}

std::string tuple_string(SltTuple const& t)
{
    return "(" + t.parent + "," + t.child + "," + path_code(t.path) + ")";
}

std::vector<SltTuple> slt_tuples(SltTree const& slt, int max_path_length)
{
    if (max_path_length < 1) {
        throw std::invalid_argument("max_path_length must be >= 1");
    }
    std::map<std::string, SltTuple> found;
    std::vector<Relation> path;
    std::function<void(NodeId, NodeId)> walk = [&](NodeId anchor, NodeId at) {
        for (auto [rel, c] : slt.children(at)) {
            path.push_back(rel);
            SltTuple t{slt.symbol(anchor).label, slt.symbol(c).label, path, 1};
            auto [it, inserted] = found.try_emplace(tuple_string(t), t);
            if (!inserted) {
                ++it->second.count;
            }
            if (static_cast<int>(path.size()) < max_path_length) {
                walk(anchor, c);
            }
            path.pop_back();
        }
    };
    if (slt.root() != kNoNode) {
        for (auto id : slt.preorder()) {
            walk(id, id);
        }
    }
    std::vector<SltTuple> out;
    out.reserve(found.size());
    for (auto& [key, t] : found) {
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<OptTuple> opt_tuples(OptTree const& opt)
{
    std::vector<OptTuple> out;
    if (opt.root() == kNoNode) {
        return out;
    }
    for (auto id : opt.preorder()) {
        auto const& kids = opt.children(id);
        bool ordered = opt.is_ordered(id);
        for (std::size_t i = 0; i < kids.size(); ++i) {
            out.push_back({opt.symbol(id).label, opt.symbol(kids[i]).label,
                           ordered ? static_cast<int>(i + 1) : 0});
        }
    }
    return out;
}

std::vector<std::vector<std::string>> opt_leafroot_paths(OptTree const& source, bool enumerate)
{
    std::vector<std::vector<std::string>> out;
    if (source.root() == kNoNode) {
        return out;
    }
    OptTree const opt = enumerate ? enumerate_variables(source) : source;
    auto parents = opt.parents();
    for (auto id : opt.preorder()) {
        if (!opt.is_leaf(id)) {
            continue;
        }
        std::vector<std::string> path;
        for (NodeId cur = id; cur != kNoNode; cur = parents[static_cast<std::size_t>(cur)]) {
            path.push_back(opt.symbol(cur).label);
        }
        out.push_back(std::move(path));
    }
    return out;
}

namespace {

std::string operator_text(std::string const& label)
{
    if (label == "times") {
        return "×";
    }
    if (label == "cdot") {
        return "·";
    }
    if (label == "ast") {
        return "*";
    }
    if (label == "divide") {
        return "/";
    }
    return label;
}

class InfixWriter {
  public:
    InfixWriter(OptTree const& opt, bool wildcard_args) : m_opt(opt), m_wild(wildcard_args) {}

    std::string node(NodeId id, bool top = false)
    {
        if (m_wild && !top) {
            return m_opt.node(id).parenthesized ? "(*)" : "*";
        }
        auto b = body(id);
        return m_opt.node(id).parenthesized ? "(" + b + ")" : b;
    }

    std::string body(NodeId id)
    {
        auto const& sym = m_opt.symbol(id);
        auto const& kids = m_opt.children(id);
        if (kids.empty()) {
            return sym.label;
        }
        auto const& label = sym.label;
        if ((label == "sub" || label == "sup") && kids.size() == 2) {
            return grouped(kids[0]) + (label == "sub" ? "_" : "^") + grouped(kids[1]);
        }
        if ((label == "presub" || label == "presup") && kids.size() == 2) {
            return std::string("{}") + (label == "presub" ? "_" : "^") + grouped(kids[1]) +
                   grouped(kids[0]);
        }
        if (sym.kind == SymbolKind::Function) {
            std::string out = label + "(";
            for (std::size_t i = 0; i < kids.size(); ++i) {
                out += (i ? "," : "") + node(kids[i]);
            }
            return out + ")";
        }
        if (label == "divide" && kids.size() == 2) {
            return grouped(kids[0]) + "/" + grouped(kids[1]);
        }
        auto op = operator_text(label);
        if (kids.size() == 1) {
            return op + node(kids[0]);
        }
        std::string out;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            out += (i ? op : "") + node(kids[i]);
        }
        return out;
    }

  private:
    // Compound operands of fractions and scripts are braced.
    std::string grouped(NodeId id)
    {
        auto s = node(id);
        if (!m_wild && !m_opt.is_leaf(id) && !m_opt.node(id).parenthesized) {
            return "{" + s + "}";
        }
        return s;
    }

    OptTree const& m_opt;
    bool m_wild;
};

void add_unique(std::vector<std::string>& out, std::set<std::string>& seen, std::string term)
{
    if (seen.insert(term).second) {
        out.push_back(std::move(term));
    }
}

}  // namespace

std::string infix_term(OptTree const& opt, NodeId id)
{
    return InfixWriter(opt, false).node(id, true);
}

GeneralizedTermSet wikimirs_terms(OptTree const& opt)
{
    GeneralizedTermSet out;
    if (opt.root() == kNoNode) {
        return out;
    }
    std::set<std::string> seen_c;
    std::set<std::string> seen_g;
    if (opt.is_leaf(opt.root())) {
        out.concrete.push_back(opt.symbol(opt.root()).label);
        return out;
    }
    InfixWriter concrete(opt, false);
    InfixWriter general(opt, true);
    for (auto id : opt.preorder()) {
        if (opt.is_leaf(id)) {
            continue;
        }
        add_unique(out.concrete, seen_c, concrete.node(id, true));
        auto g = general.body(id);
        if (opt.node(id).parenthesized) {
            add_unique(out.generalized, seen_g, "(*)");
            add_unique(out.concrete, seen_c, concrete.body(id));
        }
        add_unique(out.generalized, seen_g, std::move(g));
    }
    return out;
}

std::vector<std::string> text_words(std::string_view text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        auto u = static_cast<unsigned char>(ch);
        if (u >= 0x80 || std::isalnum(u)) {
            cur += u < 0x80 ? static_cast<char>(std::tolower(u)) : ch;
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) {
        out.push_back(std::move(cur));
    }
    return out;
}

namespace {

constexpr std::string_view kPrefixes[kTermFamilyCount] = {"slt:", "opt:", "wm:", "tok:", "txt:"};
constexpr std::string_view kNames[kTermFamilyCount] = {"slt", "opt", "wikimirs", "tokens", "text"};

}  // namespace

std::string_view family_prefix(TermFamily f) noexcept
{
    return kPrefixes[static_cast<int>(f)];
}

std::string_view family_name(TermFamily f) noexcept
{
    return kNames[static_cast<int>(f)];
}

TermFamily family_from_name(std::string_view name)
{
    for (int i = 0; i < kTermFamilyCount; ++i) {
        if (kNames[i] == name) {
            return static_cast<TermFamily>(i);
        }
    }
    throw std::invalid_argument("unknown term family '" + std::string(name) + "'");
}

TermFamily family_of(std::string_view term)
{
    for (int i = 0; i < kTermFamilyCount; ++i) {
        if (term.substr(0, kPrefixes[i].size()) == kPrefixes[i]) {
            return static_cast<TermFamily>(i);
        }
    }
    throw std::invalid_argument("unprefixed term '" + std::string(term) + "'");
}

double term_weight(std::string_view term) noexcept
{
    return term.substr(0, 5) == "wm:g:" ? 0.5 : 1.0;
}

bool ExtractorConfig::enabled(TermFamily f) const noexcept
{
    switch (f) {
    case TermFamily::Slt: return slt;
    case TermFamily::Opt: return opt;
    case TermFamily::WikiMirs: return wikimirs;
    case TermFamily::Token: return tokens;
    case TermFamily::Text: return text;
    }
    return false;
}

TermCounts formula_terms(std::string_view latex, TermFamily family, ExtractorConfig const& config)
{
    TermCounts out;
    if (family == TermFamily::Text) {
        return out;
    }
    auto slt = parse_latex(latex);
    std::string prefix(family_prefix(family));
    auto join = [](std::vector<std::string> const& path) {
        std::string s;
        for (std::size_t i = 0; i < path.size(); ++i) {
            s += (i ? "/" : "") + path[i];
        }
        return s;
    };
    switch (family) {
    case TermFamily::Slt:
        for (auto const& t : slt_tuples(slt, config.slt_max_path)) {
            out[prefix + tuple_string(t)] += t.count;
        }
        break;
    case TermFamily::Token:
        for (auto const& tok : linearize_dlmf(slt)) {
            ++out[prefix + tok];
        }
        break;
    case TermFamily::Opt:
    case TermFamily::WikiMirs: {
        OptTree opt;
        try {
            opt = slt_to_opt(slt);
        } catch (TranslateError const&) {
            return out;
        }
        if (family == TermFamily::Opt) {
            for (auto const& p : opt_leafroot_paths(opt, false)) {
                ++out[prefix + join(p)];
            }
            for (auto const& p : opt_leafroot_paths(opt, true)) {
                ++out[prefix + "e:" + join(p)];
            }
        } else {
            auto terms = wikimirs_terms(opt);
            for (auto const& t : terms.concrete) {
                ++out[prefix + t];
            }
            for (auto const& t : terms.generalized) {
                ++out[prefix + "g:" + t];
            }
        }
        break;
    }
    case TermFamily::Text: break;
    }
    return out;
}

TermCounts formula_terms(std::string_view latex, ExtractorConfig const& config)
{
    TermCounts out;
    try {
        for (auto f : {TermFamily::Slt, TermFamily::Opt, TermFamily::WikiMirs, TermFamily::Token}) {
            if (!config.enabled(f)) {
                continue;
            }
            for (auto& [term, n] : formula_terms(latex, f, config)) {
                out[term] += n;
            }
        }
    } catch (ParseError const&) {
        return {};
    }
    return out;
}

TermCounts text_terms(std::string_view text)
{
    TermCounts out;
    for (auto& w : text_words(text)) {
        ++out["txt:" + w];
    }
    return out;
}

}  // namespace mathfind
