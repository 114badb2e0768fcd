#include "mathfind/rerank/alignment.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

namespace mathfind {

namespace {

class SltAligner {
  public:
    SltAligner(SltTree const& q, SltTree const& c, bool unify) : m_q(q), m_c(c), m_unify(unify) {}

    /// Largest number of query nodes aligned from any anchor.
    std::size_t best() const
    {
        std::size_t best = 0;
        if (m_q.root() == kNoNode || m_c.root() == kNoNode) {
            return 0;
        }
        auto qnodes = m_q.preorder();
        auto cnodes = m_c.preorder();
        for (auto qa : qnodes) {
            for (auto ca : cnodes) {
                best = std::max(best, grow(qa, ca));
            }
        }
        return best;
    }

  private:
    struct Bindings {
        std::map<std::string, std::string> q2c;
        std::map<std::string, std::string> c2q;
    };

    bool compatible(NodeId qn, NodeId cn, Bindings& b) const
    {
        auto const& qs = m_q.symbol(qn);
        auto const& cs = m_c.symbol(cn);
        if (qs.kind == SymbolKind::Wildcard) {
            return true;
        }
        if (m_unify && qs.kind == SymbolKind::Variable && cs.kind == SymbolKind::Variable) {
            auto qi = b.q2c.find(qs.label);
            auto ci = b.c2q.find(cs.label);
            if (qi == b.q2c.end() && ci == b.c2q.end()) {
                b.q2c.emplace(qs.label, cs.label);
                b.c2q.emplace(cs.label, qs.label);
                return true;
            }
            return qi != b.q2c.end() && qi->second == cs.label;
        }
        return qs == cs;
    }

    std::size_t grow(NodeId qa, NodeId ca) const
    {
        Bindings b;
        if (!compatible(qa, ca, b)) {
            return 0;
        }
        std::size_t matched = 1;
        std::deque<std::pair<NodeId, NodeId>> work{{qa, ca}};
        while (!work.empty()) {
            auto [qn, cn] = work.front();
            work.pop_front();
            for (auto [rel, qc] : m_q.children(qn)) {
                auto cc = m_c.child(cn, rel);
                if (cc != kNoNode && compatible(qc, cc, b)) {
                    ++matched;
                    work.emplace_back(qc, cc);
                }
            }
        }
        return matched;
    }

    SltTree const& m_q;
    SltTree const& m_c;
    bool m_unify;
};

double harmonic(double a, double b)
{
    return a + b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
}

constexpr double kNone = -1.0;

class CommonSubtrees {
  public:
    CommonSubtrees(OptTree const& q, OptTree const& c, Approach0Weights w)
        : m_q(q), m_c(c), m_w(w), m_qused(q.size(), false), m_cused(c.size(), false)
    {}

    double run(int rounds)
    {
        double total = 0.0;
        if (m_q.root() == kNoNode || m_c.root() == kNoNode) {
            return 0.0;
        }
        auto qnodes = m_q.preorder();
        auto cnodes = m_c.preorder();
        for (int r = 0; r < rounds; ++r) {
            m_memo.assign(m_q.size() * m_c.size(), std::numeric_limits<double>::quiet_NaN());
            double best = 0.0;
            std::pair<NodeId, NodeId> arg{kNoNode, kNoNode};
            for (auto u : qnodes) {
                for (auto v : cnodes) {
                    double s = value(u, v);
                    if (s > best) {
                        best = s;
                        arg = {u, v};
                    }
                }
            }
            if (arg.first == kNoNode) {
                break;
            }
            total += best;
            mark(arg.first, arg.second);
        }
        return total;
    }

  private:
    double weight(NodeId u) const { return m_q.is_leaf(u) ? m_w.operand : m_w.op; }

    double value(NodeId u, NodeId v)
    {
        auto& slot = m_memo[static_cast<std::size_t>(u) * m_c.size() + static_cast<std::size_t>(v)];
        if (slot == slot) {
            return slot;
        }
        if (m_qused[static_cast<std::size_t>(u)] || m_cused[static_cast<std::size_t>(v)] ||
            !(m_q.symbol(u) == m_c.symbol(v))) {
            slot = kNone;
            return slot;
        }
        slot = weight(u) + match_children(u, v, nullptr);
        return slot;
    }

    /// Best total over child pairings; optionally reports the chosen pairs.
    double match_children(NodeId u, NodeId v, std::vector<std::pair<NodeId, NodeId>>* chosen)
    {
        auto const& a = m_q.children(u);
        auto const& b = m_c.children(v);
        std::size_t const n = a.size();
        std::size_t const m = b.size();
        if (n == 0 || m == 0) {
            return 0.0;
        }
        std::vector<std::vector<double>> g(n, std::vector<double>(m));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                g[i][j] = value(a[i], b[j]);
            }
        }
        if (m_q.is_ordered(u)) {
            // Ordered arguments only match position by position.
            double total = 0.0;
            for (std::size_t i = 0; i < std::min(n, m); ++i) {
                if (g[i][i] > 0.0) {
                    total += g[i][i];
                    if (chosen) {
                        chosen->emplace_back(a[i], b[i]);
                    }
                }
            }
            return total;
        }
        return assign(a, b, g, chosen);
    }

    // Maximum weight matching between unordered argument lists. Exact by
    // bitmask over the smaller side up to 16 arguments, greedy beyond.
    static double assign(std::vector<NodeId> const& a, std::vector<NodeId> const& b,
                         std::vector<std::vector<double>> const& g,
                         std::vector<std::pair<NodeId, NodeId>>* chosen)
    {
        std::size_t const n = a.size();
        std::size_t const m = b.size();
        bool transpose = m > n;
        std::size_t const rows = transpose ? m : n;
        std::size_t const cols = transpose ? n : m;
        auto at = [&](std::size_t r, std::size_t c) { return transpose ? g[c][r] : g[r][c]; };
        auto emit = [&](std::size_t r, std::size_t c) {
            if (chosen) {
                chosen->emplace_back(transpose ? a[c] : a[r], transpose ? b[r] : b[c]);
            }
        };
        if (cols > 16) {
            std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < cols; ++c) {
                    if (at(r, c) > 0.0) {
                        edges.emplace_back(-at(r, c), r, c);
                    }
                }
            }
            std::sort(edges.begin(), edges.end());
            std::vector<bool> ru(rows, false);
            std::vector<bool> cu(cols, false);
            double total = 0.0;
            for (auto [w, r, c] : edges) {
                if (!ru[r] && !cu[c]) {
                    ru[r] = cu[c] = true;
                    total -= w;
                    emit(r, c);
                }
            }
            return total;
        }
        std::size_t const full = std::size_t{1} << cols;
        std::vector<std::vector<double>> dp(rows + 1, std::vector<double>(full, kNone));
        dp[0][0] = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t mask = 0; mask < full; ++mask) {
                if (dp[r][mask] < 0.0) {
                    continue;
                }
                dp[r + 1][mask] = std::max(dp[r + 1][mask], dp[r][mask]);
                for (std::size_t c = 0; c < cols; ++c) {
                    if (!(mask >> c & 1) && at(r, c) > 0.0) {
                        auto next = mask | (std::size_t{1} << c);
                        dp[r + 1][next] = std::max(dp[r + 1][next], dp[r][mask] + at(r, c));
                    }
                }
            }
        }
        std::size_t best_mask = 0;
        for (std::size_t mask = 0; mask < full; ++mask) {
            if (dp[rows][mask] > dp[rows][best_mask]) {
                best_mask = mask;
            }
        }
        double total = dp[rows][best_mask];
        if (chosen) {
            auto mask = best_mask;
            for (std::size_t r = rows; r > 0; --r) {
                if (dp[r - 1][mask] == dp[r][mask]) {
                    continue;
                }
                for (std::size_t c = 0; c < cols; ++c) {
                    if ((mask >> c & 1) && at(r - 1, c) > 0.0) {
                        auto prev = mask & ~(std::size_t{1} << c);
                        if (dp[r - 1][prev] >= 0.0 && dp[r - 1][prev] + at(r - 1, c) == dp[r][mask]) {
                            emit(r - 1, c);
                            mask = prev;
                            break;
                        }
                    }
                }
            }
        }
        return total;
    }

    void mark(NodeId u, NodeId v)
    {
        std::vector<std::pair<NodeId, NodeId>> kids;
        match_children(u, v, &kids);
        m_qused[static_cast<std::size_t>(u)] = true;
        m_cused[static_cast<std::size_t>(v)] = true;
        for (auto [a, b] : kids) {
            mark(a, b);
        }
    }

    OptTree const& m_q;
    OptTree const& m_c;
    Approach0Weights m_w;
    std::vector<bool> m_qused;
    std::vector<bool> m_cused;
    std::vector<double> m_memo;
};

}  // namespace

AlignmentScore mss_score(SltTree const& query, SltTree const& cand)
{
    AlignmentScore out;
    if (query.root() == kNoNode || cand.root() == kNoNode) {
        return out;
    }
    auto const qsize = static_cast<double>(query.size());
    std::size_t exact = SltAligner(query, cand, false).best();
    std::size_t unified = SltAligner(query, cand, true).best();
    double symbol_recall = static_cast<double>(exact) / qsize;
    double relation_recall = query.size() == 1
                                 ? (exact == 1 ? 1.0 : 0.0)
                                 : static_cast<double>(exact == 0 ? 0 : exact - 1) / (qsize - 1.0);
    out.mss = harmonic(symbol_recall, relation_recall);
    out.precision_unified = static_cast<double>(unified) / static_cast<double>(cand.size());
    out.recall_raw = symbol_recall;
    return out;
}

double approach0_score(OptTree const& query, OptTree const& cand, Approach0Weights weights)
{
    if (query.root() == kNoNode) {
        return 0.0;
    }
    double denom = 0.0;
    for (auto id : query.preorder()) {
        denom += query.is_leaf(id) ? weights.operand : weights.op;
    }
    if (denom <= 0.0) {
        return 0.0;
    }
    return CommonSubtrees(query.compact(), cand.compact(), weights).run(3) / denom;
}

}  // namespace mathfind
