#include "mathfind/rerank/ted.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mathfind/formula/canonical.hpp"

namespace mathfind {

int LabeledTree::add(std::string label, std::vector<int> kids)
{
    labels.push_back(std::move(label));
    children.push_back(std::move(kids));
    return static_cast<int>(labels.size()) - 1;
}

LabeledTree labeled_tree(SltTree const& slt)
{
    LabeledTree out;
    if (slt.root() == kNoNode) {
        return out;
    }
    auto build = [&](auto& self, NodeId id, std::string label) -> int {
        std::vector<int> kids;
        for (auto [rel, c] : slt.children(id)) {
            kids.push_back(self(self, c, std::string(relation_name(rel)) + ":" + slt.symbol(c).label));
        }
        return out.add(std::move(label), std::move(kids));
    };
    out.root = build(build, slt.root(), slt.symbol(slt.root()).label);
    return out;
}

LabeledTree labeled_tree(OptTree const& opt)
{
    LabeledTree out;
    if (opt.root() == kNoNode) {
        return out;
    }
    auto build = [&](auto& self, NodeId id) -> int {
        std::vector<int> kids;
        for (auto c : opt.children(id)) {
            kids.push_back(self(self, c));
        }
        return out.add(opt.symbol(id).label, std::move(kids));
    };
    out.root = build(build, opt.root());
    return out;
}

namespace {

struct Postorder {
    std::vector<int> node;      // postorder index -> tree node
    std::vector<int> leftmost;  // postorder index -> postorder index of leftmost leaf
    std::vector<int> keyroots;

    explicit Postorder(LabeledTree const& t)
    {
        auto visit = [&](auto& self, int id) -> int {
            int first = -1;
            for (int c : t.children[static_cast<std::size_t>(id)]) {
                int l = self(self, c);
                if (first < 0) {
                    first = l;
                }
            }
            node.push_back(id);
            int me = static_cast<int>(node.size()) - 1;
            leftmost.push_back(first < 0 ? me : first);
            return leftmost.back();
        };
        visit(visit, t.root);
        std::vector<bool> seen(node.size(), false);
        for (int i = static_cast<int>(node.size()) - 1; i >= 0; --i) {
            auto l = static_cast<std::size_t>(leftmost[static_cast<std::size_t>(i)]);
            if (!seen[l]) {
                seen[l] = true;
                keyroots.push_back(i);
            }
        }
        std::sort(keyroots.begin(), keyroots.end());
    }
};

double checked(double c)
{
    if (c < 0.0) {
        throw std::invalid_argument("edit costs must be nonnegative");
    }
    return c;
}

}  // namespace

double tree_edit_distance(LabeledTree const& a, LabeledTree const& b, EditCosts const& costs)
{
    if (a.root < 0 || b.root < 0) {
        throw std::invalid_argument("tree edit distance needs non-empty trees");
    }
    Postorder pa(a);
    Postorder pb(b);
    std::size_t const n = pa.node.size();
    std::size_t const m = pb.node.size();
    auto label_a = [&](std::size_t i) -> std::string const& {
        return a.labels[static_cast<std::size_t>(pa.node[i])];
    };
    auto label_b = [&](std::size_t j) -> std::string const& {
        return b.labels[static_cast<std::size_t>(pb.node[j])];
    };
    std::vector<double> del(n);
    std::vector<double> ins(m);
    for (std::size_t i = 0; i < n; ++i) {
        del[i] = checked(costs.remove(label_a(i)));
    }
    for (std::size_t j = 0; j < m; ++j) {
        ins[j] = checked(costs.insert(label_b(j)));
    }

    std::vector<std::vector<double>> td(n, std::vector<double>(m, 0.0));
    std::vector<std::vector<double>> fd(n + 1, std::vector<double>(m + 1, 0.0));
    for (int ki : pa.keyroots) {
        for (int kj : pb.keyroots) {
            auto const i = static_cast<std::size_t>(ki);
            auto const j = static_cast<std::size_t>(kj);
            auto const li = static_cast<std::size_t>(pa.leftmost[i]);
            auto const lj = static_cast<std::size_t>(pb.leftmost[j]);
            fd[0][0] = 0.0;
            for (std::size_t x = li; x <= i; ++x) {
                fd[x - li + 1][0] = fd[x - li][0] + del[x];
            }
            for (std::size_t y = lj; y <= j; ++y) {
                fd[0][y - lj + 1] = fd[0][y - lj] + ins[y];
            }
            for (std::size_t x = li; x <= i; ++x) {
                for (std::size_t y = lj; y <= j; ++y) {
                    auto const r = x - li + 1;
                    auto const c = y - lj + 1;
                    double best = std::min(fd[r - 1][c] + del[x], fd[r][c - 1] + ins[y]);
                    auto const lx = static_cast<std::size_t>(pa.leftmost[x]);
                    auto const ly = static_cast<std::size_t>(pb.leftmost[y]);
                    if (lx == li && ly == lj) {
                        double sub = checked(costs.substitute(label_a(x), label_b(y)));
                        best = std::min(best, fd[r - 1][c - 1] + sub);
                        fd[r][c] = best;
                        td[x][y] = best;
                    } else {
                        fd[r][c] = std::min(best, fd[lx - li][ly - lj] + td[x][y]);
                    }
                }
            }
        }
    }
    return td[n - 1][m - 1];
}

double sim_normalized(LabeledTree const& a, LabeledTree const& b, EditCosts const& costs)
{
    return 1.0 - tree_edit_distance(a, b, costs) / static_cast<double>(a.size() + b.size());
}

double sim_inverse(LabeledTree const& a, LabeledTree const& b, EditCosts const& costs)
{
    return 1.0 / (tree_edit_distance(a, b, costs) + 1.0);
}

double combined_ted_score(SltTree const& query_slt, OptTree const& query_opt,
                          SltTree const& cand_slt, OptTree const& cand_opt, double w_slt,
                          double w_opt, EditCosts const& costs)
{
    if (w_slt < 0.0 || w_opt < 0.0 || std::abs(w_slt + w_opt - 1.0) > 1e-9) {
        throw std::invalid_argument("TED weights must be nonnegative and sum to 1");
    }
    double score = 0.0;
    if (w_slt > 0.0) {
        score += w_slt * sim_inverse(labeled_tree(query_slt), labeled_tree(cand_slt), costs);
    }
    if (w_opt > 0.0) {
        score += w_opt * sim_inverse(labeled_tree(sort_unordered_args(query_opt)),
                                     labeled_tree(sort_unordered_args(cand_opt)), costs);
    }
    return score;
}

}  // namespace mathfind
