#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mathfind/formula/opt.hpp"
#include "mathfind/formula/slt.hpp"

namespace mathfind {

/// Ordered labeled tree used for edit distance.
struct LabeledTree {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> children;
    int root = -1;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    int add(std::string label, std::vector<int> kids = {});
};

/// Node labels are `REL:label` (the root is unprefixed); children follow
/// relation-name order.
[[nodiscard]] LabeledTree labeled_tree(SltTree const& slt);
/// Children in stored order; callers sort unordered arguments first when
/// argument order should not matter.
[[nodiscard]] LabeledTree labeled_tree(OptTree const& opt);

struct EditCosts {
    std::function<double(std::string const&)> insert = [](std::string const&) { return 1.0; };
    std::function<double(std::string const&)> remove = [](std::string const&) { return 1.0; };
    std::function<double(std::string const&, std::string const&)> substitute =
        [](std::string const& a, std::string const& b) { return a == b ? 0.0 : 1.0; };
};

/// Ordered tree edit distance (keyroot dynamic program). Throws
/// std::invalid_argument on an empty tree or a negative cost.
[[nodiscard]] double tree_edit_distance(LabeledTree const& a, LabeledTree const& b,
                                        EditCosts const& costs = {});

/// 1 - d / (|a| + |b|)
[[nodiscard]] double sim_normalized(LabeledTree const& a, LabeledTree const& b,
                                    EditCosts const& costs = {});
/// 1 / (d + 1)
[[nodiscard]] double sim_inverse(LabeledTree const& a, LabeledTree const& b,
                                 EditCosts const& costs = {});

/// w_slt * sim_inverse(SLTs) + w_opt * sim_inverse(OPTs); weights must be
/// nonnegative and sum to 1. OPT arguments are sorted before comparison.
[[nodiscard]] double combined_ted_score(SltTree const& query_slt, OptTree const& query_opt,
                                        SltTree const& cand_slt, OptTree const& cand_opt,
                                        double w_slt, double w_opt, EditCosts const& costs = {});

}  // namespace mathfind
