#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mathfind {

struct RankedItem {
    std::string id;
    double score = 0.0;

    friend bool operator==(RankedItem const&, RankedItem const&) = default;
};

/// An engine's result list, best first.
struct Ranking {
    std::string tag;
    std::vector<RankedItem> items;

    /// Sorts by descending score, ties by ascending id. Throws
    /// std::invalid_argument on a duplicate id.
    void normalize_order();
};

/// Affine map onto [0,1]; a constant-score ranking maps to all 1.0.
[[nodiscard]] Ranking minmax_normalize(Ranking r);

/// Sum of weight times score, an absent item contributing 0. Weights must
/// be non-negative with a positive sum.
[[nodiscard]] Ranking linear_combine(std::vector<std::pair<double, Ranking>> const& weighted);

/// Reciprocal rank fusion with 1-based ranks.
[[nodiscard]] Ranking rrf(std::vector<Ranking> const& rankings, int k0 = 60);

/// Each ranking awards an item the number of items ranked below it.
[[nodiscard]] Ranking borda(std::vector<Ranking> const& rankings);

/// Round robin over the rankings; each turn emits that ranking's next item
/// not yet emitted. Scores count down from the output length.
[[nodiscard]] Ranking interleave(std::vector<Ranking> const& rankings);

}  // namespace mathfind
