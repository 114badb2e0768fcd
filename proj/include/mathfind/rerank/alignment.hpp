#pragma once

#include "mathfind/formula/opt.hpp"
#include "mathfind/formula/slt.hpp"

namespace mathfind {

struct AlignmentScore {
    double mss = 0.0;
    double precision_unified = 0.0;
    double recall_raw = 0.0;

    friend auto operator<=>(AlignmentScore const&, AlignmentScore const&) = default;
};

/// Best connected common subtree alignment of the query layout tree onto the
/// candidate. Alignments grow downward from every compatible anchor pair
/// along identical relations. mss is the harmonic mean of symbol recall and
/// relationship recall (query edges whose endpoints are both aligned).
/// Query wildcards match any symbol. The precision tie-breaker additionally
/// lets query variables unify with candidate variables under a consistent
/// one-to-one renaming.
[[nodiscard]] AlignmentScore mss_score(SltTree const& query, SltTree const& cand);

struct Approach0Weights {
    double operand = 0.6;
    double op = 0.4;
};

/// Up to three disjoint largest common subtrees, chosen greedily by weight.
/// Score is the weighted count of matched query leaves and operators over the
/// same weighted count for the whole query.
[[nodiscard]] double approach0_score(OptTree const& query, OptTree const& cand,
                                     Approach0Weights weights = {});

}  // namespace mathfind
