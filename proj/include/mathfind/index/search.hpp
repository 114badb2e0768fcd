#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mathfind/index/inverted_index.hpp"
#include "mathfind/index/kernels.hpp"

namespace mathfind {

/// A scored formula, or a document when `formula` is -1.
struct Hit {
    DocNo doc = 0;
    std::int32_t formula = -1;
    double score = 0.0;

    friend bool operator==(Hit const&, Hit const&) = default;
};

/// Descending score, ties by ascending (doc, formula); keeps the first k.
void rank_hits(std::vector<Hit>& hits, std::size_t k);

/// Dice coefficient between the query term multiset and each formula's terms
/// of the same families. Throws EmptyQuery.
[[nodiscard]] std::vector<Hit> dice_search(TermCounts const& query, InvertedIndex const& index,
                                           std::size_t k, Exec exec = Exec::Parallel);

/// BM25+ over document text. `words` are plain lowercase words.
[[nodiscard]] std::vector<Hit> bm25plus_search(std::vector<std::string> const& words,
                                               InvertedIndex const& index, std::size_t k,
                                               kernels::Bm25Params params = {},
                                               Exec exec = Exec::Parallel);

/// Cosine over tf-idf weighted formula token vectors.
[[nodiscard]] std::vector<Hit> tfidf_search(TermCounts const& query, InvertedIndex const& index,
                                            std::size_t k, Exec exec = Exec::Parallel);

/// Formula hits whose document also has a text hit, in their original order.
[[nodiscard]] std::vector<Hit> boolean_filter(std::vector<Hit> const& formula_hits,
                                              std::vector<Hit> const& text_hits);

/// Query terms present in a formula's (or, for formula -1, a document's text) terms.
[[nodiscard]] std::vector<std::string> matched_terms(TermCounts const& query,
                                                     InvertedIndex const& index, DocNo doc,
                                                     std::int32_t formula);

}  // namespace mathfind
