#pragma once

// Candidate scoring. Each kernel has a serial reference that accumulates
// term-at-a-time over postings and a parallel version that scores
// candidates independently from the forward index.

#include <array>
#include <span>
#include <vector>

#include "mathfind/index/inverted_index.hpp"

namespace mathfind::kernels {

struct WeightedTerm {
    TermId term = 0;
    double weight = 0.0;
};

using FamilyMask = std::array<bool, kTermFamilyCount>;

/// Dice over weighted multisets for every formula slot in `slots` (sorted,
/// unique). `query` is sorted by term id; `query_total` includes weight of
/// query terms absent from the vocabulary.
void dice_scores(InvertedIndex const& index, std::span<WeightedTerm const> query,
                 double query_total, FamilyMask families, std::span<std::uint32_t const> slots,
                 std::span<double> out, Exec exec);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
    double delta = 1.0;
};

/// BM25+ over document text for every document in `docs` (sorted, unique).
/// `terms` are distinct and sorted.
void bm25_scores(InvertedIndex const& index, std::span<TermId const> terms,
                 std::span<DocNo const> docs, Bm25Params params, std::span<double> out, Exec exec);

/// Cosine between a query tf-idf vector (sorted by term id) and the token
/// vectors of `slots`.
void cosine_scores(InvertedIndex const& index, std::span<WeightedTerm const> query,
                   std::span<std::uint32_t const> slots, std::span<double> out, Exec exec);

}  // namespace mathfind::kernels
