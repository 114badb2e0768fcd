#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mathfind/index/search.hpp"
#include "mathfind/rerank/alignment.hpp"
#include "mathfind/rerank/ted.hpp"

namespace mathfind {

enum class RerankMethod { None, TedSlt, TedOpt, TedCombined, Mss, Approach0 };

/// Names: none, ted-slt, ted-opt, ted-combined, mss, approach0.
[[nodiscard]] RerankMethod rerank_from_name(std::string_view name);
[[nodiscard]] std::string_view rerank_name(RerankMethod m) noexcept;

struct RerankOptions {
    double w_slt = 0.5;
    double w_opt = 0.5;
    Approach0Weights approach0{};
};

/// Rescore formula hits against the query and reorder them; the set of hits
/// is unchanged. Candidates whose LaTeX does not parse or translate score 0.
/// MSS ties are broken by the precision and raw-recall tie-breakers before
/// the usual (doc, formula) order. Throws ParseError/TranslateError when the
/// query itself cannot be represented.
[[nodiscard]] std::vector<Hit> rerank(std::vector<Hit> hits, std::string_view query_latex,
                                      InvertedIndex const& index, RerankMethod method,
                                      RerankOptions const& options = {},
                                      Exec exec = Exec::Parallel);

}  // namespace mathfind
