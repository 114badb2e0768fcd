#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mathfind/eval/trec.hpp"
#include "mathfind/index/inverted_index.hpp"
#include "mathfind/phoc/phoc.hpp"
#include "mathfind/rerank/rerank.hpp"
#include "mathfind/service/engine.hpp"

namespace mathfind {

inline constexpr std::string_view kPhocFile = "phoc.bin";
inline constexpr std::string_view kVisualFile = "visual.tsv";

/// An index directory as loaded by the CLI and the HTTP service. Immutable
/// once built, so it is shared between threads through shared_ptr.
struct LoadedIndex {
    std::filesystem::path dir;
    InvertedIndex index;
    PhocIndex phoc;

    /// Throws IndexFormatError.
    [[nodiscard]] static std::shared_ptr<LoadedIndex const> load(std::filesystem::path const& dir);
};

/// `$...$` spans are the formula (the first one when there are several);
/// everything else is the text. Without dollars the whole query is both.
struct Query {
    std::string formula;
    std::string text;

    /// Throws std::invalid_argument on an unmatched `$`.
    [[nodiscard]] static Query parse(std::string_view raw);
};

struct SearchHit {
    std::string item;  // "doc#formula", or "doc" for document hits
    std::string doc_id;
    std::int32_t formula = -1;
    double score = 0.0;
    std::string latex;
    std::vector<std::string> matched_terms;
};

struct SearchOptions {
    /// Candidates fetched per engine before re-ranking or fusion.
    std::size_t candidate_depth = 100;
    int rrf_k0 = 60;
    RerankOptions rerank;
    Exec exec = Exec::Parallel;
};

/// Run ids: "d5#1" for formula 1 of document d5.
[[nodiscard]] std::string item_id(InvertedIndex const& index, DocNo doc, std::int32_t formula);

/// The single search path behind both the CLI and the HTTP API. Throws
/// EmptyQuery, ParseError, TranslateError or std::invalid_argument.
[[nodiscard]] std::vector<SearchHit> search(LoadedIndex const& index, Query const& query,
                                            EngineSpec const& spec,
                                            SearchOptions const& options = {});

struct Topic {
    std::string id;
    std::string query;
};

/// `topic<TAB>query` lines; blank lines and lines starting with '#' are skipped.
[[nodiscard]] std::vector<Topic> read_topics(std::istream& in);
[[nodiscard]] std::vector<Topic> read_topics(std::filesystem::path const& path);

/// One ranking per topic, tagged with spec.run_tag().
[[nodiscard]] Run search_topics(LoadedIndex const& index, std::vector<Topic> const& topics,
                                EngineSpec const& spec, SearchOptions const& options = {});

/// item<TAB>visual-id for every formula, in slot order.
void write_visual_map(std::ostream& out, InvertedIndex const& index);

}  // namespace mathfind
