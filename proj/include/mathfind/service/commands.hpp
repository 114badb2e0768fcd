#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mathfind/eval/metrics.hpp"
#include "mathfind/index/terms.hpp"
#include "mathfind/phoc/phoc.hpp"
#include "mathfind/service/searcher.hpp"
#include "mathfind/wp/problems.hpp"

namespace mathfind {

// Verb implementations shared by the command-line tool and the tests. They
// report failures with exceptions; the tool maps those to exit codes.

struct IndexSummary {
    std::size_t documents = 0;
    std::size_t formulas = 0;
    std::size_t terms = 0;
};

/// Builds `out` from a JSON-lines collection. Refuses to overwrite existing
/// index files unless `force` is set. Warnings go to `log`.
IndexSummary cmd_index(std::filesystem::path const& collection, std::filesystem::path const& out,
                       bool force, ExtractorConfig const& config, RegionScheme const& scheme,
                       std::ostream& log);

/// Writes a TREC run for a topics file, or for a single query under the
/// topic id "q".
Run cmd_search(LoadedIndex const& index, std::vector<Topic> const& topics, EngineSpec const& spec,
               SearchOptions const& options, std::ostream& out);

/// Symbols are labels placed left to right on one baseline.
[[nodiscard]] std::vector<SymbolBox> row_of_symbols(std::vector<std::string> const& labels);

/// `item<TAB>score<TAB>latex` per candidate.
void cmd_autocomplete(LoadedIndex const& index, std::vector<SymbolBox> const& symbols,
                      std::size_t k, std::ostream& out);

struct EvalRequest {
    std::filesystem::path qrels;
    std::filesystem::path run;
    std::vector<std::string> metrics;
    std::optional<std::filesystem::path> visual_map;
    GradeScale scale;
};

Report cmd_eval(EvalRequest const& request, std::ostream& out);

/// `id<TAB>predicted<TAB>correct?` per problem, then `accuracy<TAB>value`
/// over the problems that carry an answer. A problem that cannot be solved
/// is reported with predicted "-". Returns the accuracy.
double cmd_solve_wp(std::filesystem::path const& problems, SolveMode mode, std::ostream& out);

}  // namespace mathfind
