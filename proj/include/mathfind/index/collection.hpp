#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "mathfind/index/inverted_index.hpp"

namespace mathfind {

/// JSON lines with `id`, `text` and `formulas` (array of LaTeX). Blank lines
/// are skipped. Throws FormatError with the offending line number.
[[nodiscard]] std::vector<DocInput> read_collection(std::istream& in);
[[nodiscard]] std::vector<DocInput> read_collection(std::filesystem::path const& path);

}  // namespace mathfind
