#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mathfind/formula/slt.hpp"

namespace mathfind {

/// Reading-order text tokens with Begin/End structure markers, e.g.
/// `x^{t-2}=1` -> x BeginExponent t minus 2 EndExponent Equal 1.
[[nodiscard]] std::vector<std::string> linearize_dlmf(SltTree const& slt);

/// Token spelled for one layout symbol label.
[[nodiscard]] std::string dlmf_token(std::string_view label);

/// Visual identity of a formula: the canonical SLT serialization, or the raw
/// string when the LaTeX does not parse.
[[nodiscard]] std::string visual_id(std::string_view latex);
[[nodiscard]] std::string visual_id(SltTree const& slt);

}  // namespace mathfind
