#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mathfind/rerank/rerank.hpp"

namespace mathfind {

enum class EngineKind { Slt, Opt, WikiMirs, DlmfText, Bm25Text, Phoc, Fused };
enum class FusionMethod { Linear, Rrf, Borda, Interleave };

[[nodiscard]] std::string_view engine_name(EngineKind e) noexcept;
/// Throws std::invalid_argument.
[[nodiscard]] EngineKind engine_from_name(std::string_view name);
[[nodiscard]] std::string_view fusion_name(FusionMethod m) noexcept;
[[nodiscard]] FusionMethod fusion_from_name(std::string_view name);

/// Engines that score documents rather than formulas.
[[nodiscard]] bool is_text_engine(EngineKind e) noexcept;

/// Written as `engine[/rerank]`, where a fused engine is
/// `fused:<method>:<component>+<component>[+...]` and linear components may
/// carry a weight, as in `fused:linear:slt=0.7+bm25-text=0.3`.
struct EngineSpec {
    EngineKind engine = EngineKind::Slt;
    RerankMethod rerank = RerankMethod::None;
    FusionMethod fusion = FusionMethod::Rrf;
    std::vector<EngineKind> components;
    std::vector<double> weights;  // one per component
    std::size_t k = 10;

    /// Throws std::invalid_argument for unknown names, a fused engine with
    /// fewer than two components, nesting, or weights outside linear fusion.
    [[nodiscard]] static EngineSpec parse(std::string_view text);
    /// Canonical form; parse(str()) reproduces the spec except for k.
    [[nodiscard]] std::string str() const;
    /// Canonical form plus an FNV-1a hash of it, usable as a run tag.
    [[nodiscard]] std::string run_tag() const;
    /// True when hits are documents: a text engine, or fusion involving one.
    [[nodiscard]] bool document_level() const noexcept;

    friend bool operator==(EngineSpec const&, EngineSpec const&) = default;
};

[[nodiscard]] std::uint64_t fnv1a64(std::string_view s) noexcept;

}  // namespace mathfind
