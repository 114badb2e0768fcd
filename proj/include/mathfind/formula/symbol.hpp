#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace mathfind {

enum class SymbolKind : std::uint8_t {
    Variable,
    Number,
    OpOrdered,
    OpUnordered,
    Function,
    Container,
    Wildcard,
};

struct MathSymbol {
    std::string label;
    SymbolKind kind = SymbolKind::Variable;

    friend bool operator==(MathSymbol const&, MathSymbol const&) = default;
};

/// One-letter tag used in serializations and type tagging (V, N, O, U, F, C, W).
[[nodiscard]] char kind_tag(SymbolKind kind) noexcept;
[[nodiscard]] std::string_view kind_name(SymbolKind kind) noexcept;

[[nodiscard]] inline bool is_operator_kind(SymbolKind k) noexcept
{
    return k == SymbolKind::OpOrdered || k == SymbolKind::OpUnordered || k == SymbolKind::Function;
}

[[nodiscard]] inline bool is_leaf_kind(SymbolKind k) noexcept
{
    return k == SymbolKind::Variable || k == SymbolKind::Number || k == SymbolKind::Wildcard;
}

/// The eight spatial relationships between symbols in a layout tree.
enum class Relation : std::uint8_t {
    Next,
    Sub,
    Sup,
    PreSub,
    PreSup,
    Inside,
    Above,
    Below,
};

inline constexpr std::size_t kRelationCount = 8;

inline constexpr std::array<Relation, kRelationCount> kAllRelations = {
    Relation::Next,   Relation::Sub,    Relation::Sup,   Relation::PreSub,
    Relation::PreSup, Relation::Inside, Relation::Above, Relation::Below,
};

/// Relations sorted by their upper-case name; the child order used by every
/// tree traversal that is not reading order.
inline constexpr std::array<Relation, kRelationCount> kRelationsByName = {
    Relation::Above,  Relation::Below,  Relation::Inside, Relation::Next,
    Relation::PreSub, Relation::PreSup, Relation::Sub,    Relation::Sup,
};

[[nodiscard]] std::string_view relation_name(Relation r) noexcept;

/// Single-character code used in tuple terms: n, b (sub), a (sup), d (presub),
/// c (presup), w (inside), o (above), u (below).
[[nodiscard]] char relation_code(Relation r) noexcept;

[[nodiscard]] inline std::size_t relation_index(Relation r) noexcept
{
    return static_cast<std::size_t>(r);
}

}  // namespace mathfind
