#pragma once

#include <string>

#include "mathfind/formula/opt.hpp"
#include "mathfind/formula/slt.hpp"

namespace mathfind {

struct CanonicalOptions {
    bool enumerate_variables = false;
    bool enumerate_constants = false;
    bool sort_unordered = false;
    bool normalize_equivalences = false;
    bool type_tags = false;
};

/// Label given to the i-th distinct variable (1-based).
[[nodiscard]] std::string enumerated_label(std::size_t index);
inline constexpr char const* kConstLabel = "const";

/// Replace each distinct variable label by its first-occurrence index:
/// reading order for layout trees, preorder for operator trees.
[[nodiscard]] SltTree enumerate_variables(SltTree const& slt);
[[nodiscard]] OptTree enumerate_variables(OptTree const& opt);

[[nodiscard]] SltTree enumerate_constants(SltTree const& slt);
[[nodiscard]] OptTree enumerate_constants(OptTree const& opt);

/// Sort children of unordered operators by code-point order of their prefix
/// linearization, bottom-up. Idempotent.
[[nodiscard]] OptTree sort_unordered_args(OptTree const& opt);

/// Rewrite to a fixpoint: A\geq B -> B\leq A, A>B -> B<A, \prec -> <,
/// \preceq -> \leq, \cdot and * -> times; re-flattens times chains.
[[nodiscard]] OptTree normalize_equivalences(OptTree const& opt);

/// Label aliasing on a layout tree (\cdot, * -> \times; \prec -> <;
/// \preceq -> \leq). Argument order is left untouched.
[[nodiscard]] SltTree normalize_equivalences(SltTree const& slt);

/// Prefix every label with its kind tag, e.g. `V!x`, `U!+`.
[[nodiscard]] OptTree tag_types(OptTree const& opt);

/// Apply the enabled transforms in a fixed order: equivalences, variable
/// enumeration, constant enumeration, sorting, type tags. All-off is the
/// identity.
[[nodiscard]] OptTree canonicalize(OptTree const& opt, CanonicalOptions const& options);

}  // namespace mathfind
