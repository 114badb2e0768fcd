#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mathfind/formula/opt.hpp"
#include "mathfind/formula/slt.hpp"

namespace mathfind {

/// (parent, descendant, relation path) pattern from a layout tree.
struct SltTuple {
    std::string parent;
    std::string child;
    std::vector<Relation> path;
    int count = 1;

    friend bool operator==(SltTuple const&, SltTuple const&) = default;
};

/// Path codes joined, e.g. "nn" for NEXT NEXT.
[[nodiscard]] std::string path_code(std::vector<Relation> const& path);
/// `(a,+,n)`
[[nodiscard]] std::string tuple_string(SltTuple const& t);

/// Tuples for every ancestor/descendant pair at distance <= max_path_length,
/// collapsed with counts and sorted by tuple string.
[[nodiscard]] std::vector<SltTuple> slt_tuples(SltTree const& slt, int max_path_length = 1);

/// Parent/child edge of an operator tree. `position` is the 1-based argument
/// position under ordered operators and 0 under unordered ones.
struct OptTuple {
    std::string parent;
    std::string child;
    int position = 0;

    friend bool operator==(OptTuple const&, OptTuple const&) = default;
};

[[nodiscard]] std::vector<OptTuple> opt_tuples(OptTree const& opt);

/// One label sequence per leaf, leaf first, root last, in leaf preorder.
[[nodiscard]] std::vector<std::vector<std::string>> opt_leafroot_paths(OptTree const& opt,
                                                                       bool enumerate = false);

struct GeneralizedTermSet {
    std::vector<std::string> concrete;
    std::vector<std::string> generalized;
};

/// Subexpression terms with and without wildcard arguments. Duplicates are
/// dropped; order is node preorder.
[[nodiscard]] GeneralizedTermSet wikimirs_terms(OptTree const& opt);

/// Infix rendering used by wikimirs terms.
[[nodiscard]] std::string infix_term(OptTree const& opt, NodeId id);

/// Lowercased alphanumeric runs. Bytes >= 0x80 count as word characters so
/// UTF-8 words stay whole.
[[nodiscard]] std::vector<std::string> text_words(std::string_view text);

enum class TermFamily : int { Slt = 0, Opt = 1, WikiMirs = 2, Token = 3, Text = 4 };
inline constexpr int kTermFamilyCount = 5;

[[nodiscard]] std::string_view family_prefix(TermFamily f) noexcept;
[[nodiscard]] std::string_view family_name(TermFamily f) noexcept;
/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] TermFamily family_from_name(std::string_view name);
/// Family of a prefixed term; throws std::invalid_argument when unprefixed.
[[nodiscard]] TermFamily family_of(std::string_view term);
/// Matching weight of a term: generalized wikimirs terms count half.
[[nodiscard]] double term_weight(std::string_view term) noexcept;

struct ExtractorConfig {
    bool slt = true;
    bool opt = true;
    bool wikimirs = true;
    bool tokens = true;
    bool text = true;
    int slt_max_path = 1;

    [[nodiscard]] bool enabled(TermFamily f) const noexcept;
    friend bool operator==(ExtractorConfig const&, ExtractorConfig const&) = default;
};

/// Prefixed term -> count.
using TermCounts = std::map<std::string, int, std::less<>>;

/// Formula terms of one family. Families that need an operator tree yield
/// nothing when translation fails; ParseError propagates.
[[nodiscard]] TermCounts formula_terms(std::string_view latex, TermFamily family,
                                       ExtractorConfig const& config = {});
/// All enabled formula families; unparsable LaTeX yields no terms.
[[nodiscard]] TermCounts formula_terms(std::string_view latex, ExtractorConfig const& config);
[[nodiscard]] TermCounts text_terms(std::string_view text);

}  // namespace mathfind
