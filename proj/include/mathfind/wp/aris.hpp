#pragma once

#include <map>
#include <string>
#include <vector>

#include "mathfind/wp/rational.hpp"

namespace mathfind {

enum class VerbCategory {
    Observation,
    Positive,
    Negative,
    PositiveTransfer,
    NegativeTransfer,
    Construct,
    Destroy,
};

[[nodiscard]] std::string_view verb_category_name(VerbCategory c) noexcept;

using VerbLexicon = std::map<std::string, VerbCategory, std::less<>>;

/// had/has -> observation, got/found -> positive, lost/ate -> negative,
/// gave -> negative transfer, received -> positive transfer, ...
[[nodiscard]] VerbLexicon const& default_verb_lexicon();

/// Linear combination of unknowns plus a constant.
struct Quantity {
    Rational constant;
    std::map<int, Rational> terms;  // unknown index -> coefficient

    [[nodiscard]] bool is_constant() const { return terms.empty(); }
    friend bool operator==(Quantity const&, Quantity const&) = default;
};

struct EntityTriple {
    Quantity quantity;
    std::string type;       // singular entity noun
    std::string attribute;  // may be empty
};

struct ContainerState {
    std::string subject;
    std::vector<EntityTriple> entities;
};

/// Containers touched by one sentence (one or two), after the sentence.
struct WorldState {
    std::string sentence;
    VerbCategory category = VerbCategory::Observation;
    std::vector<ContainerState> containers;
};

struct ArisSolution {
    Rational answer;
    std::vector<WorldState> states;
    /// Display names of the unknowns (`J0`, `L1`), by index.
    std::vector<std::string> unknowns;
    /// Values of the unknowns the constraints determine.
    std::map<int, Rational> solved;
};

/// Solves a transfer problem written in the controlled grammar:
///
///   Subject verb (N|some [of her]) [attribute...] entity [and ...] [to|from|with Subject2] [left].
///   How many [attribute...] entity does|did Subject have [left]?
///
/// `did ... have` asks for the quantity before the first sentence, `does`
/// (or a trailing `left`) for the final one. Throws UnknownVerb, Unsolvable,
/// or Error for sentences outside the grammar.
[[nodiscard]] ArisSolution aris_solve(std::vector<std::string> const& sentences,
                                      std::string const& question,
                                      VerbLexicon const& lexicon = default_verb_lexicon());

/// Splits text on `.`, `!` and `?`; the last `?` sentence is the question.
[[nodiscard]] ArisSolution aris_solve_text(std::string const& text,
                                           VerbLexicon const& lexicon = default_verb_lexicon());

}  // namespace mathfind
