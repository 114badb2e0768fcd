#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mathfind {

/// Fraction of answers identical to their target.
[[nodiscard]] double exact_match(std::vector<std::string> const& answers,
                                 std::vector<std::string> const& targets);

/// Trimmed, lowercased, comma-separated lists compared element by element
/// in order; numeric elements compare within a relative tolerance.
[[nodiscard]] bool answers_equivalent(std::string_view answer, std::string_view target,
                                      double rel_tol = 1e-6);

/// Fraction of answers equivalent to their target.
[[nodiscard]] double accuracy(std::vector<std::string> const& answers,
                              std::vector<std::string> const& targets, double rel_tol = 1e-6);

/// Best F1 over targets between whitespace token multisets.
[[nodiscard]] double token_f1(std::string_view answer, std::vector<std::string> const& targets);

[[nodiscard]] std::size_t edit_distance(std::string_view a, std::string_view b);
/// Distance over the longer length; 0 for two empty strings.
[[nodiscard]] double normalized_edit_distance(std::string_view a, std::string_view b);

/// Mean of 1/p over the probabilities given to the correct answers.
/// Throws EvalError for an empty list or a probability outside (0,1].
[[nodiscard]] double perplexity(std::vector<double> const& probabilities);

}  // namespace mathfind
