#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace mathfind {

struct WordProblem {
    std::string id;
    std::string question;
    std::optional<std::string> equation;  // LaTeX
    /// Expressions in the unknown whose values form the answer list;
    /// empty means the unknown itself.
    std::vector<std::string> targets;
    std::optional<std::string> answer;
};

enum class SolveMode { Equation, Aris };

/// JSON lines with `id`, `question`, optional `equation`, `targets` and
/// `answer`. Throws FormatError.
[[nodiscard]] std::vector<WordProblem> read_problems(std::istream& in);
[[nodiscard]] std::vector<WordProblem> read_problems(std::filesystem::path const& path);

/// Predicted answer as text (`72`, `3, 4`). Equation mode solves the
/// equation for its single variable, or evaluates it when it has no `=`.
/// Throws the solver's errors.
[[nodiscard]] std::string solve_problem(WordProblem const& problem, SolveMode mode);

}  // namespace mathfind
