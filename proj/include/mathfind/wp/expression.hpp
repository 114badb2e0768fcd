#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mathfind/formula/opt.hpp"
#include "mathfind/wp/rational.hpp"

namespace mathfind {

/// Number tokens n1, n2, ... and their values, in order of appearance.
using NumberBinding = std::vector<std::pair<std::string, Rational>>;

/// Bottom-up value of an arithmetic OPT: numbers, bound tokens, +, -
/// (binary or unary), times/cdot/ast, divide and integer powers.
/// Throws EvalError.
[[nodiscard]] Rational evaluate_opt(OptTree const& expr, NumberBinding const& bindings = {});

/// Token sequences consumed by a stack evaluator. ArgsFirst writes each
/// operator after its arguments, OpsFirst before them.
enum class Traversal { ArgsFirst, OpsFirst };

/// Operators as `+`, `-`, `*`, `/`, `^`, unary minus as `neg`; n-ary sums
/// and products are folded to the left.
[[nodiscard]] std::vector<std::string> traversal(OptTree const& expr, Traversal mode);

/// Throws MalformedSequence on stack underflow or leftover values, EvalError
/// on unknown tokens or division by zero.
[[nodiscard]] Rational eval_traversal(std::vector<std::string> const& sequence, Traversal mode,
                                      NumberBinding const& bindings = {});

struct NumberSubstitution {
    std::string templ;
    NumberBinding binding;
    /// Where each token sits in `templ` and the numeral it replaced.
    struct Slot {
        std::size_t pos;
        std::string numeral;
    };
    std::vector<Slot> slots;
};

/// Replaces numerals left to right with n1, n2, ...
[[nodiscard]] NumberSubstitution substitute_numbers(std::string_view question);
/// Inverse of substitute_numbers.
[[nodiscard]] std::string rebind(NumberSubstitution const& s);

/// Solution of a single-unknown linear equation `lhs = rhs`. Throws
/// NonLinear when the unknown appears non-linearly, Unsolvable when the
/// equation has no unique solution or is not an equation.
[[nodiscard]] Rational solve_linear(OptTree const& equation, std::string const& unknown = "x",
                                    NumberBinding const& bindings = {});

/// Value of `expr` with `unknown` replaced by `value`.
[[nodiscard]] Rational evaluate_at(OptTree const& expr, std::string const& unknown, Rational value,
                                   NumberBinding const& bindings = {});

}  // namespace mathfind
